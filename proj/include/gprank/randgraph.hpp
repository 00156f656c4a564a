#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace gprank {

// Two-block stochastic block model. Within-block edges appear with p1 / p0,
// cross-block edges with q, and self-loops are drawn at the within-block
// probability.
struct SbmSpec {
    std::size_t n1 = 0;
    std::size_t n0 = 0;
    double p1 = 0.0;
    double p0 = 0.0;
    double q = 0.0;

    std::size_t n() const { return n1 + n0; }

    void validate() const {
        if (n1 == 0 || n0 == 0)
            throw config_error("SbmSpec: block sizes must be positive");
        for (double p : {p1, p0, q})
            if (!(p >= 0.0 && p <= 1.0))
                throw config_error("SbmSpec: probabilities must lie in [0,1]");
    }
};

// Expectation-level quantities of the block model. beta1 / beta0 are the
// within-block mass-retention fractions of the averaged walk matrix; its
// second eigenvalue is beta1 + beta0 - 1.
struct MeanFieldModel {
    double beta1 = 0.0;
    double beta0 = 0.0;
    double lambda2_bar = 0.0;
    double dbar1 = 0.0;
    double dbar0 = 0.0;
    double total_dbar = 0.0;

    double dbar_min() const { return dbar1 < dbar0 ? dbar1 : dbar0; }
    double dbar_max() const { return dbar1 > dbar0 ? dbar1 : dbar0; }
};

inline MeanFieldModel mean_field(const SbmSpec& spec) {
    spec.validate();
    MeanFieldModel m;
    const auto n1 = static_cast<double>(spec.n1);
    const auto n0 = static_cast<double>(spec.n0);
    m.dbar1 = n1 * spec.p1 + n0 * spec.q;
    m.dbar0 = n0 * spec.p0 + n1 * spec.q;
    if (m.dbar1 <= 0.0 || m.dbar0 <= 0.0)
        throw config_error("mean_field: a block has zero expected degree");
    m.beta1 = n1 * spec.p1 / m.dbar1;
    m.beta0 = n0 * spec.p0 / m.dbar0;
    m.lambda2_bar = m.beta1 + m.beta0 - 1.0;
    m.total_dbar = n1 * m.dbar1 + n0 * m.dbar0;
    return m;
}

// Sampled graph plus its two ground-truth blocks C1 = [0,n1), C0 = [n1,n).
struct SbmSample {
    Graph g;
    CommunitySet communities;
    std::size_t resamples = 0;
};

// Draws one SBM realization from the stream. Pair scan order is fixed
// (u ascending, v from u), so a given stream state yields one graph.
inline SbmSample sample_sbm(const SbmSpec& spec, Xoshiro256pp& stream) {
    spec.validate();
    const std::size_t n = spec.n();
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u; v < n; ++v) {
            const bool same_block = (u < spec.n1) == (v < spec.n1);
            const double p = !same_block ? spec.q : (u < spec.n1 ? spec.p1 : spec.p0);
            if (stream.bernoulli(p))
                edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        }
    }
    SbmSample out;
    out.g = Graph::from_edges(n, std::move(edges));
    std::vector<Vertex> c1(spec.n1), c0(spec.n0);
    for (std::size_t v = 0; v < spec.n1; ++v) c1[v] = static_cast<Vertex>(v);
    for (std::size_t v = 0; v < spec.n0; ++v) c0[v] = static_cast<Vertex>(spec.n1 + v);
    out.communities.communities = {std::move(c1), std::move(c0)};
    return out;
}

inline SbmSample sample_sbm(const SbmSpec& spec, const RngConfig& rng, std::uint64_t trial) {
    auto stream = trial_stream(rng, trial);
    return sample_sbm(spec, stream);
}

// Redraws from the same stream until no vertex is isolated; the number of
// rejected graphs is reported so experiments can disclose it.
inline SbmSample sample_sbm_no_isolated(const SbmSpec& spec, Xoshiro256pp& stream,
                                        std::size_t max_attempts = 1000) {
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        SbmSample sample = sample_sbm(spec, stream);
        if (sample.g.min_degree() >= 1) {
            sample.resamples = attempt;
            return sample;
        }
    }
    throw numeric_error("sample_sbm_no_isolated: isolated vertices persist after " +
                        std::to_string(max_attempts) + " attempts");
}

struct ErSample {
    Graph g;
    std::size_t resamples = 0;
};

// Erdos-Renyi sampler (one-block model, so self-loops appear at p as well).
inline Graph sample_er(std::size_t n, double p, Xoshiro256pp& stream) {
    if (n == 0) throw config_error("sample_er: n must be positive");
    if (!(p >= 0.0 && p <= 1.0))
        throw config_error("sample_er: p must lie in [0,1]");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u; v < n; ++v)
            if (stream.bernoulli(p))
                edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    return Graph::from_edges(n, std::move(edges));
}

inline ErSample sample_er_no_isolated(std::size_t n, double p, Xoshiro256pp& stream,
                                      std::size_t max_attempts = 1000) {
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        ErSample sample{sample_er(n, p, stream), attempt};
        if (sample.g.min_degree() >= 1) return sample;
    }
    throw numeric_error("sample_er_no_isolated: isolated vertices persist after " +
                        std::to_string(max_attempts) + " attempts");
}

} // namespace gprank
