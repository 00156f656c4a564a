#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "randgraph.hpp"
#include "weights.hpp"

namespace gprank {

// Landing probabilities x^(0)..x^(K) of the lazy-free walk, plus the
// degree-normalized variant z^(k) = sum(d) D^{-1} x^(k) when requested.
struct LpSequence {
    std::vector<std::vector<double>> x;
    std::vector<std::vector<double>> z;

    int K() const { return static_cast<int>(x.size()) - 1; }
    std::size_t n() const { return x.empty() ? 0 : x.front().size(); }
    bool has_normalized() const { return !z.empty(); }
};

inline LpSequence landing_probabilities(const Graph& g, const std::vector<double>& x0,
                                        int K, bool normalized) {
    if (K < 0) throw config_error("landing_probabilities: K must be nonnegative");
    detail::check_distribution(g, x0);
    if (g.n() == 0 || g.min_degree() == 0)
        throw numeric_error("landing_probabilities: graph has a zero-degree vertex");
    LpSequence lps;
    lps.x.reserve(static_cast<std::size_t>(K) + 1);
    lps.x.push_back(x0);
    for (int k = 1; k <= K; ++k) {
        std::vector<double> next;
        detail::walk_step_unchecked(g, lps.x.back(), next);
        lps.x.push_back(std::move(next));
    }
    if (normalized) {
        const double total = static_cast<double>(g.total_degree());
        lps.z.reserve(lps.x.size());
        for (const auto& xk : lps.x) {
            std::vector<double> zk(g.n());
            for (Vertex v = 0; v < g.n(); ++v)
                zk[v] = total * xk[v] / static_cast<double>(g.degree(v));
            lps.z.push_back(std::move(zk));
        }
    }
    return lps;
}

// Weighted combination sum_k gamma_k f^(k) over the stored steps, where f is
// the raw or the degree-normalized sequence. Accumulation order is fixed
// (k ascending), so scores are reproducible bit for bit.
inline std::vector<double> gpr(const LpSequence& lps, const WeightScheme& w,
                               bool use_normalized) {
    if (static_cast<int>(w.gamma.size()) != lps.K() + 1)
        throw config_error("gpr: weight count must equal K+1");
    if (use_normalized && !lps.has_normalized())
        throw config_error("gpr: normalized steps were not computed");
    const auto& steps = use_normalized ? lps.z : lps.x;
    std::vector<double> score(lps.n(), 0.0);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const double gamma = w.gamma[k];
        if (gamma == 0.0) continue;
        const auto& fk = steps[k];
        for (std::size_t v = 0; v < score.size(); ++v) score[v] += gamma * fk[v];
    }
    return score;
}

// Block-level landing-probability recursion of the averaged walk: mass P1 in
// the seed block evolves by P1' = beta1 P1 + (1-beta0) P0 from P1(0) = 1.
struct MeanFieldLp {
    SbmSpec spec;
    MeanFieldModel model;
    std::vector<double> p1;
    std::vector<double> p0;

    int K() const { return static_cast<int>(p1.size()) - 1; }

    // Per-vertex expected landing probability, uniform within a block.
    double xbar(int k, int block) const {
        const auto i = static_cast<std::size_t>(k);
        return block == 1 ? p1[i] / static_cast<double>(spec.n1)
                          : p0[i] / static_cast<double>(spec.n0);
    }

    // Per-vertex expected degree-normalized landing probability.
    double zbar(int k, int block) const {
        const double dbar = block == 1 ? model.dbar1 : model.dbar0;
        return model.total_dbar * xbar(k, block) / dbar;
    }
};

inline MeanFieldLp mean_field_lp(const SbmSpec& spec, int K) {
    if (K < 0) throw config_error("mean_field_lp: K must be nonnegative");
    MeanFieldLp mf;
    mf.spec = spec;
    mf.model = mean_field(spec);
    mf.p1.reserve(static_cast<std::size_t>(K) + 1);
    mf.p0.reserve(static_cast<std::size_t>(K) + 1);
    mf.p1.push_back(1.0);
    mf.p0.push_back(0.0);
    for (int k = 1; k <= K; ++k) {
        const double next = mf.model.beta1 * mf.p1.back() +
                            (1.0 - mf.model.beta0) * mf.p0.back();
        mf.p1.push_back(next);
        mf.p0.push_back(1.0 - next);
    }
    return mf;
}

// Stationary block masses (pi1, pi0) of the averaged walk.
inline std::pair<double, double> stationary_block_mass(const MeanFieldModel& m) {
    const double denom = 2.0 - m.beta1 - m.beta0;
    if (denom <= 0.0)
        throw numeric_error("stationary_block_mass: blocks exchange no mass");
    return {(1.0 - m.beta0) / denom, (1.0 - m.beta1) / denom};
}

// The recursion moves the stationary-deviation of P1 by a bare lambda2_bar
// multiply each step, so gap(k) = lambda2_bar^k * pi0 * (1/(n1 dbar1) + 1/(n0 dbar0)).
inline double recursion_gap_constant(const SbmSpec& spec) {
    const MeanFieldModel m = mean_field(spec);
    const double a = static_cast<double>(spec.n1) * m.dbar1;
    const double b = static_cast<double>(spec.n0) * m.dbar0;
    const double denom = 2.0 - m.beta1 - m.beta0;
    if (denom <= 0.0) return 1.0 / a;
    const double pi0 = (1.0 - m.beta1) / denom;
    return pi0 * (1.0 / a + 1.0 / b);
}

// A commonly quoted closed form for the symmetric case carries an extra
// (1 - lambda2_bar) factor; exposed so reports can show both constants.
inline double damped_gap_constant(const SbmSpec& spec) {
    const MeanFieldModel m = mean_field(spec);
    const double a = static_cast<double>(spec.n1) * m.dbar1;
    return (1.0 - m.lambda2_bar) / a;
}

// Expected between-block gap of the degree-normalized landing probability at
// step k, on the per-edge scale (no total-degree factor). Tracking the
// stationary-deviation directly keeps the value exact once the block shares
// have converged, where differencing the raw masses would cancel away.
inline double mean_gap(const SbmSpec& spec, int k) {
    if (k < 0) throw config_error("mean_gap: k must be nonnegative");
    const MeanFieldModel m = mean_field(spec);
    const double a = static_cast<double>(spec.n1) * m.dbar1;
    const double b = static_cast<double>(spec.n0) * m.dbar0;
    const double denom = 2.0 - m.beta1 - m.beta0;
    if (denom <= 0.0) return 1.0 / a;
    double deviation = (1.0 - m.beta1) / denom;
    for (int i = 0; i < k; ++i) deviation *= m.lambda2_bar;
    return deviation * (1.0 / a + 1.0 / b);
}

// Distances between one sampled landing-probability sequence and the
// mean-field prediction, per step.
struct StepDeviation {
    double sq_l2_x = 0.0;
    double sq_l2_z = 0.0;
    double l1_x = 0.0;
    double l1_z = 0.0;
};

// `block` holds 1 for seed-block vertices and 0 otherwise; counts must match
// the block-model parameters the mean-field sequence was built from.
inline std::vector<StepDeviation> deviation_norms(const LpSequence& lps,
                                                  const MeanFieldLp& mf,
                                                  const std::vector<int>& block) {
    if (!lps.has_normalized())
        throw config_error("deviation_norms: normalized steps were not computed");
    if (lps.n() != mf.spec.n() || block.size() != mf.spec.n())
        throw config_error("deviation_norms: vertex count mismatch");
    if (lps.K() != mf.K())
        throw config_error("deviation_norms: step count mismatch");
    std::size_t ones = 0;
    for (int b : block) {
        if (b != 0 && b != 1)
            throw config_error("deviation_norms: block labels must be 0 or 1");
        if (b == 1) ++ones;
    }
    if (ones != mf.spec.n1)
        throw config_error("deviation_norms: block sizes do not match the model parameters");
    std::vector<StepDeviation> out(lps.x.size());
    for (std::size_t k = 0; k < lps.x.size(); ++k) {
        const double xbar[2] = {mf.xbar(static_cast<int>(k), 0), mf.xbar(static_cast<int>(k), 1)};
        const double zbar[2] = {mf.zbar(static_cast<int>(k), 0), mf.zbar(static_cast<int>(k), 1)};
        StepDeviation& d = out[k];
        for (std::size_t v = 0; v < block.size(); ++v) {
            const double dx = lps.x[k][v] - xbar[block[v]];
            const double dz = lps.z[k][v] - zbar[block[v]];
            d.sq_l2_x += dx * dx;
            d.sq_l2_z += dz * dz;
            d.l1_x += std::abs(dx);
            d.l1_z += std::abs(dz);
        }
    }
    return out;
}

} // namespace gprank
