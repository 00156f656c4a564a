#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "diffusion.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "randgraph.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "weights.hpp"

namespace gprank {

// Seed-set community detection: rank vertices by a weighted diffusion score
// from the seeds, predict the top-Q set, score it by recall against the
// ground-truth community.
struct DetectionConfig {
    std::size_t Q = 0;          // 0 means |community|
    std::size_t seed_count = 1;
    std::size_t trials = 1;
    bool normalized = true;     // score the degree-normalized sequence
    bool include_seeds = true;  // force seeds into the predicted set
    RngConfig rng;
    int threads = 1;
};

struct DetectionResult {
    std::string scheme_label;
    int K = 0;
    std::size_t Q = 0;
    std::vector<double> recalls;
    double mean_recall = 0.0;
    double std_recall = 0.0;
};

// Seed vertices drawn uniformly without replacement, returned sorted.
inline std::vector<Vertex> sample_seeds(const std::vector<Vertex>& community,
                                        std::size_t count, Xoshiro256pp& stream) {
    if (count == 0) throw config_error("sample_seeds: count must be positive");
    auto seeds = sample_without_replacement(community, count, stream);
    std::sort(seeds.begin(), seeds.end());
    return seeds;
}

inline std::vector<Vertex> sample_seeds(const std::vector<Vertex>& community,
                                        std::size_t count, const RngConfig& rng,
                                        std::uint64_t trial) {
    auto stream = trial_stream(rng, trial);
    return sample_seeds(community, count, stream);
}

// Indices of the Q highest scores, ties broken by ascending vertex index.
// `forced` vertices occupy slots unconditionally. Returned sorted ascending.
inline std::vector<Vertex> top_q(const std::vector<double>& scores, std::size_t Q,
                                 const std::vector<Vertex>& forced = {}) {
    const std::size_t n = scores.size();
    if (Q > n) throw config_error("top_q: Q exceeds vertex count");
    std::vector<Vertex> picked(forced);
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    if (!picked.empty() && picked.back() >= n)
        throw config_error("top_q: forced vertex out of range");
    if (picked.size() > Q) throw config_error("top_q: more forced vertices than Q");
    std::vector<char> taken(n, 0);
    for (Vertex v : picked) taken[v] = 1;
    std::vector<Vertex> rest;
    rest.reserve(n - picked.size());
    for (Vertex v = 0; v < n; ++v)
        if (!taken[v]) rest.push_back(v);
    const std::size_t need = Q - picked.size();
    auto better = [&scores](Vertex a, Vertex b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    if (need < rest.size())
        std::partial_sort(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(need),
                          rest.end(), better);
    rest.resize(need);
    picked.insert(picked.end(), rest.begin(), rest.end());
    std::sort(picked.begin(), picked.end());
    return picked;
}

// |predicted ∩ truth| / |truth|; both inputs sorted ascending.
inline double recall(const std::vector<Vertex>& predicted, const std::vector<Vertex>& truth) {
    if (truth.empty()) throw config_error("recall: empty ground-truth community");
    std::size_t hits = 0;
    auto p = predicted.begin();
    for (Vertex t : truth) {
        while (p != predicted.end() && *p < t) ++p;
        if (p != predicted.end() && *p == t) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

namespace detail {

// Graph source for one trial: either a fixed graph shared by all trials or a
// fresh draw owned by the trial.
struct TrialGraph {
    const Graph* fixed_g = nullptr;
    const std::vector<Vertex>* fixed_community = nullptr;
    std::size_t resamples = 0;
    bool sampled = false;
    SbmSample owned;

    const Graph& graph() const { return sampled ? owned.g : *fixed_g; }
    const std::vector<Vertex>& community() const {
        return sampled ? owned.communities.communities.front() : *fixed_community;
    }
};

using TrialGraphFn = std::function<TrialGraph(std::size_t, Xoshiro256pp&)>;

struct RecallSweepResult {
    std::vector<DetectionResult> cells;
    std::size_t resamples = 0;
};

// Shared driver for every recall experiment. All schemes are scored from one
// landing-probability run per trial and seed draws are shared, so results
// across schemes, steps and budgets are paired. Per-cell recalls land in
// trial-indexed slots and are reduced in index order afterwards.
inline RecallSweepResult recall_sweep(const TrialGraphFn& make_trial,
                                      const std::vector<WeightScheme>& schemes,
                                      const DetectionConfig& cfg,
                                      const std::vector<int>& k_list,
                                      const std::vector<std::size_t>& q_list) {
    if (schemes.empty()) throw config_error("recall experiment: no schemes");
    const int k_max = schemes.front().K();
    for (const auto& s : schemes)
        if (s.K() != k_max)
            throw config_error("recall experiment: schemes must share one K");
    if (cfg.trials == 0) throw config_error("recall experiment: trials must be positive");
    const bool over_steps = !k_list.empty();
    if (over_steps == !q_list.empty())
        throw config_error("recall experiment: exactly one sweep axis expected");
    for (int k : k_list)
        if (k < 0 || k > k_max)
            throw config_error("recall experiment: step checkpoint outside [0,K]");
    const std::size_t cells_per_scheme = over_steps ? k_list.size() : q_list.size();
    const std::size_t cell_count = schemes.size() * cells_per_scheme;

    std::vector<std::vector<double>> recalls(cell_count,
                                             std::vector<double>(cfg.trials, 0.0));
    std::vector<std::size_t> resamples(cfg.trials, 0);
    std::vector<std::size_t> resolved_q(cfg.trials, 0);

    parallel_for_index(cfg.trials, cfg.threads, [&](std::size_t trial) {
        auto stream = trial_stream(cfg.rng, trial);
        const TrialGraph tg = make_trial(trial, stream);
        const Graph& g = tg.graph();
        const std::vector<Vertex>& community = tg.community();
        resamples[trial] = tg.resamples;
        if (community.empty())
            throw config_error("recall experiment: empty community");
        if (cfg.seed_count > community.size())
            throw config_error("recall experiment: more seeds than community members");
        const std::size_t Q = cfg.Q == 0 ? community.size() : cfg.Q;
        if (Q > g.n()) throw config_error("recall experiment: Q exceeds vertex count");
        resolved_q[trial] = Q;

        const auto seeds = sample_seeds(community, cfg.seed_count, stream);
        std::vector<double> x0(g.n(), 0.0);
        for (Vertex s : seeds) x0[s] = 1.0 / static_cast<double>(seeds.size());
        const LpSequence lps = landing_probabilities(g, x0, k_max, cfg.normalized);
        const auto& steps = cfg.normalized ? lps.z : lps.x;
        const std::vector<Vertex> no_force;
        const std::vector<Vertex>& forced = cfg.include_seeds ? seeds : no_force;

        for (std::size_t si = 0; si < schemes.size(); ++si) {
            const auto& gamma = schemes[si].gamma;
            if (over_steps) {
                std::vector<double> score(g.n(), 0.0);
                std::size_t ki = 0;
                for (int k = 0; k <= k_max && ki < k_list.size(); ++k) {
                    if (gamma[static_cast<std::size_t>(k)] != 0.0) {
                        const auto& fk = steps[static_cast<std::size_t>(k)];
                        const double gk = gamma[static_cast<std::size_t>(k)];
                        for (std::size_t v = 0; v < score.size(); ++v)
                            score[v] += gk * fk[v];
                    }
                    while (ki < k_list.size() && k_list[ki] == k) {
                        const auto predicted = top_q(score, Q, forced);
                        recalls[si * cells_per_scheme + ki][trial] =
                            recall(predicted, community);
                        ++ki;
                    }
                }
            } else {
                const std::vector<double> score = gpr(lps, schemes[si], cfg.normalized);
                for (std::size_t qi = 0; qi < q_list.size(); ++qi) {
                    const auto predicted = top_q(score, q_list[qi], forced);
                    recalls[si * cells_per_scheme + qi][trial] = recall(predicted, community);
                }
            }
        }
    });

    RecallSweepResult out;
    for (std::size_t t = 0; t < cfg.trials; ++t) out.resamples += resamples[t];
    out.cells.reserve(cell_count);
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        for (std::size_t ci = 0; ci < cells_per_scheme; ++ci) {
            DetectionResult cell;
            cell.scheme_label = schemes[si].label;
            cell.K = over_steps ? k_list[ci] : k_max;
            cell.Q = over_steps ? resolved_q.front() : q_list[ci];
            cell.recalls = std::move(recalls[si * cells_per_scheme + ci]);
            const MeanStd ms = mean_std(cell.recalls);
            cell.mean_recall = ms.mean;
            cell.std_recall = ms.std;
            out.cells.push_back(std::move(cell));
        }
    }
    return out;
}

inline TrialGraphFn fixed_graph_source(const Graph& g, const std::vector<Vertex>& community) {
    return [&g, &community](std::size_t, Xoshiro256pp&) {
        TrialGraph tg;
        tg.fixed_g = &g;
        tg.fixed_community = &community;
        return tg;
    };
}

// Fresh SBM draw per trial; the recovery target is block C1.
inline TrialGraphFn sbm_graph_source(const SbmSpec& spec) {
    return [spec](std::size_t, Xoshiro256pp& stream) {
        TrialGraph tg;
        tg.sampled = true;
        tg.owned = sample_sbm_no_isolated(spec, stream);
        tg.resamples = tg.owned.resamples;
        return tg;
    };
}

} // namespace detail

// Recall of one scheme on a fixed graph, across seed-draw trials.
inline DetectionResult run_detection(const Graph& g, const std::vector<Vertex>& community,
                                     const WeightScheme& scheme, const DetectionConfig& cfg) {
    auto result = detail::recall_sweep(detail::fixed_graph_source(g, community), {scheme},
                                       cfg, {scheme.K()}, {});
    return std::move(result.cells.front());
}

// Recall at each step checkpoint in k_list, paired across schemes and steps.
inline std::vector<DetectionResult> recall_vs_steps(const Graph& g,
                                                    const std::vector<Vertex>& community,
                                                    const std::vector<WeightScheme>& schemes,
                                                    const DetectionConfig& cfg,
                                                    const std::vector<int>& k_list) {
    return detail::recall_sweep(detail::fixed_graph_source(g, community), schemes, cfg,
                                k_list, {})
        .cells;
}

// Recall at each budget in q_list, paired. A budget of 0 predicts the empty
// set (valid only without forced seeds).
inline std::vector<DetectionResult> recall_vs_budget(const Graph& g,
                                                     const std::vector<Vertex>& community,
                                                     const std::vector<WeightScheme>& schemes,
                                                     const DetectionConfig& cfg,
                                                     const std::vector<std::size_t>& q_list) {
    return detail::recall_sweep(detail::fixed_graph_source(g, community), schemes, cfg, {},
                                q_list)
        .cells;
}

struct SbmRecallResult {
    std::vector<DetectionResult> cells;
    std::size_t resamples = 0;
};

// Same sweeps with a fresh block-model draw per trial (the synthetic
// protocol); recovery targets block C1.
inline SbmRecallResult sbm_recall_vs_steps(const SbmSpec& spec,
                                           const std::vector<WeightScheme>& schemes,
                                           const DetectionConfig& cfg,
                                           const std::vector<int>& k_list) {
    auto result =
        detail::recall_sweep(detail::sbm_graph_source(spec), schemes, cfg, k_list, {});
    return {std::move(result.cells), result.resamples};
}

inline SbmRecallResult sbm_recall_vs_budget(const SbmSpec& spec,
                                            const std::vector<WeightScheme>& schemes,
                                            const DetectionConfig& cfg,
                                            const std::vector<std::size_t>& q_list) {
    auto result =
        detail::recall_sweep(detail::sbm_graph_source(spec), schemes, cfg, {}, q_list);
    return {std::move(result.cells), result.resamples};
}

// Indices of communities matching the n^{3/4} size rule. With an explicit
// window [lo,hi] every community whose size falls inside is selected;
// otherwise the communities nearest to n^{3/4} are returned.
inline std::vector<std::size_t> select_communities_m34(const CommunitySet& cs, std::size_t n,
                                                       std::size_t window_lo = 0,
                                                       std::size_t window_hi = 0) {
    if (cs.communities.empty())
        throw config_error("select_communities_m34: no communities");
    std::vector<std::size_t> selected;
    if (window_hi > 0) {
        if (window_lo > window_hi)
            throw config_error("select_communities_m34: window_lo exceeds window_hi");
        for (std::size_t i = 0; i < cs.communities.size(); ++i) {
            const std::size_t size = cs.communities[i].size();
            if (size >= window_lo && size <= window_hi) selected.push_back(i);
        }
        return selected;
    }
    const double target = std::pow(static_cast<double>(n), 0.75);
    double best = -1.0;
    for (const auto& community : cs.communities) {
        const double dist = std::abs(static_cast<double>(community.size()) - target);
        if (best < 0.0 || dist < best) best = dist;
    }
    for (std::size_t i = 0; i < cs.communities.size(); ++i)
        if (std::abs(static_cast<double>(cs.communities[i].size()) - target) == best)
            selected.push_back(i);
    return selected;
}

// Error of the rank-by-one-feature classifier that predicts the top n1
// vertices as block C1. `block` holds exactly n1 ones.
inline double single_feature_error(const std::vector<double>& feature,
                                   const std::vector<int>& block, std::size_t n1) {
    if (feature.size() != block.size() || feature.empty())
        throw config_error("single_feature_error: size mismatch");
    std::size_t ones = 0;
    for (int b : block) ones += b == 1 ? 1u : 0u;
    if (ones != n1 || n1 > feature.size())
        throw config_error("single_feature_error: block counts do not match n1");
    std::vector<Vertex> order(feature.size());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n1),
                      order.end(), [&feature](Vertex a, Vertex b) {
                          if (feature[a] != feature[b]) return feature[a] > feature[b];
                          return a < b;
                      });
    std::size_t wrong_top = 0;
    for (std::size_t i = 0; i < n1; ++i)
        if (block[order[i]] != 1) ++wrong_top;
    // the classifier is budgeted at n1, so misses mirror the false positives
    return 2.0 * static_cast<double>(wrong_top) / static_cast<double>(feature.size());
}

} // namespace gprank
