#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "detect.hpp"
#include "diffusion.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "randgraph.hpp"
#include "rng.hpp"
#include "spectral.hpp"
#include "stats.hpp"
#include "weights.hpp"

namespace gprank {

// Monte Carlo comparison of sampled landing probabilities against their
// mean-field values. One fresh block-model draw per trial, single seed fixed
// at vertex 0 of C1.
struct VarianceTable {
    SbmSpec spec;
    int K = 0;
    std::size_t trials = 0;
    std::uint64_t master_seed = 0;
    std::size_t resamples = 0;
    std::vector<double> mean_sq_l2_x;
    std::vector<double> mean_sq_l2_z;
    std::vector<double> mean_l1_x;
    std::vector<double> mean_l1_z;
    std::vector<double> lambda_subs;   // per-trial spectral estimates
    double mean_lambda_sub = 0.0;
};

inline VarianceTable variance_experiment(const SbmSpec& spec, int K, std::size_t trials,
                                         const RngConfig& rng, int threads,
                                         bool estimate_lambda = true) {
    if (trials == 0) throw config_error("variance_experiment: trials must be positive");
    const MeanFieldLp mf = mean_field_lp(spec, K);
    std::vector<int> block(spec.n(), 0);
    for (std::size_t v = 0; v < spec.n1; ++v) block[v] = 1;

    std::vector<std::vector<StepDeviation>> per_trial(trials);
    std::vector<std::size_t> resamples(trials, 0);
    std::vector<double> lambdas(trials, 0.0);
    parallel_for_index(trials, threads, [&](std::size_t trial) {
        auto stream = trial_stream(rng, trial);
        const SbmSample sample = sample_sbm_no_isolated(spec, stream);
        resamples[trial] = sample.resamples;
        std::vector<double> x0(spec.n(), 0.0);
        x0[0] = 1.0;
        const LpSequence lps = landing_probabilities(sample.g, x0, K, true);
        per_trial[trial] = deviation_norms(lps, mf, block);
        if (estimate_lambda)
            lambdas[trial] = lambda_sub_estimate(sample.g, 1e-10).lambda_sub;
    });

    VarianceTable table;
    table.spec = spec;
    table.K = K;
    table.trials = trials;
    table.master_seed = rng.master_seed;
    const auto steps = static_cast<std::size_t>(K) + 1;
    table.mean_sq_l2_x.assign(steps, 0.0);
    table.mean_sq_l2_z.assign(steps, 0.0);
    table.mean_l1_x.assign(steps, 0.0);
    table.mean_l1_z.assign(steps, 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        table.resamples += resamples[t];
        for (std::size_t k = 0; k < steps; ++k) {
            table.mean_sq_l2_x[k] += per_trial[t][k].sq_l2_x;
            table.mean_sq_l2_z[k] += per_trial[t][k].sq_l2_z;
            table.mean_l1_x[k] += per_trial[t][k].l1_x;
            table.mean_l1_z[k] += per_trial[t][k].l1_z;
        }
    }
    const auto scale = 1.0 / static_cast<double>(trials);
    for (std::size_t k = 0; k < steps; ++k) {
        table.mean_sq_l2_x[k] *= scale;
        table.mean_sq_l2_z[k] *= scale;
        table.mean_l1_x[k] *= scale;
        table.mean_l1_z[k] *= scale;
    }
    if (estimate_lambda) {
        table.lambda_subs = std::move(lambdas);
        table.mean_lambda_sub = mean_std(table.lambda_subs).mean;
    }
    return table;
}

// Slope of ln(values[k]) over the window [k_lo, k_hi]; the default window
// [2,10] skips the seeding transient.
inline double log_decay_slope(const std::vector<double>& values, int k_lo = 2, int k_hi = 10) {
    if (k_lo < 0 || k_hi >= static_cast<int>(values.size()) || k_lo >= k_hi)
        throw config_error("log_decay_slope: bad window");
    std::vector<double> xs, ys;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double v = values[static_cast<std::size_t>(k)];
        if (!(v > 0.0)) throw numeric_error("log_decay_slope: nonpositive value in window");
        xs.push_back(static_cast<double>(k));
        ys.push_back(std::log(v));
    }
    return ols_slope(xs, ys);
}

// Rank-by-one-feature classification of the two blocks, per step.
struct ClassificationTable {
    SbmSpec spec;
    int K = 0;
    std::size_t trials = 0;
    std::size_t resamples = 0;
    std::vector<double> mean_err_z;
    std::vector<double> std_err_z;
    std::vector<double> mean_err_x;
    std::vector<double> std_err_x;
};

inline ClassificationTable classification_experiment(const SbmSpec& spec, int K,
                                                     std::size_t trials, const RngConfig& rng,
                                                     int threads) {
    if (trials == 0) throw config_error("classification_experiment: trials must be positive");
    std::vector<int> block(spec.n(), 0);
    for (std::size_t v = 0; v < spec.n1; ++v) block[v] = 1;

    const auto steps = static_cast<std::size_t>(K) + 1;
    std::vector<std::vector<double>> err_z(steps, std::vector<double>(trials, 0.0));
    std::vector<std::vector<double>> err_x(steps, std::vector<double>(trials, 0.0));
    std::vector<std::size_t> resamples(trials, 0);
    parallel_for_index(trials, threads, [&](std::size_t trial) {
        auto stream = trial_stream(rng, trial);
        const SbmSample sample = sample_sbm_no_isolated(spec, stream);
        resamples[trial] = sample.resamples;
        std::vector<double> x0(spec.n(), 0.0);
        x0[0] = 1.0;
        const LpSequence lps = landing_probabilities(sample.g, x0, K, true);
        for (std::size_t k = 0; k < steps; ++k) {
            err_z[k][trial] = single_feature_error(lps.z[k], block, spec.n1);
            err_x[k][trial] = single_feature_error(lps.x[k], block, spec.n1);
        }
    });

    ClassificationTable table;
    table.spec = spec;
    table.K = K;
    table.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) table.resamples += resamples[t];
    table.mean_err_z.resize(steps);
    table.std_err_z.resize(steps);
    table.mean_err_x.resize(steps);
    table.std_err_x.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const MeanStd z = mean_std(err_z[k]);
        const MeanStd x = mean_std(err_x[k]);
        table.mean_err_z[k] = z.mean;
        table.std_err_z[k] = z.std;
        table.mean_err_x[k] = x.mean;
        table.std_err_x[k] = x.std;
    }
    return table;
}

// Inputs of the concentration bounds. lambda_bar is the larger magnitude
// among the averaged walk's subdominant eigenvalues.
struct BoundInputs {
    std::size_t n = 0;
    double dbar_min = 0.0;
    double dbar_max = 0.0;
    double lambda_bar = 0.0;
    double x0_l2 = 1.0;

    static BoundInputs from_spec(const SbmSpec& spec, double x0_l2 = 1.0) {
        const MeanFieldModel m = mean_field(spec);
        BoundInputs in;
        in.n = spec.n();
        in.dbar_min = m.dbar_min();
        in.dbar_max = m.dbar_max();
        in.lambda_bar = std::abs(m.lambda2_bar);
        in.x0_l2 = x0_l2;
        return in;
    }

    void validate() const {
        if (n < 2) throw config_error("BoundInputs: n must be at least 2");
        if (!(dbar_min > 0.0) || dbar_max < dbar_min)
            throw config_error("BoundInputs: bad degree range");
        if (!(lambda_bar >= 0.0)) throw config_error("BoundInputs: lambda_bar negative");
        if (!(x0_l2 > 0.0)) throw config_error("BoundInputs: x0_l2 must be positive");
    }
};

// Absolute constants left free by the bounds; first three enter the LP/GPR
// bound, c4/c5 the degree-normalized one, c6 the series decay condition.
struct BoundConstants {
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double c4 = 1.0;
    double c5 = 1.0;
    double c6 = 1.0;
};

struct BoundReport {
    BoundInputs in;
    BoundConstants c;
    int k = -1;
    double rho_lp = 0.0;       // lambda_bar + c3 sqrt(log n / dbar_min)
    double rho_dnlp = 0.0;     // lambda_bar + c5 sqrt(log n / dbar_min)
    double floor_term = 0.0;   // c1 sqrt(log n / (n dbar_min)) / x0_l2
    double step_term = 0.0;    // c2 k rho_lp^{k-1} sqrt(dbar_max log n / dbar_min^2)
    double rhs_lp = 0.0;       // floor_term + step_term
    double rhs_dnlp = 0.0;     // c4 k rho_dnlp^{k-1} sqrt(dbar_max log n / dbar_min^2)
    double g_value = 0.0;
    bool g_decay_ok = true;    // rho_lp < 1, so the infinite series would converge
    double rhs_gpr = 0.0;      // floor_term + c2 g sqrt(dbar_max log n / dbar_min^2)
    double g_condition_value = 0.0;      // sum gamma_k k (lambda_bar + c6)^{k-1}
    double g_condition_threshold = 0.0;  // sqrt(dbar_min / (n dbar_max))
};

namespace detail {

inline BoundReport bound_common(const BoundInputs& in, const BoundConstants& c) {
    in.validate();
    BoundReport r;
    r.in = in;
    r.c = c;
    const double log_n = std::log(static_cast<double>(in.n));
    r.rho_lp = in.lambda_bar + c.c3 * std::sqrt(log_n / in.dbar_min);
    r.rho_dnlp = in.lambda_bar + c.c5 * std::sqrt(log_n / in.dbar_min);
    r.floor_term = c.c1 * std::sqrt(log_n / (static_cast<double>(in.n) * in.dbar_min)) / in.x0_l2;
    r.g_decay_ok = r.rho_lp < 1.0;
    r.g_condition_threshold = std::sqrt(in.dbar_min / (static_cast<double>(in.n) * in.dbar_max));
    return r;
}

inline double spread_factor(const BoundInputs& in) {
    const double log_n = std::log(static_cast<double>(in.n));
    return std::sqrt(in.dbar_max * log_n / (in.dbar_min * in.dbar_min));
}

} // namespace detail

// RHS of the per-step concentration bounds at step k.
inline BoundReport bound_eval_step(const BoundInputs& in, const BoundConstants& c, int k) {
    if (k < 0) throw config_error("bound_eval_step: k must be nonnegative");
    BoundReport r = detail::bound_common(in, c);
    r.k = k;
    const double spread = detail::spread_factor(in);
    const double kd = static_cast<double>(k);
    const double pow_lp = k == 0 ? 0.0 : std::pow(r.rho_lp, k - 1);
    const double pow_dnlp = k == 0 ? 0.0 : std::pow(r.rho_dnlp, k - 1);
    r.step_term = c.c2 * kd * pow_lp * spread;
    r.rhs_lp = r.floor_term + r.step_term;
    r.rhs_dnlp = c.c4 * kd * pow_dnlp * spread;
    return r;
}

// RHS of the weighted-score bound for one finite weight sequence.
inline BoundReport bound_eval_gpr(const BoundInputs& in, const BoundConstants& c,
                                  const WeightScheme& scheme) {
    BoundReport r = detail::bound_common(in, c);
    double g = 0.0, g6 = 0.0;
    double pow_lp = 1.0, pow_c6 = 1.0;
    const double rho6 = in.lambda_bar + c.c6;
    for (int k = 1; k <= scheme.K(); ++k) {
        const double gamma = scheme.gamma[static_cast<std::size_t>(k)];
        g += gamma * static_cast<double>(k) * pow_lp;
        g6 += gamma * static_cast<double>(k) * pow_c6;
        pow_lp *= r.rho_lp;
        pow_c6 *= rho6;
    }
    r.g_value = g;
    r.g_condition_value = g6;
    r.rhs_gpr = r.floor_term + c.c2 * g * detail::spread_factor(in);
    return r;
}

// Term-wise evaluation of the infinite series sum_{k>=1} gamma(k) k rho^{k-1}.
// Stops once terms decay below 1e-16; flags divergence instead of spinning
// when they fail to.
struct GSeries {
    double value = 0.0;
    bool diverged = false;
    std::size_t terms = 0;
};

inline GSeries g_series(const std::function<double(int)>& gamma, double rho,
                        std::size_t max_terms = 1000000) {
    if (!(rho >= 0.0)) throw config_error("g_series: rho must be nonnegative");
    GSeries out;
    double pow_rho = 1.0;
    double prev_term = -1.0;
    for (std::size_t k = 1; k <= max_terms; ++k) {
        const double term = gamma(static_cast<int>(k)) * static_cast<double>(k) * pow_rho;
        if (!std::isfinite(term) || out.value > 1e300) {
            out.diverged = true;
            return out;
        }
        out.value += term;
        out.terms = k;
        if (term < 1e-16 && prev_term >= 0.0 && term <= prev_term) return out;
        prev_term = term;
        pow_rho *= rho;
    }
    out.diverged = true;
    return out;
}

// Closed form of the series for geometric weights (1-alpha) alpha^k, valid
// for alpha * rho < 1.
inline double g_ppr_closed_form(double alpha, double rho) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("g_ppr_closed_form: bad alpha");
    if (!(alpha * rho < 1.0))
        throw numeric_error("g_ppr_closed_form: series diverges for alpha*rho >= 1");
    const double d = 1.0 - alpha * rho;
    return (1.0 - alpha) * alpha / (d * d);
}

// Mean l1 distance between the one-step landing probability on a sparse
// Erdos-Renyi graph and its flat mean-field value. The distance approaches 2
// as the graph thins out even though every vertex-level difference vanishes.
struct L1DivergenceResult {
    double mean_l1 = 0.0;
    std::vector<double> per_trial;
    std::size_t resamples = 0;
};

inline L1DivergenceResult l1_divergence_demo(std::size_t n, double p, std::size_t trials,
                                             const RngConfig& rng, int threads) {
    if (trials == 0) throw config_error("l1_divergence_demo: trials must be positive");
    if (static_cast<double>(n) * p < 5.0)
        throw config_error("l1_divergence_demo: np must be at least 5");
    L1DivergenceResult out;
    out.per_trial.assign(trials, 0.0);
    std::vector<std::size_t> resamples(trials, 0);
    parallel_for_index(trials, threads, [&](std::size_t trial) {
        auto stream = trial_stream(rng, trial);
        const ErSample sample = sample_er_no_isolated(n, p, stream);
        resamples[trial] = sample.resamples;
        std::vector<double> x0(n, 0.0);
        x0[0] = 1.0;
        std::vector<double> x1;
        detail::walk_step_unchecked(sample.g, x0, x1);
        const double flat = 1.0 / static_cast<double>(n);
        double l1 = 0.0;
        for (double value : x1) l1 += std::abs(value - flat);
        out.per_trial[trial] = l1;
    });
    for (std::size_t t = 0; t < trials; ++t) out.resamples += resamples[t];
    out.mean_l1 = mean_std(out.per_trial).mean;
    return out;
}

} // namespace gprank
