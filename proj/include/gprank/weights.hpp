#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "format.hpp"

namespace gprank {

enum class WeightFamily { ppr, hpr, ipr_normalized, ipr_unnormalized, pseudo_fisher, custom };

// Step-weight sequence gamma_0..gamma_K for a truncated diffusion score
// sum_k gamma_k x^(k).
struct WeightScheme {
    WeightFamily family = WeightFamily::custom;
    std::string label;
    std::vector<double> gamma;

    int K() const { return static_cast<int>(gamma.size()) - 1; }
};

namespace detail {

inline void check_horizon(int K) {
    if (K < 0) throw config_error("weights: K must be nonnegative");
}

} // namespace detail

// Personalized PageRank weights gamma_k = (1-alpha) alpha^k.
inline WeightScheme ppr_weights(double alpha, int K) {
    detail::check_horizon(K);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("ppr_weights: alpha must lie in (0,1)");
    WeightScheme w;
    w.family = WeightFamily::ppr;
    w.label = "ppr:" + fmt_g(alpha);
    w.gamma.resize(static_cast<std::size_t>(K) + 1);
    double g = 1.0 - alpha;
    for (int k = 0; k <= K; ++k) {
        w.gamma[static_cast<std::size_t>(k)] = g;
        g *= alpha;
    }
    return w;
}

// Heat-kernel weights gamma_k = h^k e^{-h} / k!, built by the recurrence
// gamma_{k+1} = gamma_k h/(k+1) to stay in linear space.
inline WeightScheme hpr_weights(double h, int K) {
    detail::check_horizon(K);
    if (!(h > 0.0)) throw config_error("hpr_weights: h must be positive");
    WeightScheme w;
    w.family = WeightFamily::hpr;
    w.label = "hpr:" + fmt_g(h);
    w.gamma.resize(static_cast<std::size_t>(K) + 1);
    double g = std::exp(-h);
    for (int k = 0; k <= K; ++k) {
        w.gamma[static_cast<std::size_t>(k)] = g;
        g *= h / static_cast<double>(k + 1);
    }
    return w;
}

// Inverse weights gamma_k = theta^{-k}. When the raw range would overflow a
// double the whole sequence is scaled down by its maximum; scores built from
// it change by a positive constant only, so rankings are unaffected.
inline WeightScheme ipr_normalized_weights(double theta, int K) {
    detail::check_horizon(K);
    if (!(theta > 0.0 && theta < 1.0))
        throw config_error("ipr_normalized_weights: theta must lie in (0,1)");
    WeightScheme w;
    w.family = WeightFamily::ipr_normalized;
    w.label = "ipr-d:" + fmt_g(theta);
    w.gamma.resize(static_cast<std::size_t>(K) + 1);
    const bool rescale = static_cast<double>(K) * std::log(1.0 / theta) > 650.0;
    if (rescale) {
        double g = 1.0;
        for (int k = K; k >= 0; --k) {
            w.gamma[static_cast<std::size_t>(k)] = g;
            g *= theta;
        }
    } else {
        double g = 1.0;
        for (int k = 0; k <= K; ++k) {
            w.gamma[static_cast<std::size_t>(k)] = g;
            g /= theta;
        }
    }
    return w;
}

// Inverse weights without degree normalization, gamma_k = theta^k/(phi+theta^k)^2.
// The sequence peaks where theta^k = phi; phi = theta^10 places that at k = 10.
inline WeightScheme ipr_unnormalized_weights(double theta, int K, double phi) {
    detail::check_horizon(K);
    if (!(theta > 0.0 && theta < 1.0))
        throw config_error("ipr_unnormalized_weights: theta must lie in (0,1)");
    if (!(phi > 0.0)) throw config_error("ipr_unnormalized_weights: phi must be positive");
    WeightScheme w;
    w.family = WeightFamily::ipr_unnormalized;
    w.label = "ipr-u:" + fmt_g(theta) + ":" + fmt_g(phi);
    w.gamma.resize(static_cast<std::size_t>(K) + 1);
    double tk = 1.0;
    for (int k = 0; k <= K; ++k) {
        const double denom = phi + tk;
        w.gamma[static_cast<std::size_t>(k)] = tk / (denom * denom);
        tk *= theta;
    }
    return w;
}

inline double ipr_auto_phi(double theta) {
    double phi = 1.0;
    for (int i = 0; i < 10; ++i) phi *= theta;
    return phi;
}

inline WeightScheme ipr_unnormalized_auto(double theta, int K) {
    WeightScheme w = ipr_unnormalized_weights(theta, K, ipr_auto_phi(theta));
    w.label = "ipr-u:" + fmt_g(theta) + ":auto";
    return w;
}

// Per-step class separation and spread of a diffusion feature.
struct FeatureMoments {
    std::vector<double> mean_gap;
    std::vector<double> variance;
};

// Separation-over-variance weights gamma_k = gap_k / var_k. Negative entries
// are clamped to zero; the clamp count is reported through `clamped`.
inline WeightScheme pseudo_fisher_weights(const FeatureMoments& moments,
                                          std::size_t* clamped = nullptr) {
    if (moments.mean_gap.empty() || moments.mean_gap.size() != moments.variance.size())
        throw config_error("pseudo_fisher_weights: moment vectors must match and be nonempty");
    WeightScheme w;
    w.family = WeightFamily::pseudo_fisher;
    w.label = "pseudo-fisher";
    w.gamma.resize(moments.mean_gap.size());
    std::size_t clamp_count = 0;
    for (std::size_t k = 0; k < w.gamma.size(); ++k) {
        const double var = moments.variance[k];
        if (!(var > 0.0))
            throw numeric_error("pseudo_fisher_weights: nonpositive variance at step " +
                                std::to_string(k));
        double g = moments.mean_gap[k] / var;
        if (g < 0.0) {
            g = 0.0;
            ++clamp_count;
        }
        w.gamma[k] = g;
    }
    if (clamped != nullptr) *clamped = clamp_count;
    return w;
}

inline WeightScheme custom_weights(std::vector<double> gamma, std::string label = "custom") {
    if (gamma.empty()) throw config_error("custom_weights: need at least gamma_0");
    for (double g : gamma)
        if (!std::isfinite(g) || g < 0.0)
            throw config_error("custom_weights: entries must be finite and nonnegative");
    WeightScheme w;
    w.family = WeightFamily::custom;
    w.label = std::move(label);
    w.gamma = std::move(gamma);
    return w;
}

// Reads one weight per line ('#' comments and blanks skipped).
inline WeightScheme custom_weights_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open weight file: " + path);
    std::vector<double> gamma;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        bool blank = true;
        for (char c : line) {
            if (c == '#') break;
            if (c != ' ' && c != '\t' && c != '\r') {
                blank = false;
                break;
            }
        }
        if (blank) continue;
        char* end = nullptr;
        const double value = std::strtod(line.c_str(), &end);
        if (end == line.c_str())
            throw io_error(path + ":" + std::to_string(line_no) + ": expected a weight");
        gamma.push_back(value);
    }
    if (gamma.empty()) throw io_error("weight file has no entries: " + path);
    WeightScheme w = custom_weights(std::move(gamma), "custom:" + path);
    return w;
}

// Scheme grammar: ppr:<alpha> | hpr:<h> | ipr-d:<theta> |
// ipr-u:<theta>[:<phi>|:auto] | custom:<path>. The truncation depth K applies
// to every family except custom, whose file fixes its own length.
inline WeightScheme parse_scheme(const std::string& text, int K) {
    const auto colon = text.find(':');
    if (colon == std::string::npos || colon + 1 == text.size())
        throw config_error("scheme '" + text + "': expected <family>:<params>");
    const std::string family = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    auto parse_number = [&text](const std::string& token) {
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size() || token.empty())
            throw config_error("scheme '" + text + "': bad numeric parameter '" + token + "'");
        return value;
    };
    if (family == "custom") return custom_weights_from_file(rest);
    if (family == "ppr") return ppr_weights(parse_number(rest), K);
    if (family == "hpr") return hpr_weights(parse_number(rest), K);
    if (family == "ipr-d") return ipr_normalized_weights(parse_number(rest), K);
    if (family == "ipr-u") {
        const auto second = rest.find(':');
        if (second == std::string::npos)
            return ipr_unnormalized_auto(parse_number(rest), K);
        const std::string theta_text = rest.substr(0, second);
        const std::string phi_text = rest.substr(second + 1);
        if (phi_text == "auto") return ipr_unnormalized_auto(parse_number(theta_text), K);
        return ipr_unnormalized_weights(parse_number(theta_text), K, parse_number(phi_text));
    }
    throw config_error("scheme '" + text + "': unknown family '" + family + "'");
}

} // namespace gprank
