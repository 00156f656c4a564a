#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace gprank {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

// Sample mean and standard deviation (n-1 denominator; std is 0 for n < 2).
inline MeanStd mean_std(const std::vector<double>& values) {
    MeanStd out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return out;
}

// Ordinary least squares slope of y against x.
inline double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw config_error("ols_slope: need at least two matching points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw config_error("ols_slope: x values are constant");
    return sxy / sxx;
}

inline double pooled_std(double s1, double s2) {
    return std::sqrt((s1 * s1 + s2 * s2) / 2.0);
}

// Standard error of a difference of two means estimated from `trials` paired
// observations each.
inline double pooled_se_diff(double s1, double s2, std::size_t trials) {
    if (trials == 0) throw config_error("pooled_se_diff: trials must be positive");
    return std::sqrt((s1 * s1 + s2 * s2) / static_cast<double>(trials));
}

} // namespace gprank
