#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace heavytail {

inline constexpr double kZ95 = 1.959963984540054;

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return lo <= v && v <= hi; }
    double width() const { return hi - lo; }
};

// Wilson score interval for a binomial proportion at 95% confidence.
// With zero hits the interval is one-sided: [0, upper bound].
inline ConfidenceInterval wilson_interval(std::uint64_t hits, std::uint64_t samples,
                                          double z = kZ95) {
    if (samples == 0) throw std::invalid_argument("wilson_interval: samples must be > 0");
    if (hits > samples) throw std::invalid_argument("wilson_interval: hits exceed samples");
    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    ConfidenceInterval ci{center - half, center + half};
    if (hits == 0) ci.lo = 0.0;
    if (hits == samples) ci.hi = 1.0;
    ci.lo = std::max(ci.lo, 0.0);
    ci.hi = std::min(ci.hi, 1.0);
    return ci;
}

// Monte Carlo estimate of a probability, rescaled by `scale` for reporting
// (e.g. n^(k+1) for the point-process limit, 1/asymptote for tail ratios).
struct TailEstimate {
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    double scale = 1.0;

    double p_hat() const { return static_cast<double>(hits) / static_cast<double>(samples); }
    bool zero_hits() const { return hits == 0; }
    ConfidenceInterval ci() const { return wilson_interval(hits, samples); }

    double scaled() const { return scale * p_hat(); }
    ConfidenceInterval scaled_ci() const {
        const ConfidenceInterval c = ci();
        return {scale * c.lo, scale * c.hi};
    }
};

// Sample mean with a normal-approximation 95% interval.
struct MeanEstimate {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t samples = 0;

    double mean() const { return sum / static_cast<double>(samples); }
    double variance() const {
        const double n = static_cast<double>(samples);
        return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    }
    ConfidenceInterval ci() const {
        const double half = kZ95 * std::sqrt(variance() / static_cast<double>(samples));
        return {mean() - half, mean() + half};
    }
};

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> data, Cdf&& cdf) {
    if (data.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(data.begin(), data.end());
    const double n = static_cast<double>(data.size());
    double d = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double f = cdf(data[i]);
        d = std::max(d, (i + 1.0) / n - f);
        d = std::max(d, f - i / n);
    }
    return d;
}

// Critical value sqrt(-ln(alpha/2)/(2n)); asymptotic, adequate for n >= 35.
inline double ks_critical(std::size_t n, double alpha) {
    if (n == 0) throw std::invalid_argument("ks_critical: n must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical: alpha in (0,1)");
    return std::sqrt(-0.5 * std::log(alpha / 2.0) / static_cast<double>(n));
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

inline double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0) throw std::invalid_argument("ks_critical_two_sample: empty sample");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ks_critical_two_sample: alpha in (0,1)");
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) * std::sqrt((nn + mm) / (nn * mm));
}

}
