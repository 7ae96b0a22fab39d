#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heavytail/rng.hpp"

namespace heavytail {

// Standard Pareto claim-size law: P(X > x) = x^(-alpha) for x >= 1.
struct ParetoLaw {
    double alpha;

    explicit ParetoLaw(double a) : alpha(a) {
        if (!(a > 0.0)) throw std::invalid_argument("ParetoLaw: alpha must be > 0");
    }

    double survival(double x) const {
        if (!(x >= 0.0)) throw std::invalid_argument("ParetoLaw::survival: x must be >= 0");
        return std::pow(std::max(x, 1.0), -alpha);
    }

    double cdf(double x) const { return 1.0 - survival(x); }

    // inverse of survival on (0, 1]
    double inverse_survival(double s) const {
        if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("ParetoLaw::inverse_survival: s in (0,1]");
        return std::pow(s, -1.0 / alpha);
    }

    // inverse transform of a uniform draw; u = 0 maps to the support lower end 1
    double from_uniform(double u) const {
        if (alpha == 1.0) return 1.0 / (1.0 - u);  // the common case, much cheaper than pow
        return std::pow(1.0 - u, -1.0 / alpha);
    }

    double sample(Rng& rng) const { return from_uniform(rng.uniform()); }

    // E[(X/x)^p 1{X<=x}] / survival(x), closed form (alpha/(p-alpha))(1 - x^(alpha-p)).
    // Tends to alpha/(p-alpha) as x grows.
    double truncated_moment_ratio(double p, double x) const {
        if (!(p > alpha)) throw std::invalid_argument("truncated_moment_ratio: requires p > alpha");
        if (!(x >= 1.0)) throw std::invalid_argument("truncated_moment_ratio: requires x >= 1");
        return alpha / (p - alpha) * (1.0 - std::pow(x, alpha - p));
    }

    // mean, finite only for alpha > 1
    double mean() const {
        if (!(alpha > 1.0)) throw std::domain_error("ParetoLaw::mean: infinite for alpha <= 1");
        return alpha / (alpha - 1.0);
    }
};

// Limit measure of the rescaled claim sizes: density alpha x^(-alpha-1) on (0, inf),
// tail mass tail_mass(r) = r^(-alpha).
struct LimitMeasure {
    double alpha;

    explicit LimitMeasure(double a) : alpha(a) {
        if (!(a > 0.0)) throw std::invalid_argument("LimitMeasure: alpha must be > 0");
    }

    double tail_mass(double r) const {
        if (!(r > 0.0)) throw std::invalid_argument("LimitMeasure::tail_mass: r must be > 0");
        return std::pow(r, -alpha);
    }

    // mass of (lo, hi]; hi may be +inf
    double interval_mass(double lo, double hi) const {
        if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("LimitMeasure::interval_mass: need 0 < lo < hi");
        if (std::isinf(hi)) return tail_mass(lo);
        return tail_mass(lo) - tail_mass(hi);
    }

    double density(double x) const { return alpha * std::pow(x, -alpha - 1.0); }
};

// Norming sequence a_n = n^(1/alpha); satisfies n * survival(a_n * r) = r^(-alpha)
// exactly whenever a_n * r >= 1.
inline double norming(double alpha, std::uint64_t n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("norming: alpha must be > 0");
    if (n < 1) throw std::invalid_argument("norming: n must be >= 1");
    return std::pow(static_cast<double>(n), 1.0 / alpha);
}

}
