#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "heavytail/quadrature.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

// Sorted arrival times on [0, T].
struct TimePattern {
    double T = 0.0;
    std::vector<double> times;

    std::size_t count() const { return times.size(); }
};

// Mean inter-arrival time of the Gamma(2,1) renewal process.
inline constexpr double kGammaRenewalMeanGap = 2.0;

// Base arrival process on [0, T].
//   Poisson       homogeneous, given rate
//   GammaRenewal  stationary renewal, Gamma(2,1) inter-arrivals, equilibrium start
//   Grid          deterministic times i*T/n, i = 1..n
//   Binomial      n i.i.d. uniform times
struct BaseProcessModel {
    enum class Kind { Poisson, GammaRenewal, Grid, Binomial };

    Kind kind = Kind::Poisson;
    double T = 1.0;
    double rate = 1.0;  // Poisson only
    int n = 0;          // Grid / Binomial only

    static BaseProcessModel poisson(double rate, double T) {
        if (!(rate > 0.0)) throw std::invalid_argument("poisson: rate must be > 0");
        if (!(T > 0.0)) throw std::invalid_argument("poisson: T must be > 0");
        return {Kind::Poisson, T, rate, 0};
    }

    static BaseProcessModel gamma_renewal(double T) {
        if (!(T > 0.0)) throw std::invalid_argument("gamma_renewal: T must be > 0");
        return {Kind::GammaRenewal, T, 0.0, 0};
    }

    static BaseProcessModel grid(int n, double T) {
        if (n < 1) throw std::invalid_argument("grid: n must be >= 1");
        if (!(T > 0.0)) throw std::invalid_argument("grid: T must be > 0");
        return {Kind::Grid, T, 0.0, n};
    }

    static BaseProcessModel binomial(int n, double T) {
        if (n < 1) throw std::invalid_argument("binomial: n must be >= 1");
        if (!(T > 0.0)) throw std::invalid_argument("binomial: T must be > 0");
        return {Kind::Binomial, T, 0.0, n};
    }

    double mean_count() const {
        switch (kind) {
            case Kind::Poisson: return rate * T;
            case Kind::GammaRenewal: return T / kGammaRenewalMeanGap;
            default: return static_cast<double>(n);
        }
    }
};

// Gamma(2,1) variate, as the sum of two unit exponentials.
inline double sample_gamma21(Rng& rng) {
    return sample_exponential(rng, 1.0) + sample_exponential(rng, 1.0);
}

// First-arrival delay of the stationary Gamma(2,1) renewal process, with the
// integrated-tail density (1+t)e^(-t)/2. Acceptance-rejection against an
// Exponential(rate 1/2) proposal; the acceptance ratio peaks at 1 for t = 1.
inline double sample_equilibrium_delay_gamma21(Rng& rng) {
    for (;;) {
        const double t = sample_exponential(rng, 0.5);
        const double accept = 0.5 * (1.0 + t) * std::exp(0.5 * (1.0 - t));
        if (rng.uniform() < accept) return t;
    }
}

inline void sample_into(const BaseProcessModel& model, Rng& rng, TimePattern& out) {
    out.T = model.T;
    out.times.clear();
    switch (model.kind) {
        case BaseProcessModel::Kind::Poisson: {
            double t = sample_exponential(rng, model.rate);
            while (t <= model.T) {
                out.times.push_back(t);
                t += sample_exponential(rng, model.rate);
            }
            break;
        }
        case BaseProcessModel::Kind::GammaRenewal: {
            double t = sample_equilibrium_delay_gamma21(rng);
            while (t <= model.T) {
                out.times.push_back(t);
                t += sample_gamma21(rng);
            }
            break;
        }
        case BaseProcessModel::Kind::Grid: {
            out.times.reserve(model.n);
            for (int i = 1; i <= model.n; ++i)
                out.times.push_back(i * model.T / model.n);
            break;
        }
        case BaseProcessModel::Kind::Binomial: {
            out.times.reserve(model.n);
            for (int i = 0; i < model.n; ++i)
                out.times.push_back(rng.uniform(0.0, model.T));
            std::sort(out.times.begin(), out.times.end());
            break;
        }
    }
}

inline TimePattern sample(const BaseProcessModel& model, Rng& rng) {
    TimePattern p;
    sample_into(model, rng, p);
    return p;
}

// CDF of the normalized first moment measure M_1 / M_1([0,T]): uniform for
// the continuous models, a step function over the atoms for Grid.
inline double normalized_intensity_cdf(const BaseProcessModel& model, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= model.T) return 1.0;
    if (model.kind == BaseProcessModel::Kind::Grid)
        return std::floor(t * model.n / model.T) / model.n;
    return t / model.T;
}

// Renewal density of the Gamma(2,1) renewal process, u(t) = (1 - e^(-2t))/2.
inline double renewal_density_gamma21(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("renewal_density_gamma21: t must be >= 0");
    return -std::expm1(-2.0 * t) / 2.0;
}

// Second factorial moment of the Gamma(2,1) renewal count on [0, T].
inline double m2_gamma(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("m2_gamma: T must be > 0");
    return T * T / 4.0 - (2.0 * T + std::expm1(-2.0 * T)) / 8.0;
}

// Second factorial moment mass of [0, t0]^2; same expression as m2_gamma.
inline double m2_box_gamma(double t0) {
    if (!(t0 > 0.0)) throw std::invalid_argument("m2_box_gamma: t0 must be > 0");
    return m2_gamma(t0);
}

// Third factorial moment mass of [0, t0]^2 x (t0, t1].
inline double m3_box_gamma(double t0, double t1) {
    if (!(t0 > 0.0)) throw std::invalid_argument("m3_box_gamma: t0 must be > 0");
    if (!(t1 > t0)) throw std::invalid_argument("m3_box_gamma: t1 must be > t0");
    const double d = t1 - t0;
    const double a = t0 * t0 * d / 8.0;
    const double b = d * (2.0 * t0 + std::expm1(-2.0 * t0)) / 16.0;
    const double c = std::expm1(-2.0 * d) * ((1.0 + t0) * std::expm1(-2.0 * t0) + 2.0 * t0) / 16.0;
    return a - b + c;
}

inline double falling_factorial(double n, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= n - i;
    return std::max(out, 0.0);
}

namespace detail {

constexpr int kMaxFactorialOrder = 8;

inline int default_nodes(int dim) {
    if (dim <= 2) return 256;
    if (dim == 3) return 96;
    return 48;
}

// count of grid atoms i*T/n inside (lo, hi]
inline int grid_atoms_in(const BaseProcessModel& model, const Interval& iv) {
    int c = 0;
    for (int i = 1; i <= model.n; ++i)
        if (iv.contains(i * model.T / model.n)) ++c;
    return c;
}

// ordered distinct tuples of grid atoms hitting the boxes, inclusion-exclusion, k <= 3
inline double grid_distinct_tuples(const BaseProcessModel& model, std::span<const Interval> box) {
    auto inter = [](const Interval& a, const Interval& b) {
        return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    };
    const std::size_t k = box.size();
    if (k == 1) return grid_atoms_in(model, box[0]);
    if (k == 2) {
        const double c1 = grid_atoms_in(model, box[0]);
        const double c2 = grid_atoms_in(model, box[1]);
        const double c12 = grid_atoms_in(model, inter(box[0], box[1]));
        return c1 * c2 - c12;
    }
    if (k == 3) {
        const double c1 = grid_atoms_in(model, box[0]);
        const double c2 = grid_atoms_in(model, box[1]);
        const double c3 = grid_atoms_in(model, box[2]);
        const double c12 = grid_atoms_in(model, inter(box[0], box[1]));
        const double c13 = grid_atoms_in(model, inter(box[0], box[2]));
        const double c23 = grid_atoms_in(model, inter(box[1], box[2]));
        const double c123 = grid_atoms_in(model, inter(inter(box[0], box[1]), box[2]));
        return c1 * c2 * c3 - c12 * c3 - c13 * c2 - c23 * c1 + 2.0 * c123;
    }
    throw std::invalid_argument("factorial_moment_box: Grid supports order <= 3");
}

}

// Evaluator of the order-k factorial moment measure M_k of a base process.
// nodes_per_axis = 0 selects a default resolution for the quadrature fallback.
struct FactorialMomentEvaluator {
    BaseProcessModel model;
    int k = 1;
    int nodes_per_axis = 0;

    FactorialMomentEvaluator(BaseProcessModel m, int order, int nodes = 0)
        : model(m), k(order), nodes_per_axis(nodes) {
        if (order < 1) throw std::invalid_argument("FactorialMomentEvaluator: order must be >= 1");
        if (order > detail::kMaxFactorialOrder)
            throw std::invalid_argument("FactorialMomentEvaluator: order too large");
        if (nodes < 0) throw std::invalid_argument("FactorialMomentEvaluator: negative node count");
    }

    int nodes() const { return nodes_per_axis > 0 ? nodes_per_axis : detail::default_nodes(k); }
};

// Density of M_k at a k-tuple of times, symmetric in its arguments.
inline double factorial_moment_density(const FactorialMomentEvaluator& eval,
                                       std::span<const double> t) {
    if (t.size() != static_cast<std::size_t>(eval.k))
        throw std::invalid_argument("factorial_moment_density: tuple size must equal the order");
    for (double ti : t)
        if (!(ti >= 0.0 && ti <= eval.model.T))
            throw std::invalid_argument("factorial_moment_density: time outside [0,T]");

    switch (eval.model.kind) {
        case BaseProcessModel::Kind::Poisson:
            return std::pow(eval.model.rate, eval.k);
        case BaseProcessModel::Kind::Binomial:
            return falling_factorial(eval.model.n, eval.k) / std::pow(eval.model.T, eval.k);
        case BaseProcessModel::Kind::Grid:
            throw std::invalid_argument("factorial_moment_density: Grid measure is atomic");
        case BaseProcessModel::Kind::GammaRenewal: {
            std::array<double, detail::kMaxFactorialOrder> s;
            std::copy(t.begin(), t.end(), s.begin());
            std::sort(s.begin(), s.begin() + eval.k);
            double d = 1.0 / kGammaRenewalMeanGap;
            for (int i = 1; i < eval.k; ++i) d *= renewal_density_gamma21(s[i] - s[i - 1]);
            return d;
        }
    }
    throw std::logic_error("factorial_moment_density: unknown model kind");
}

// M_k mass of a box given as one interval per axis. Renewal boxes fall back to
// tensor-grid midpoint quadrature unless a closed form applies; pass
// force_quadrature = true to bypass the closed forms.
inline double factorial_moment_box(const FactorialMomentEvaluator& eval,
                                   std::span<const Interval> box,
                                   bool force_quadrature = false) {
    if (box.size() != static_cast<std::size_t>(eval.k))
        throw std::invalid_argument("factorial_moment_box: box dimension must equal the order");
    for (const Interval& iv : box) {
        if (!(iv.lo >= 0.0 && iv.hi <= eval.model.T && iv.hi >= iv.lo))
            throw std::invalid_argument("factorial_moment_box: interval outside [0,T]");
        if (iv.length() == 0.0) return 0.0;
    }

    switch (eval.model.kind) {
        case BaseProcessModel::Kind::Poisson: {
            double mass = 1.0;
            for (const Interval& iv : box) mass *= eval.model.rate * iv.length();
            return mass;
        }
        case BaseProcessModel::Kind::Binomial: {
            double mass = falling_factorial(eval.model.n, eval.k);
            for (const Interval& iv : box) mass *= iv.length() / eval.model.T;
            return mass;
        }
        case BaseProcessModel::Kind::Grid:
            return detail::grid_distinct_tuples(eval.model, box);
        case BaseProcessModel::Kind::GammaRenewal: {
            if (eval.k == 1) return box[0].length() / kGammaRenewalMeanGap;
            if (!force_quadrature) {
                if (eval.k == 2 && box[0].lo == 0.0 && box[1].lo == 0.0 && box[0].hi == box[1].hi)
                    return m2_box_gamma(box[0].hi);
                if (eval.k == 3) {
                    std::array<Interval, 3> b{box[0], box[1], box[2]};
                    std::sort(b.begin(), b.end(),
                              [](const Interval& a, const Interval& c) { return a.lo < c.lo; });
                    if (b[0].lo == 0.0 && b[1].lo == 0.0 && b[0].hi == b[1].hi &&
                        b[2].lo == b[0].hi && b[2].hi > b[2].lo)
                        return m3_box_gamma(b[0].hi, b[2].hi);
                }
            }
            return tensor_midpoint(box, eval.nodes(), [&](std::span<const double> t) {
                return factorial_moment_density(eval, t);
            });
        }
    }
    throw std::logic_error("factorial_moment_box: unknown model kind");
}

inline QuadDiagnostic factorial_moment_box_checked(const FactorialMomentEvaluator& eval,
                                                   std::span<const Interval> box,
                                                   double rel_tol = 1e-6) {
    QuadDiagnostic d;
    d.coarse_value = factorial_moment_box(eval, box, true);
    FactorialMomentEvaluator fine(eval.model, eval.k, 2 * eval.nodes());
    d.value = factorial_moment_box(fine, box, true);
    const double denom = d.value != 0.0 ? std::abs(d.value) : 1.0;
    d.rel_change = std::abs(d.value - d.coarse_value) / denom;
    d.converged = d.rel_change <= rel_tol;
    return d;
}

// E[N(N-1)...(N-k+1)] for the count N of the base process on [0, T].
inline double count_factorial_moment(const BaseProcessModel& model, int k, int quad_nodes = 0) {
    if (k < 1) throw std::invalid_argument("count_factorial_moment: k must be >= 1");
    switch (model.kind) {
        case BaseProcessModel::Kind::Poisson:
            return std::pow(model.rate * model.T, k);
        case BaseProcessModel::Kind::Grid:
        case BaseProcessModel::Kind::Binomial:
            return falling_factorial(model.n, k);
        case BaseProcessModel::Kind::GammaRenewal: {
            if (k == 1) return model.T / kGammaRenewalMeanGap;
            if (k == 2) return m2_gamma(model.T);
            FactorialMomentEvaluator eval(model, k, quad_nodes);
            std::vector<Interval> box(k, Interval{0.0, model.T});
            return factorial_moment_box(eval, box);
        }
    }
    throw std::logic_error("count_factorial_moment: unknown model kind");
}

}
