#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heavytail/marked.hpp"
#include "heavytail/risk_path.hpp"

namespace heavytail {

// Thrown when an acceptance-rejection sampler exhausts its iteration budget.
struct rejection_cap_error : std::runtime_error {
    std::uint64_t attempts;
    explicit rejection_cap_error(std::uint64_t n)
        : std::runtime_error("rejection sampler exceeded " + std::to_string(n) + " proposals"),
          attempts(n) {}
};

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Base model, tail index and reinsurance order k, with the order-(k+1)
// factorial moment of the count precomputed; it must be positive for any of
// the limits below to be non-degenerate.
struct AsymptoticContext {
    BaseProcessModel model;
    double alpha = 1.0;
    int k = 0;
    int quad_nodes = 0;
    double count_moment = 0.0;  // E[N(N-1)...(N-k)]

    AsymptoticContext(BaseProcessModel m, double a, int order, int nodes = 0)
        : model(m), alpha(a), k(order), quad_nodes(nodes) {
        if (!(alpha > 0.0)) throw std::invalid_argument("AsymptoticContext: alpha must be > 0");
        if (k < 0) throw std::invalid_argument("AsymptoticContext: k must be >= 0");
        count_moment = count_factorial_moment(model, k + 1, quad_nodes);
        if (!(count_moment > 0.0) || !std::isfinite(count_moment))
            throw std::invalid_argument(
                "AsymptoticContext: order-(k+1) factorial moment must be finite and positive");
    }

    double limit_constant() const { return count_moment / factorial(k + 1); }
};

// Asymptote of P(X_{N-k:N} > x): the probability that more than k marks
// exceed x behaves like limit_constant * x^(-alpha (k+1)).
inline double residual_tail(const AsymptoticContext& ctx, double x) {
    if (!(x > 1.0)) throw std::invalid_argument("residual_tail: x must be > 1");
    return ctx.limit_constant() * std::pow(x, -ctx.alpha * (ctx.k + 1));
}

// Limit of n^(k+1) P(the rescaled path is farther than r from the
// at-most-k-jump cone); equals the exceedance limit at level 2r.
inline double path_tail(const AsymptoticContext& ctx, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("path_tail: r must be > 0");
    return ctx.limit_constant() * std::pow(2.0 * r, -ctx.alpha * (ctx.k + 1));
}

// Size factor f(u) of the monitoring limit. Conditioning on the residual
// sitting near x pins the smallest of the k+1 early claim magnitudes at 1
// (in units of x); the residual at the later time exceeds u when either the
// second smallest of the k+2 relevant magnitudes clears u-1 (all k+1 free
// magnitudes are Pareto on (1, inf), so this is automatic while u < 2), or
// the extra claim lands below the pinned level but above u-1. Hence
//   f(u) = ((u-1) v 1)^(-(k+1)a) + ((u-1)^(-a) - 1)+,
// i.e. (u-1)^(-a) on (1,2) and (u-1)^(-(k+1)a) on [2, inf): continuous at
// u = 2 with a kink. Past 2 only a single large extra claim can lift the
// residual; the risk cannot double off the back of small claims alone.
inline double monitor_size_factor(double alpha, int k, double u) {
    if (!(alpha > 0.0)) throw std::invalid_argument("monitor_size_factor: alpha must be > 0");
    if (k < 0) throw std::invalid_argument("monitor_size_factor: k must be >= 0");
    if (!(u > 1.0)) throw std::invalid_argument("monitor_size_factor: u must be > 1");
    const double w = u - 1.0;
    return std::pow(std::max(w, 1.0), -(k + 1) * alpha) + std::max(0.0, std::pow(w, -alpha) - 1.0);
}

// Ratio M_{k+2}([0,t0]^{k+1} x (t0,t1]) / M_{k+1}([0,t0]^{k+1}) of factorial
// moment masses; requires a continuous base process.
inline double monitoring_measure_ratio(const AsymptoticContext& ctx, double t0, double t1) {
    if (!(t0 > 0.0 && t0 < t1 && t1 <= ctx.model.T))
        throw std::invalid_argument("monitoring_measure_ratio: need 0 < t0 < t1 <= T");
    switch (ctx.model.kind) {
        case BaseProcessModel::Kind::Poisson:
            return ctx.model.rate * (t1 - t0);
        case BaseProcessModel::Kind::Binomial:
            if (ctx.model.n < ctx.k + 2)
                throw std::invalid_argument("monitoring_measure_ratio: need n >= k+2");
            return (ctx.model.n - ctx.k - 1) * (t1 - t0) / ctx.model.T;
        case BaseProcessModel::Kind::Grid:
            throw std::invalid_argument(
                "monitoring_measure_ratio: requires a continuous base process");
        case BaseProcessModel::Kind::GammaRenewal: {
            std::vector<Interval> lower(ctx.k + 1, Interval{0.0, t0});
            std::vector<Interval> upper = lower;
            upper.push_back(Interval{t0, t1});
            FactorialMomentEvaluator num(ctx.model, ctx.k + 2, ctx.quad_nodes);
            FactorialMomentEvaluator den(ctx.model, ctx.k + 1, ctx.quad_nodes);
            return factorial_moment_box(num, upper) / factorial_moment_box(den, lower);
        }
    }
    throw std::logic_error("monitoring_measure_ratio: unknown model kind");
}

// Limit of P(residual risk at t1 > u x | residual risk at t0 in (x, (1+eps)x])
// scaled by x^alpha, as x grows and eps shrinks.
inline double monitoring_limit(const AsymptoticContext& ctx, double t0, double t1, double u) {
    return monitoring_measure_ratio(ctx, t0, t1) * monitor_size_factor(ctx.alpha, ctx.k, u);
}

// Small-t0 limit of the Gamma(2,1) renewal measure ratio for k = 1:
// (e^(-2 t1) + 2 t1 - 1)/4, evaluated in expm1 form.
inline double monitoring_ratio_t0zero_gamma(double t1) {
    if (!(t1 > 0.0)) throw std::invalid_argument("monitoring_ratio_t0zero_gamma: t1 must be > 0");
    return (2.0 * t1 + std::expm1(-2.0 * t1)) / 4.0;
}

inline double monitoring_limit_t0zero_gamma(double t1, double u, double alpha, int k) {
    return monitoring_ratio_t0zero_gamma(t1) * monitor_size_factor(alpha, k, u);
}

struct RejectionStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepts = 0;

    double acceptance_rate() const {
        return proposals == 0 ? 0.0 : static_cast<double>(accepts) / static_cast<double>(proposals);
    }
};

inline constexpr std::uint64_t kRejectionCap = 1000000;

namespace detail {

// times with the normalized order-(k+1) factorial moment law of the model
inline std::vector<double> conditional_times(const BaseProcessModel& model, int k, Rng& rng,
                                             RejectionStats* stats, std::uint64_t cap) {
    std::vector<double> s(k + 1);
    switch (model.kind) {
        case BaseProcessModel::Kind::Poisson:
        case BaseProcessModel::Kind::Binomial:
            for (double& t : s) t = rng.uniform(0.0, model.T);
            break;
        case BaseProcessModel::Kind::Grid: {
            if (model.n < k + 1)
                throw std::invalid_argument("conditional_times: Grid needs n >= k+1 atoms");
            std::vector<std::uint64_t> picked;
            while (picked.size() < s.size()) {
                const std::uint64_t i = rng.below(model.n) + 1;
                if (std::find(picked.begin(), picked.end(), i) == picked.end())
                    picked.push_back(i);
            }
            for (std::size_t j = 0; j < s.size(); ++j)
                s[j] = static_cast<double>(picked[j]) * model.T / model.n;
            break;
        }
        case BaseProcessModel::Kind::GammaRenewal: {
            // density tau^{-1} prod u(gap) <= tau^{-1} (1/2)^k = (1/2)^{k+1};
            // accept a uniform proposal with probability density * 2^{k+1}
            FactorialMomentEvaluator eval(model, k + 1);
            const double bound = std::pow(0.5, k + 1);
            std::uint64_t attempts = 0;
            for (;;) {
                if (attempts >= cap) {
                    if (stats) stats->proposals += attempts;
                    throw rejection_cap_error(cap);
                }
                ++attempts;
                for (double& t : s) t = rng.uniform(0.0, model.T);
                const double accept = factorial_moment_density(eval, s) / bound;
                if (rng.uniform() < accept) break;
            }
            if (stats) {
                stats->proposals += attempts;
                stats->accepts += 1;
            }
            return s;
        }
    }
    if (stats) {
        stats->proposals += 1;
        stats->accepts += 1;
    }
    return s;
}

}

// One draw from the conditional limit law: k+1 i.i.d. standard Pareto(alpha)
// jump sizes at times with the normalized M_{k+1} law, independent of sizes.
inline RiskPath sample_conditional_limit(const AsymptoticContext& ctx, Rng& rng,
                                         RejectionStats* stats = nullptr,
                                         std::uint64_t cap = kRejectionCap) {
    std::vector<double> times = detail::conditional_times(ctx.model, ctx.k, rng, stats, cap);
    const ParetoLaw law{ctx.alpha};
    std::vector<std::pair<double, double>> jumps(times.size());
    for (std::size_t i = 0; i < jumps.size(); ++i) jumps[i] = {times[i], law.sample(rng)};
    std::sort(jumps.begin(), jumps.end());

    RiskPath path;
    path.T = ctx.model.T;
    for (const auto& [t, z] : jumps) {
        path.jump_times.push_back(t);
        path.jump_sizes.push_back(z);
    }
    return path;
}

}
