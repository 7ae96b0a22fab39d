#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heavytail/asymptotics.hpp"
#include "heavytail/marked.hpp"
#include "heavytail/parallel.hpp"
#include "heavytail/risk_path.hpp"
#include "heavytail/stats.hpp"

namespace heavytail {

// Thrown when event evaluation fails inside a worker; carries the chunk and
// its substream seed so the failing batch can be replayed in isolation.
struct mc_abort_error : std::runtime_error {
    std::uint64_t chunk;
    std::uint64_t substream;
    mc_abort_error(std::uint64_t c, std::uint64_t s, const std::string& what)
        : std::runtime_error("chunk " + std::to_string(c) + " (substream seed " +
                             std::to_string(s) + "): " + what),
          chunk(c),
          substream(s) {}
};

struct ExperimentConfig {
    BaseProcessModel model{};
    double alpha = 1.0;
    int k = 0;
    std::uint64_t samples = 1;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 65536;
    int threads = 0;  // 0: HEAVYTAIL_THREADS env var, else hardware

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("ExperimentConfig: alpha must be > 0");
        if (k < 0) throw std::invalid_argument("ExperimentConfig: k must be >= 0");
        if (samples < 1) throw std::invalid_argument("ExperimentConfig: samples must be >= 1");
        if (chunk_size < 1) throw std::invalid_argument("ExperimentConfig: chunk_size must be >= 1");
    }
};

namespace detail {

struct ChunkPlan {
    std::uint64_t n_chunks;
    std::uint64_t chunk_size;
    std::uint64_t samples;

    std::uint64_t size_of(std::uint64_t i) const {
        const std::uint64_t lo = i * chunk_size;
        return std::min(chunk_size, samples - lo);
    }
};

inline ChunkPlan plan_chunks(const ExperimentConfig& c) {
    return {(c.samples + c.chunk_size - 1) / c.chunk_size, c.chunk_size, c.samples};
}

// Runs body(chunk_index, rng, n_samples) across chunks with deterministic
// substreams; wraps foreign exceptions with the replay key.
template <typename Result, typename Body>
std::vector<Result> run_mc_chunks(const ExperimentConfig& config, Body&& body) {
    config.validate();
    const ChunkPlan plan = plan_chunks(config);
    const int threads = resolve_threads(config.threads);
    return run_chunks<Result>(plan.n_chunks, threads, [&](std::uint64_t ci) -> Result {
        const std::uint64_t sub = substream_seed(config.seed, ci);
        try {
            Rng rng(sub);
            return body(ci, rng, plan.size_of(ci));
        } catch (const rejection_cap_error&) {
            throw;
        } catch (const mc_abort_error&) {
            throw;
        } catch (const std::exception& e) {
            throw mc_abort_error(ci, sub, e.what());
        }
    });
}

}

// Estimates P(event) over i.i.d. marked patterns. The event callable must be
// const and thread-safe; it is invoked concurrently from worker threads.
template <typename Event>
TailEstimate estimate(const ExperimentConfig& config, Event&& event, double scale = 1.0) {
    auto hits = detail::run_mc_chunks<std::uint64_t>(
        config, [&](std::uint64_t, Rng& rng, std::uint64_t m) {
            TimePattern base;
            MarkedPattern marked;
            const ParetoLaw law{config.alpha};
            std::uint64_t h = 0;
            for (std::uint64_t s = 0; s < m; ++s) {
                sample_into(config.model, rng, base);
                mark_into(base, law, rng, marked);
                if (event(std::as_const(marked))) ++h;
            }
            return h;
        });
    TailEstimate est;
    est.scale = scale;
    est.samples = config.samples;
    for (std::uint64_t h : hits) est.hits += h;
    return est;
}

namespace detail {
struct MomentPair {
    double sum = 0.0;
    double sum_sq = 0.0;
};
}

// Mean of f over i.i.d. marked patterns, with ordered chunk reduction so the
// floating-point result is independent of the worker count.
template <typename F>
MeanEstimate estimate_mean(const ExperimentConfig& config, F&& f) {
    auto parts = detail::run_mc_chunks<detail::MomentPair>(
        config, [&](std::uint64_t, Rng& rng, std::uint64_t m) {
            TimePattern base;
            MarkedPattern marked;
            const ParetoLaw law{config.alpha};
            detail::MomentPair acc;
            for (std::uint64_t s = 0; s < m; ++s) {
                sample_into(config.model, rng, base);
                mark_into(base, law, rng, marked);
                const double v = f(std::as_const(marked));
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            return acc;
        });
    MeanEstimate est;
    est.samples = config.samples;
    for (const auto& p : parts) {
        est.sum += p.sum;
        est.sum_sq += p.sum_sq;
    }
    return est;
}

// Same, over unmarked base patterns (no mark draws consumed).
template <typename F>
MeanEstimate estimate_mean_base(const ExperimentConfig& config, F&& f) {
    auto parts = detail::run_mc_chunks<detail::MomentPair>(
        config, [&](std::uint64_t, Rng& rng, std::uint64_t m) {
            TimePattern base;
            detail::MomentPair acc;
            for (std::uint64_t s = 0; s < m; ++s) {
                sample_into(config.model, rng, base);
                const double v = f(std::as_const(base));
                acc.sum += v;
                acc.sum_sq += v * v;
            }
            return acc;
        });
    MeanEstimate est;
    est.samples = config.samples;
    for (const auto& p : parts) {
        est.sum += p.sum;
        est.sum_sq += p.sum_sq;
    }
    return est;
}

// Sum of the claims arrived by t_cut minus the k largest among them; zero
// when at most k claims have arrived. Arrival times must be sorted.
inline double residual_claim_sum(const MarkedPattern& p, int k, double t_cut) {
    if (k < 0) throw std::invalid_argument("residual_claim_sum: k must be >= 0");
    thread_local std::vector<double> scratch;
    scratch.clear();
    for (std::size_t i = 0; i < p.count() && p.times[i] <= t_cut; ++i)
        scratch.push_back(p.marks[i]);
    if (scratch.size() <= static_cast<std::size_t>(k)) return 0.0;
    double total = 0.0;
    for (double v : scratch) total += v;
    if (k == 0) return total;
    std::nth_element(scratch.begin(), scratch.begin() + k, scratch.end(), std::greater<double>());
    double top = 0.0;
    for (int i = 0; i < k; ++i) top += scratch[i];
    return total - top;
}

// Estimate of n^(k+1) P(at least k+1 marks exceed r n^(1/alpha)).
inline TailEstimate mc_hrv_pp(const ExperimentConfig& config, double r, std::uint64_t n_index) {
    if (!(r > 0.0)) throw std::invalid_argument("mc_hrv_pp: r must be > 0");
    if (n_index < 1) throw std::invalid_argument("mc_hrv_pp: n must be >= 1");
    const double threshold = r * norming(config.alpha, n_index);
    const double scale = std::pow(static_cast<double>(n_index), config.k + 1);
    const std::size_t need = static_cast<std::size_t>(config.k) + 1;
    return estimate(
        config, [=](const MarkedPattern& p) { return count_exceed(p, threshold) >= need; },
        scale);
}

struct ConvergenceRow {
    double grid_value = 0.0;
    double scaled_estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double asymptote = 0.0;
    double ratio = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    bool zero_hits = false;
};

namespace detail {
inline ConvergenceRow make_row(double grid_value, const TailEstimate& est, double asymptote) {
    ConvergenceRow row;
    row.grid_value = grid_value;
    row.scaled_estimate = est.scaled();
    const ConfidenceInterval ci = est.scaled_ci();
    row.ci_low = ci.lo;
    row.ci_high = ci.hi;
    row.asymptote = asymptote;
    row.ratio = asymptote != 0.0 ? row.scaled_estimate / asymptote : 0.0;
    row.hits = est.hits;
    row.samples = est.samples;
    row.zero_hits = est.zero_hits();
    return row;
}
}

// One row per n: scaled exceedance estimate against the fixed limit value.
// All rows reuse the same substreams, so estimates share their noise and
// ratio trends are easier to read.
inline std::vector<ConvergenceRow> hrv_convergence(const ExperimentConfig& config, double r,
                                                   const std::vector<std::uint64_t>& n_grid) {
    if (n_grid.empty()) throw std::invalid_argument("hrv_convergence: empty grid");
    const double asym = hrv_pp_limit(config.model, config.alpha, config.k, r);
    std::vector<ConvergenceRow> rows;
    rows.reserve(n_grid.size());
    for (std::uint64_t n : n_grid)
        rows.push_back(
            detail::make_row(static_cast<double>(n), mc_hrv_pp(config, r, n), asym));
    return rows;
}

// One row per level x: P(residual claim sum > x) scaled by x^(alpha (k+1)),
// against the constant asymptote E[N...]/(k+1)!.
inline std::vector<ConvergenceRow> residual_convergence(const ExperimentConfig& config,
                                                        const std::vector<double>& x_grid) {
    if (x_grid.empty()) throw std::invalid_argument("residual_convergence: empty grid");
    const AsymptoticContext ctx(config.model, config.alpha, config.k);
    std::vector<ConvergenceRow> rows;
    rows.reserve(x_grid.size());
    for (double x : x_grid) {
        if (!(x > 1.0)) throw std::invalid_argument("residual_convergence: levels must be > 1");
        const double scale = std::pow(x, config.alpha * (config.k + 1));
        const int k = config.k;
        TailEstimate est = estimate(
            config,
            [=](const MarkedPattern& p) { return residual_claim_sum(p, k, p.T) > x; }, scale);
        rows.push_back(detail::make_row(x, est, ctx.limit_constant()));
    }
    return rows;
}

// P(Binomial(n, p) >= m) by stable summation: leading term through lgamma,
// then the term recurrence.
inline double binomial_tail(std::int64_t n, double p, std::int64_t m) {
    if (n < 0) throw std::invalid_argument("binomial_tail: n must be >= 0");
    if (m <= 0) return 1.0;
    if (m > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    double term = std::exp(std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                           std::lgamma(nd - md + 1.0) + md * std::log(p) +
                           (nd - md) * std::log1p(-p));
    double sum = term;
    const double odds = p / (1.0 - p);
    for (std::int64_t j = m; j < n; ++j) {
        term *= odds * static_cast<double>(n - j) / static_cast<double>(j + 1);
        sum += term;
        if (term < sum * 1e-18 && static_cast<double>(j + 1) > nd * p) break;
    }
    return std::min(sum, 1.0);
}

struct OrderstatOracle {
    double value = 0.0;
    double truncation = 0.0;  // count pmf mass left out of the sum
    int terms = 0;
};

// Exact P(more than k marks exceed x), i.e. P(X_{N-k:N} > x), by mixing the
// binomial tail over the count law. Needs a computable count pmf: exact for
// Grid/Binomial, truncated below 1e-15 for Poisson.
inline OrderstatOracle exact_orderstat_tail(const BaseProcessModel& model, double alpha, int k,
                                            double x) {
    if (k < 0) throw std::invalid_argument("exact_orderstat_tail: k must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("exact_orderstat_tail: x must be > 0");
    const double p = ParetoLaw{alpha}.survival(x);
    switch (model.kind) {
        case BaseProcessModel::Kind::Grid:
        case BaseProcessModel::Kind::Binomial:
            return {binomial_tail(model.n, p, k + 1), 0.0, 1};
        case BaseProcessModel::Kind::Poisson: {
            const double lambda = model.rate * model.T;
            double pmf = std::exp(-lambda);
            if (pmf == 0.0)
                throw std::invalid_argument("exact_orderstat_tail: count mean too large");
            double cum = pmf;
            double sum = 0.0;
            std::int64_t n = 0;
            const std::int64_t guard =
                static_cast<std::int64_t>(lambda + 60.0 * std::sqrt(lambda + 1.0) + 200.0);
            while (1.0 - cum > 1e-15 && n < guard) {
                ++n;
                pmf *= lambda / static_cast<double>(n);
                cum += pmf;
                sum += pmf * binomial_tail(n, p, k + 1);
            }
            return {sum, std::max(0.0, 1.0 - cum), static_cast<int>(n) + 1};
        }
        case BaseProcessModel::Kind::GammaRenewal:
            throw std::invalid_argument("exact_orderstat_tail: GammaRenewal count pmf unavailable");
    }
    throw std::logic_error("exact_orderstat_tail: unknown model kind");
}

struct ConditionalDiagnostics {
    std::uint64_t samples = 0;
    std::uint64_t conditioned = 0;  // paths with residual claim sum > x
    std::uint64_t exact_hits = 0;   // of those, exactly k+1 claims above x
    double freq_exact = 0.0;
    ConfidenceInterval freq_ci{};
    double ks_times = 0.0;  // pooled top-(k+1) claim times vs normalized M_1
    double ks_times_critical = 0.0;
    std::size_t pooled_times = 0;
    double ks_sizes = 0.0;  // largest claim / x vs limit-law maxima, two-sample
    double ks_sizes_critical = 0.0;
    std::size_t limit_draws = 0;
    double limit_acceptance_rate = 1.0;
    bool insufficient = false;
};

namespace detail {
struct CondChunk {
    std::uint64_t conditioned = 0;
    std::uint64_t exact_hits = 0;
    std::vector<double> top_times;
    std::vector<double> maxima;
};
}

// Among paths whose residual claim sum at T exceeds x: frequency of exactly
// k+1 claims above x, uniformity of the top-claim times, and agreement of the
// largest claim (in units of x) with the conditional limit law.
inline ConditionalDiagnostics conditional_diagnostics(const ExperimentConfig& config, double x,
                                                      std::uint64_t min_hits = 500,
                                                      double ks_level = 0.01,
                                                      std::uint64_t rejection_cap = kRejectionCap) {
    if (!(x > 1.0)) throw std::invalid_argument("conditional_diagnostics: x must be > 1");
    const int k = config.k;
    auto chunks = detail::run_mc_chunks<detail::CondChunk>(
        config, [&](std::uint64_t, Rng& rng, std::uint64_t m) {
            TimePattern base;
            MarkedPattern marked;
            const ParetoLaw law{config.alpha};
            detail::CondChunk out;
            std::vector<std::size_t> idx;
            for (std::uint64_t s = 0; s < m; ++s) {
                sample_into(config.model, rng, base);
                mark_into(base, law, rng, marked);
                if (residual_claim_sum(marked, k, marked.T) <= x) continue;
                ++out.conditioned;
                if (count_exceed(marked, x) == static_cast<std::size_t>(k) + 1)
                    ++out.exact_hits;
                idx.resize(marked.count());
                for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                const std::size_t top = std::min<std::size_t>(k + 1, idx.size());
                std::partial_sort(idx.begin(), idx.begin() + top, idx.end(),
                                  [&](std::size_t a, std::size_t b) {
                                      return marked.marks[a] > marked.marks[b];
                                  });
                for (std::size_t i = 0; i < top; ++i)
                    out.top_times.push_back(marked.times[idx[i]]);
                if (!marked.marks.empty())
                    out.maxima.push_back(marked.marks[idx[0]] / x);
            }
            return out;
        });

    ConditionalDiagnostics diag;
    diag.samples = config.samples;
    std::vector<double> times, maxima;
    for (const auto& c : chunks) {
        diag.conditioned += c.conditioned;
        diag.exact_hits += c.exact_hits;
        times.insert(times.end(), c.top_times.begin(), c.top_times.end());
        maxima.insert(maxima.end(), c.maxima.begin(), c.maxima.end());
    }
    diag.insufficient = diag.conditioned < min_hits;
    if (diag.conditioned == 0) return diag;

    diag.freq_exact = static_cast<double>(diag.exact_hits) / static_cast<double>(diag.conditioned);
    diag.freq_ci = wilson_interval(diag.exact_hits, diag.conditioned);

    const BaseProcessModel model = config.model;
    diag.pooled_times = times.size();
    diag.ks_times = ks_statistic(std::move(times), [&](double t) {
        return normalized_intensity_cdf(model, t);
    });
    diag.ks_times_critical = ks_critical(diag.pooled_times, ks_level);

    const AsymptoticContext ctx(config.model, config.alpha, config.k);
    Rng rng(substream_seed(config.seed, 0x4c494d4954ull));
    RejectionStats stats;
    std::vector<double> limit_maxima(maxima.size());
    for (double& v : limit_maxima) {
        const RiskPath path = sample_conditional_limit(ctx, rng, &stats, rejection_cap);
        v = *std::max_element(path.jump_sizes.begin(), path.jump_sizes.end());
    }
    diag.limit_draws = limit_maxima.size();
    if (stats.proposals > 0) diag.limit_acceptance_rate = stats.acceptance_rate();
    diag.ks_sizes_critical = ks_critical_two_sample(maxima.size(), limit_maxima.size(), ks_level);
    diag.ks_sizes = ks_statistic_two_sample(std::move(maxima), std::move(limit_maxima));
    return diag;
}

// Conditional estimate of P(residual at t1 > u x | residual at t0 in the
// band (x, (1+eps) x)), scaled by x^alpha.
struct MonitoringEstimate {
    double x = 0.0;
    double eps = 0.0;
    double scale = 1.0;  // x^alpha
    std::uint64_t samples = 0;
    std::uint64_t band_hits = 0;
    std::uint64_t success_hits = 0;
    bool rare = false;  // too few band hits to trust the interval

    double cond_p() const {
        return band_hits == 0
                   ? 0.0
                   : static_cast<double>(success_hits) / static_cast<double>(band_hits);
    }
    double value() const { return cond_p() * scale; }
    ConfidenceInterval ci() const {
        if (band_hits == 0) return {0.0, 0.0};
        const ConfidenceInterval c = wilson_interval(success_hits, band_hits);
        return {scale * c.lo, scale * c.hi};
    }
};

// One pass, one estimate per eps in eps_list (sorted or not); the band and
// success counters for every eps are accumulated from the same paths.
inline std::vector<MonitoringEstimate> monitoring_mc_multi(const ExperimentConfig& config,
                                                           double x, double t0, double t1,
                                                           double u,
                                                           const std::vector<double>& eps_list,
                                                           std::uint64_t min_band_hits = 100) {
    if (!(x > 0.0)) throw std::invalid_argument("monitoring_mc: x must be > 0");
    if (!(t0 > 0.0 && t0 < t1 && t1 <= config.model.T))
        throw std::invalid_argument("monitoring_mc: need 0 < t0 < t1 <= T");
    if (!(u > 1.0)) throw std::invalid_argument("monitoring_mc: u must be > 1");
    if (eps_list.empty()) throw std::invalid_argument("monitoring_mc: empty eps list");
    for (double e : eps_list)
        if (!(e > 0.0)) throw std::invalid_argument("monitoring_mc: eps must be > 0");

    const int k = config.k;
    using Counts = std::vector<std::array<std::uint64_t, 2>>;
    auto chunks = detail::run_mc_chunks<Counts>(
        config, [&](std::uint64_t, Rng& rng, std::uint64_t m) {
            TimePattern base;
            MarkedPattern marked;
            const ParetoLaw law{config.alpha};
            Counts acc(eps_list.size(), {0, 0});
            for (std::uint64_t s = 0; s < m; ++s) {
                sample_into(config.model, rng, base);
                mark_into(base, law, rng, marked);
                const double v0 = residual_claim_sum(marked, k, t0);
                if (v0 <= x) continue;
                bool success = false;
                bool evaluated = false;
                for (std::size_t e = 0; e < eps_list.size(); ++e) {
                    if (v0 >= (1.0 + eps_list[e]) * x) continue;
                    if (!evaluated) {
                        success = residual_claim_sum(marked, k, t1) > u * x;
                        evaluated = true;
                    }
                    ++acc[e][0];
                    if (success) ++acc[e][1];
                }
            }
            return acc;
        });

    std::vector<MonitoringEstimate> out(eps_list.size());
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        out[e].x = x;
        out[e].eps = eps_list[e];
        out[e].scale = std::pow(x, config.alpha);
        out[e].samples = config.samples;
    }
    for (const auto& c : chunks)
        for (std::size_t e = 0; e < eps_list.size(); ++e) {
            out[e].band_hits += c[e][0];
            out[e].success_hits += c[e][1];
        }
    for (auto& est : out) est.rare = est.band_hits < min_band_hits;
    return out;
}

inline MonitoringEstimate monitoring_mc(const ExperimentConfig& config, double x, double t0,
                                        double t1, double u, double eps,
                                        std::uint64_t min_band_hits = 100) {
    return monitoring_mc_multi(config, x, t0, t1, u, {eps}, min_band_hits)[0];
}

}
