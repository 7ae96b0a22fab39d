#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "heavytail/marked.hpp"

namespace heavytail {

// Cadlag pure-jump path plus linear drift on [0, T]; jump times are sorted,
// sizes are signed and stored exactly as given.
struct RiskPath {
    double T = 0.0;
    double drift = 0.0;
    std::vector<double> jump_times;
    std::vector<double> jump_sizes;

    std::size_t jump_count() const { return jump_times.size(); }

    double evaluate(double t) const {
        if (!(t >= 0.0 && t <= T)) throw std::invalid_argument("RiskPath: t outside [0,T]");
        double v = drift * t;
        for (std::size_t i = 0; i < jump_times.size() && jump_times[i] <= t; ++i)
            v += jump_sizes[i];
        return v;
    }
};

inline RiskPath build_risk(const MarkedPattern& p, double drift = 0.0) {
    RiskPath r;
    r.T = p.T;
    r.drift = drift;
    r.jump_times = p.times;
    r.jump_sizes = p.marks;
    return r;
}

// Each jump is the mark minus `center`; sizes keep their sign.
inline RiskPath build_centered_risk(const MarkedPattern& p, double center) {
    RiskPath r = build_risk(p);
    for (double& s : r.jump_sizes) s -= center;
    return r;
}

namespace detail {

// indices of jumps ordered by decreasing magnitude, ties broken by position
inline std::vector<std::size_t> jumps_by_magnitude(const RiskPath& r) {
    std::vector<std::size_t> idx(r.jump_count());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(r.jump_sizes[a]) > std::abs(r.jump_sizes[b]);
    });
    return idx;
}

}

// k-th largest jump magnitude; zero when the path has fewer than k jumps.
inline double jump_delta(const RiskPath& r, int k) {
    if (k < 1) throw std::invalid_argument("jump_delta: k must be >= 1");
    if (r.jump_count() < static_cast<std::size_t>(k)) return 0.0;
    std::vector<double> mags(r.jump_count());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(r.jump_sizes[i]);
    std::nth_element(mags.begin(), mags.begin() + (k - 1), mags.end(), std::greater<double>());
    return mags[k - 1];
}

// Uniform distance to the cone of paths with at most k jumps: half the
// (k+1)-th largest jump magnitude.
inline double dist_to_jump_cone(const RiskPath& r, int k) {
    if (k < 0) throw std::invalid_argument("dist_to_jump_cone: k must be >= 0");
    return 0.5 * jump_delta(r, k + 1);
}

// Uniform distance to the cone of nondecreasing pure-jump paths with at most
// k jumps: the sum of all but the k largest jumps. Defined for driftless
// paths with nonnegative jumps only.
inline double dist_to_small_jump_cone(const RiskPath& r, int k) {
    if (k < 0) throw std::invalid_argument("dist_to_small_jump_cone: k must be >= 0");
    if (r.drift != 0.0)
        throw std::invalid_argument("dist_to_small_jump_cone: path must have zero drift");
    for (double s : r.jump_sizes)
        if (s < 0.0)
            throw std::invalid_argument("dist_to_small_jump_cone: jumps must be nonnegative");
    const auto idx = detail::jumps_by_magnitude(r);
    double sum = 0.0;
    for (std::size_t i = static_cast<std::size_t>(std::min<std::size_t>(k, idx.size()));
         i < idx.size(); ++i)
        sum += r.jump_sizes[idx[i]];
    return sum;
}

// Splits a path into the k largest jumps (covered) and the rest (residual);
// the drift stays with the residual part. residual + covered = original.
struct RiskSplit {
    RiskPath residual;
    RiskPath covered;
};

inline RiskSplit split_risk(const RiskPath& r, int k) {
    if (k < 0) throw std::invalid_argument("split_risk: k must be >= 0");
    const auto idx = detail::jumps_by_magnitude(r);
    const std::size_t kk = std::min<std::size_t>(k, idx.size());
    std::vector<bool> big(r.jump_count(), false);
    for (std::size_t i = 0; i < kk; ++i) big[idx[i]] = true;

    RiskSplit out;
    out.residual.T = out.covered.T = r.T;
    out.residual.drift = r.drift;
    out.covered.drift = 0.0;
    for (std::size_t i = 0; i < r.jump_count(); ++i) {
        RiskPath& dst = big[i] ? out.covered : out.residual;
        dst.jump_times.push_back(r.jump_times[i]);
        dst.jump_sizes.push_back(r.jump_sizes[i]);
    }
    return out;
}

inline void write_csv(const RiskPath& r, std::ostream& os) {
    os << "time,value_right_limit\n";
    char buf[128];
    auto row = [&](double t, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, v);
        os << buf;
    };
    row(0.0, r.evaluate(0.0));
    for (std::size_t i = 0; i < r.jump_count(); ++i) {
        if (i + 1 < r.jump_count() && r.jump_times[i + 1] == r.jump_times[i]) continue;
        row(r.jump_times[i], r.evaluate(r.jump_times[i]));
    }
    if (r.jump_count() == 0 || r.jump_times.back() < r.T) row(r.T, r.evaluate(r.T));
}

}
