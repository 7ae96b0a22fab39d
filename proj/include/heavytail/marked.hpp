#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "heavytail/base_process.hpp"
#include "heavytail/pareto.hpp"

namespace heavytail {

// Arrival times on [0, T] with one positive mark per arrival.
struct MarkedPattern {
    double T = 0.0;
    std::vector<double> times;
    std::vector<double> marks;

    std::size_t count() const { return times.size(); }
};

inline void mark_into(const TimePattern& base, const ParetoLaw& law, Rng& rng,
                      MarkedPattern& out) {
    out.T = base.T;
    out.times = base.times;
    out.marks.resize(base.times.size());
    for (double& m : out.marks) m = law.sample(rng);
}

inline MarkedPattern mark(const TimePattern& base, const ParetoLaw& law, Rng& rng) {
    MarkedPattern p;
    mark_into(base, law, rng, p);
    return p;
}

// Rescales marks only; times are left untouched.
inline void scale_marks(MarkedPattern& p, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("scale_marks: factor must be > 0");
    for (double& m : p.marks) m /= a;
}

// j-th largest mark (j >= 1); zero when the pattern has fewer than j points.
inline double mark_order_stat(const MarkedPattern& p, int j) {
    if (j < 1) throw std::invalid_argument("mark_order_stat: j must be >= 1");
    if (p.marks.size() < static_cast<std::size_t>(j)) return 0.0;
    std::vector<double> m = p.marks;
    std::nth_element(m.begin(), m.begin() + (j - 1), m.end(), std::greater<double>());
    return m[j - 1];
}

inline std::size_t count_exceed(const MarkedPattern& p, double threshold) {
    std::size_t c = 0;
    for (double m : p.marks)
        if (m > threshold) ++c;
    return c;
}

// Product region: time interval (or [0, hi] when lo = 0) times mark interval
// (mark_lo, mark_hi], with mark_lo > 0 so the region stays away from small marks.
struct MarkBox {
    Interval time;
    double mark_lo = 1.0;
    double mark_hi = std::numeric_limits<double>::infinity();

    void validate(double T) const {
        if (!(time.lo >= 0.0 && time.hi <= T && time.hi >= time.lo))
            throw std::invalid_argument("MarkBox: time interval outside [0,T]");
        if (!(mark_lo > 0.0)) throw std::invalid_argument("MarkBox: mark lower bound must be > 0");
        if (!(mark_hi > mark_lo)) throw std::invalid_argument("MarkBox: empty mark interval");
    }

    bool contains(double t, double x) const {
        const bool in_time = time.lo == 0.0 ? (t >= 0.0 && t <= time.hi) : time.contains(t);
        return in_time && x > mark_lo && x <= mark_hi;
    }

    bool overlaps(const MarkBox& o) const {
        return time.overlaps(o.time) && mark_lo < o.mark_hi && o.mark_lo < mark_hi;
    }
};

// Configuration event "exactly counts[i] points in boxes[i] for every i",
// with pairwise disjoint boxes. order() is the total number of points pinned.
struct CylinderEvent {
    std::vector<MarkBox> boxes;
    std::vector<int> counts;

    int order() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    void validate(double T) const {
        if (boxes.empty()) throw std::invalid_argument("CylinderEvent: no boxes");
        if (boxes.size() != counts.size())
            throw std::invalid_argument("CylinderEvent: boxes/counts size mismatch");
        for (const MarkBox& b : boxes) b.validate(T);
        for (int c : counts)
            if (c < 1) throw std::invalid_argument("CylinderEvent: counts must be >= 1");
        for (std::size_t i = 0; i < boxes.size(); ++i)
            for (std::size_t j = i + 1; j < boxes.size(); ++j)
                if (boxes[i].overlaps(boxes[j]))
                    throw std::invalid_argument("CylinderEvent: boxes must be pairwise disjoint");
    }
};

inline bool cylinder_counts_match(const CylinderEvent& ev, const MarkedPattern& p) {
    for (std::size_t i = 0; i < ev.boxes.size(); ++i) {
        int c = 0;
        for (std::size_t j = 0; j < p.count(); ++j)
            if (ev.boxes[i].contains(p.times[j], p.marks[j])) ++c;
        if (c != ev.counts[i]) return false;
    }
    return true;
}

// Limit mass of a cylinder event under the order-(k+1) limit measure, where
// k+1 = ev.order(): the factorial moment mass of the repeated time boxes times
// the product of mark-interval masses, divided by the multiplicity factorials.
inline double limit_cylinder_mass(const BaseProcessModel& model, double alpha,
                                  const CylinderEvent& ev, int quad_nodes = 0) {
    ev.validate(model.T);
    const int order = ev.order();
    const LimitMeasure mu{alpha};

    std::vector<Interval> time_box;
    double mark_mass = 1.0;
    double mult_factor = 1.0;
    for (std::size_t i = 0; i < ev.boxes.size(); ++i) {
        for (int c = 0; c < ev.counts[i]; ++c) {
            time_box.push_back(ev.boxes[i].time);
            mark_mass *= mu.interval_mass(ev.boxes[i].mark_lo, ev.boxes[i].mark_hi);
        }
        for (int c = 2; c <= ev.counts[i]; ++c) mult_factor *= c;
    }

    FactorialMomentEvaluator eval(model, order, quad_nodes);
    return factorial_moment_box(eval, time_box) * mark_mass / mult_factor;
}

// Limit of n^(k+1) P(at least k+1 marks exceed r n^(1/alpha)):
// E[N(N-1)...(N-k)] / (k+1)! * r^(-alpha (k+1)).
inline double hrv_pp_limit(const BaseProcessModel& model, double alpha, int k, double r,
                           int quad_nodes = 0) {
    if (k < 0) throw std::invalid_argument("hrv_pp_limit: k must be >= 0");
    if (!(r > 0.0)) throw std::invalid_argument("hrv_pp_limit: r must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("hrv_pp_limit: alpha must be > 0");
    double fact = 1.0;
    for (int i = 2; i <= k + 1; ++i) fact *= i;
    return count_factorial_moment(model, k + 1, quad_nodes) / fact *
           std::pow(r, -alpha * (k + 1));
}

}
