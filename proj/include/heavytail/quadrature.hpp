#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace heavytail {

// Interval (lo, hi]; endpoint inclusion only matters for atomic measures.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi > lo ? hi - lo : 0.0; }
    bool contains(double t) const { return t > lo && t <= hi; }
    bool overlaps(const Interval& o) const { return lo < o.hi && o.lo < hi; }
};

// Tensor-grid midpoint rule over an axis-aligned box, same node count per axis.
// Deterministic; f receives one point as a span of coordinates.
template <class F>
double tensor_midpoint(std::span<const Interval> box, int nodes_per_axis, F&& f) {
    const std::size_t dim = box.size();
    if (dim == 0) throw std::invalid_argument("tensor_midpoint: empty box");
    if (nodes_per_axis < 1) throw std::invalid_argument("tensor_midpoint: need at least one node");

    double cell_volume = 1.0;
    std::vector<double> h(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        const double len = box[a].length();
        if (len <= 0.0) return 0.0;
        h[a] = len / nodes_per_axis;
        cell_volume *= h[a];
    }

    std::vector<int> idx(dim, 0);
    std::vector<double> pt(dim);
    for (std::size_t a = 0; a < dim; ++a) pt[a] = box[a].lo + 0.5 * h[a];

    double sum = 0.0;
    for (;;) {
        sum += f(std::span<const double>(pt));
        std::size_t a = 0;
        for (; a < dim; ++a) {
            if (++idx[a] < nodes_per_axis) {
                pt[a] = box[a].lo + (idx[a] + 0.5) * h[a];
                break;
            }
            idx[a] = 0;
            pt[a] = box[a].lo + 0.5 * h[a];
        }
        if (a == dim) break;
    }
    return sum * cell_volume;
}

// Result of a resolution-doubling convergence check. A large relative change is
// a diagnostic that the grid is too coarse, not a failure.
struct QuadDiagnostic {
    double value = 0.0;
    double coarse_value = 0.0;
    double rel_change = 0.0;
    bool converged = true;
};

template <class F>
QuadDiagnostic tensor_midpoint_checked(std::span<const Interval> box, int nodes_per_axis, F&& f,
                                       double rel_tol = 1e-6) {
    QuadDiagnostic d;
    d.coarse_value = tensor_midpoint(box, nodes_per_axis, f);
    d.value = tensor_midpoint(box, 2 * nodes_per_axis, f);
    const double denom = d.value != 0.0 ? std::abs(d.value) : 1.0;
    d.rel_change = std::abs(d.value - d.coarse_value) / denom;
    d.converged = d.rel_change <= rel_tol;
    return d;
}

}
