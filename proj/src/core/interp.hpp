#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace evoscale {

inline double catmull_rom(double pm1, double p0, double p1, double p2, double t) {
    return 0.5 * ((2.0 * p0) + (-pm1 + p1) * t +
                  (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * t * t +
                  (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * t * t * t);
}

// Cubic interpolation of a smooth scalar function on a uniform grid, with a
// probe check against the exact function; queries outside [lo, hi] fall back.
class Curve1D {
public:
    Curve1D(std::function<double(double)> fn, double lo, double hi, int nodes, int probes)
        : fn_(std::move(fn)), lo_(lo), hi_(hi), nodes_(nodes) {
        if (nodes < 8) throw std::invalid_argument("Curve1D: need at least 8 nodes");
        values_.resize(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i) values_[static_cast<std::size_t>(i)] = fn_(node(i));
        for (int p = 1; p <= probes; ++p) {
            const double x = lo_ + (hi_ - lo_) * (p - 0.382) / probes;
            probe_error_ = std::max(probe_error_, std::fabs(lookup(x) - fn_(x)));
        }
    }

    double operator()(double x) const {
        if (x < lo_ || x > hi_) return fn_(x);
        return lookup(x);
    }
    double probe_error() const { return probe_error_; }

private:
    double node(int i) const { return lo_ + (hi_ - lo_) * i / (nodes_ - 1.0); }
    double lookup(double x) const {
        const double f = (x - lo_) / (hi_ - lo_) * (nodes_ - 1.0);
        int i = static_cast<int>(std::floor(f));
        i = std::min(std::max(i, 1), nodes_ - 3);
        const double t = f - i;
        return catmull_rom(values_[static_cast<std::size_t>(i - 1)],
                           values_[static_cast<std::size_t>(i)],
                           values_[static_cast<std::size_t>(i + 1)],
                           values_[static_cast<std::size_t>(i + 2)], t);
    }
    std::function<double(double)> fn_;
    double lo_, hi_;
    int nodes_;
    std::vector<double> values_;
    double probe_error_ = 0.0;
};

}  // namespace evoscale
