#ifndef DHOA_CORE_INTERVAL_HPP
#define DHOA_CORE_INTERVAL_HPP

#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace dhoa {

// Open interval (alpha, beta) of squared moduli |z|^2, 0 <= alpha < beta <= inf.
// This is the ring D of the complex plane on which the weight lives.
struct Interval {
    double alpha = 0.0;
    double beta = std::numeric_limits<double>::infinity();

    Interval() = default;
    Interval(double a, double b) : alpha(a), beta(b) {
        if (!(a >= 0.0) || !(a < b))
            throw InvalidArgument("interval requires 0 <= alpha < beta");
        if (std::isnan(b))
            throw InvalidArgument("interval upper bound is NaN");
    }

    bool lower_is_zero() const { return alpha == 0.0; }
    bool upper_is_infinite() const { return std::isinf(beta); }
    bool is_finite_ring() const { return alpha > 0.0 && !upper_is_infinite(); }

    bool contains_strict(double x) const { return x > alpha && x < beta; }
};

enum class Edge { lower, upper };

} // namespace dhoa

#endif
