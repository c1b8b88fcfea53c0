#ifndef DHOA_CORE_QUADRATURE_HPP
#define DHOA_CORE_QUADRATURE_HPP

#include <functional>

namespace dhoa {

struct QuadratureOptions {
    double rel_tol = 1e-12;   // target; 1e-10 is still accepted by callers
    double abs_tol = 0.0;
    int max_panels = 10000;
    int max_shells = 64;      // doubling windows per infinite side
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int panels = 0;
    bool converged = false;
};

// 15-point Kronrod rule with embedded 7-point Gauss estimate on [a, b].
// Endpoints are never evaluated (all nodes are interior).
QuadratureResult gauss_kronrod_15(const std::function<double(double)>& f, double a, double b);

// Globally adaptive bisection on a finite interval, refining the panel with
// the largest error estimate first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts = {});

struct TailResult {
    double value = 0.0;
    double abs_error = 0.0;
    int shells = 0;
    bool converged = false;
    bool divergent = false;   // window contributions kept growing
};

// Integrate f from `origin` toward +inf (direction = +1) or -inf (-1) by
// summing windows of doubling width. Divergence is declared when the window
// contributions grow across three successive windows instead of decaying;
// `scale` anchors the relative smallness test for the final windows.
TailResult integrate_tail(const std::function<double(double)>& f, double origin, int direction,
                          double scale, const QuadratureOptions& opts = {});

} // namespace dhoa

#endif
