#ifndef DHOA_CORE_WEIGHT_FUNCTION_HPP
#define DHOA_CORE_WEIGHT_FUNCTION_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/interval.hpp"
#include "core/pchip.hpp"

namespace dhoa {

// F(x) = x^sigma on (alpha, beta); beta may be infinite.
struct PowerParams {
    double sigma = 0.0;
};

// F(x) = x^sigma (beta - x)^eta on (0, beta), eta + 1 > 0.
struct PowerBetaParams {
    double sigma = 0.0;
    double eta = 0.0;
    double beta = 1.0;
};

// F(x) = exp(-x^(k/m)) on (0, inf); k/m reduced positive rational.
struct StretchedExpParams {
    long k = 1;
    long m = 1;
    double exponent() const { return static_cast<double>(k) / static_cast<double>(m); }
};

// F(x) = exp(-sigma (ln x)^(2n)) on (0, inf); sigma > 0, n >= 1.
struct LogGaussianParams {
    double sigma = 1.0;
    int n = 1;
};

// F(x) = exp(1/(x - beta)) on (alpha, beta); every derivative vanishes at beta.
struct EssentialEdgeParams {
    double beta = 1.0;
};

// Strictly positive samples on a grid, PCHIP-interpolated between them.
struct TabulatedParams {
    MonotoneCubic interp;
};

enum class Family { power, power_beta, stretched_exp, log_gaussian, essential_edge, tabulated };

struct EdgeBehavior {
    enum class Kind { nonzero_value, first_nonvanishing_derivative, all_derivatives_vanish, singular };
    Edge edge = Edge::lower;
    Kind kind = Kind::singular;
    int order = 0; // >= 1 when kind == first_nonvanishing_derivative
};

// A positive weight function on an open interval of the half-line. Immutable
// after construction; safe to share across threads.
class WeightFunction {
public:
    static WeightFunction power(double sigma, const Interval& iv);
    static WeightFunction power_beta(double sigma, double eta, double beta);
    static WeightFunction stretched_exp(long k, long m);
    static WeightFunction log_gaussian(double sigma, int n);
    static WeightFunction essential_edge(double beta, double alpha = 0.0);
    static WeightFunction tabulated(std::vector<double> x, std::vector<double> f);

    Family family() const { return family_; }
    const Interval& interval() const { return interval_; }

    // F(x) for x strictly inside the interval; throws DomainError otherwise.
    double evaluate(double x) const;

    // ln F(x), same domain rules.
    double log_evaluate(double x) const;

    // ln F(e^t). Stable at extreme t (handles e^t underflow and the
    // cancellation in beta - e^t near the upper edge).
    double log_evaluate_at_exp(double t) const;

    // Analytic classification of F near a finite endpoint; never numeric
    // differentiation. Edges at 0 or +inf report `singular` (the edge-value
    // criteria do not apply there).
    EdgeBehavior edge_behavior(Edge edge) const;

    std::string describe() const;

    const PowerParams& power_params() const;
    const PowerBetaParams& power_beta_params() const;
    const StretchedExpParams& stretched_exp_params() const;
    const LogGaussianParams& log_gaussian_params() const;
    const EssentialEdgeParams& essential_edge_params() const;

private:
    using Params = std::variant<PowerParams, PowerBetaParams, StretchedExpParams,
                                LogGaussianParams, EssentialEdgeParams, TabulatedParams>;

    WeightFunction(Family f, Params p, Interval iv)
        : family_(f), params_(std::move(p)), interval_(iv) {}

    double log_eval_unchecked(double x, double t) const;

    Family family_;
    Params params_;
    Interval interval_;
};

} // namespace dhoa

#endif
