#include "core/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace dhoa {

// ---------------------------------------------------------------------------
// MonotoneCubic (Fritsch-Carlson slopes)

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw InvalidArgument("tabulated grid needs at least two matching samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1]))
            throw InvalidArgument("tabulated abscissae must be strictly increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    slope_.assign(n, 0.0);
    if (n == 2) {
        slope_[0] = slope_[1] = delta[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                slope_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (d * d0 <= 0.0)
                d = 0.0;
            else if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0))
                d = 3.0 * d0;
            return d;
        };
        slope_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
        slope_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t n = x_.size();
    x = std::clamp(x, x_.front(), x_.back());
    std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;

    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

// ---------------------------------------------------------------------------
// WeightFunction factories

WeightFunction WeightFunction::power(double sigma, const Interval& iv) {
    if (!std::isfinite(sigma))
        throw InvalidArgument("power family: sigma must be finite");
    return WeightFunction(Family::power, PowerParams{sigma}, iv);
}

WeightFunction WeightFunction::power_beta(double sigma, double eta, double beta) {
    if (!std::isfinite(sigma) || !std::isfinite(eta))
        throw InvalidArgument("power_beta family: sigma and eta must be finite");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidArgument("power_beta family: beta must be finite and positive");
    if (!(eta + 1.0 > 0.0))
        throw InvalidArgument("power_beta family: eta + 1 must be positive");
    return WeightFunction(Family::power_beta, PowerBetaParams{sigma, eta, beta}, Interval(0.0, beta));
}

WeightFunction WeightFunction::stretched_exp(long k, long m) {
    if (k < 1 || m < 1)
        throw InvalidArgument("stretched_exp family: k and m must be positive integers");
    const long g = std::gcd(k, m);
    return WeightFunction(Family::stretched_exp, StretchedExpParams{k / g, m / g},
                          Interval(0.0, std::numeric_limits<double>::infinity()));
}

WeightFunction WeightFunction::log_gaussian(double sigma, int n) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw InvalidArgument("log_gaussian family: sigma must be positive");
    if (n < 1)
        throw InvalidArgument("log_gaussian family: n must be a positive integer");
    return WeightFunction(Family::log_gaussian, LogGaussianParams{sigma, n},
                          Interval(0.0, std::numeric_limits<double>::infinity()));
}

WeightFunction WeightFunction::essential_edge(double beta, double alpha) {
    if (!std::isfinite(beta))
        throw InvalidArgument("essential_edge family: beta must be finite");
    return WeightFunction(Family::essential_edge, EssentialEdgeParams{beta}, Interval(alpha, beta));
}

WeightFunction WeightFunction::tabulated(std::vector<double> x, std::vector<double> f) {
    if (x.size() < 2 || f.size() != x.size())
        throw InvalidArgument("tabulated grid needs at least two matching samples");
    if (!(x.front() >= 0.0))
        throw InvalidArgument("tabulated grid must live on the nonnegative half-line");
    for (double v : f)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidArgument("tabulated weight values must be strictly positive and finite");
    Interval iv(x.front(), x.back());
    return WeightFunction(Family::tabulated, TabulatedParams{MonotoneCubic(std::move(x), std::move(f))}, iv);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {
double ipow_even(double t, int two_n) {
    double r = 1.0;
    for (int i = 0; i < two_n; ++i) r *= t;
    return r;
}
} // namespace

double WeightFunction::log_eval_unchecked(double x, double t) const {
    switch (family_) {
    case Family::power:
        return std::get<PowerParams>(params_).sigma * t;
    case Family::power_beta: {
        const auto& p = std::get<PowerBetaParams>(params_);
        // beta - e^t via expm1 keeps full precision next to the edge.
        const double gap = -p.beta * std::expm1(t - std::log(p.beta));
        return p.sigma * t + p.eta * std::log(gap);
    }
    case Family::stretched_exp:
        return -std::exp(t * std::get<StretchedExpParams>(params_).exponent());
    case Family::log_gaussian: {
        const auto& p = std::get<LogGaussianParams>(params_);
        return -p.sigma * ipow_even(t, 2 * p.n);
    }
    case Family::essential_edge: {
        const auto& p = std::get<EssentialEdgeParams>(params_);
        const double gap = -p.beta * std::expm1(t - std::log(p.beta));
        return -1.0 / gap;
    }
    case Family::tabulated: {
        const auto& interp = std::get<TabulatedParams>(params_).interp;
        return std::log(interp(x));
    }
    }
    throw Error("unreachable weight family");
}

double WeightFunction::evaluate(double x) const {
    if (!interval_.contains_strict(x))
        throw DomainError("weight evaluation outside the open interval");
    return std::exp(log_eval_unchecked(x, std::log(x)));
}

double WeightFunction::log_evaluate(double x) const {
    if (!interval_.contains_strict(x))
        throw DomainError("weight evaluation outside the open interval");
    return log_eval_unchecked(x, std::log(x));
}

double WeightFunction::log_evaluate_at_exp(double t) const {
    return log_eval_unchecked(std::exp(t), t);
}

// ---------------------------------------------------------------------------
// Edge classification (analytic per family)

EdgeBehavior WeightFunction::edge_behavior(Edge edge) const {
    EdgeBehavior b;
    b.edge = edge;
    b.kind = EdgeBehavior::Kind::singular;

    // Edge-value criteria only apply at finite nonzero endpoints.
    if (edge == Edge::lower && interval_.lower_is_zero())
        return b;
    if (edge == Edge::upper && interval_.upper_is_infinite())
        return b;

    switch (family_) {
    case Family::power:
    case Family::tabulated:
        b.kind = EdgeBehavior::Kind::nonzero_value;
        break;
    case Family::stretched_exp:
    case Family::log_gaussian:
        // Canonical interval is (0, inf); both edges already handled above.
        break;
    case Family::power_beta: {
        if (edge == Edge::upper) {
            const double eta = std::get<PowerBetaParams>(params_).eta;
            const double rounded = std::round(eta);
            if (eta == 0.0) {
                b.kind = EdgeBehavior::Kind::nonzero_value;
            } else if (rounded >= 1.0 && std::abs(eta - rounded) < 1e-12) {
                b.kind = EdgeBehavior::Kind::first_nonvanishing_derivative;
                b.order = static_cast<int>(rounded);
            }
            // non-integer eta: zero or infinite derivatives at beta -> singular
        }
        break;
    }
    case Family::essential_edge:
        b.kind = (edge == Edge::upper) ? EdgeBehavior::Kind::all_derivatives_vanish
                                       : EdgeBehavior::Kind::nonzero_value;
        break;
    }
    return b;
}

// ---------------------------------------------------------------------------

std::string WeightFunction::describe() const {
    std::ostringstream os;
    switch (family_) {
    case Family::power:
        os << "power(sigma=" << std::get<PowerParams>(params_).sigma << ")";
        break;
    case Family::power_beta: {
        const auto& p = std::get<PowerBetaParams>(params_);
        os << "power_beta(sigma=" << p.sigma << ", eta=" << p.eta << ", beta=" << p.beta << ")";
        break;
    }
    case Family::stretched_exp: {
        const auto& p = std::get<StretchedExpParams>(params_);
        os << "stretched_exp(k=" << p.k << ", m=" << p.m << ")";
        break;
    }
    case Family::log_gaussian: {
        const auto& p = std::get<LogGaussianParams>(params_);
        os << "log_gaussian(sigma=" << p.sigma << ", n=" << p.n << ")";
        break;
    }
    case Family::essential_edge:
        os << "essential_edge(beta=" << std::get<EssentialEdgeParams>(params_).beta << ")";
        break;
    case Family::tabulated:
        os << "tabulated";
        break;
    }
    os << " on (" << interval_.alpha << ", " << interval_.beta << ")";
    return os.str();
}

const PowerParams& WeightFunction::power_params() const {
    return std::get<PowerParams>(params_);
}
const PowerBetaParams& WeightFunction::power_beta_params() const {
    return std::get<PowerBetaParams>(params_);
}
const StretchedExpParams& WeightFunction::stretched_exp_params() const {
    return std::get<StretchedExpParams>(params_);
}
const LogGaussianParams& WeightFunction::log_gaussian_params() const {
    return std::get<LogGaussianParams>(params_);
}
const EssentialEdgeParams& WeightFunction::essential_edge_params() const {
    return std::get<EssentialEdgeParams>(params_);
}

} // namespace dhoa
