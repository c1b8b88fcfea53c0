#include "core/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace dhoa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEdgeTol = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
} // namespace

Mode flipped(Mode m) {
    return m == Mode::annihilation ? Mode::creation : Mode::annihilation;
}

struct BuildAccess {
    static DeformedAlgebra make(MellinProfilePtr p, Mode mode, double mu, SpectrumDescriptor s,
                                CoherentDomain d) {
        return DeformedAlgebra(std::move(p), mode, mu, s, d);
    }
};

// ---------------------------------------------------------------------------
// psi and its factorial

std::pair<double, double> DeformedAlgebra::psi_support() const {
    const auto& conv = profile_->convergence();
    if (conv.shape == ConvergenceDomain::Shape::all_rho)
        return {-kInf, kInf};
    // above_nu: the transform argument must stay above nu
    if (mode_ == Mode::annihilation)
        return {mu_ + conv.nu, kInf};
    return {-kInf, mu_ - conv.nu + 1.0};
}

double DeformedAlgebra::log_psi(double rho) const {
    const auto& conv = profile_->convergence();
    if (mode_ == Mode::annihilation) {
        const double x = rho - mu_;
        if (conv.shape == ConvergenceDomain::Shape::above_nu) {
            if (x < conv.nu - kEdgeTol)
                throw DomainError("psi argument below the spectral edge");
            if (x <= conv.nu + kEdgeTol)
                return -kInf; // zero of psi at the edge
        }
        return profile_->log_value(x + 1.0) - profile_->log_value(x);
    }
    const double x = -(rho - mu_);
    if (conv.shape == ConvergenceDomain::Shape::above_nu) {
        if (x + 1.0 < conv.nu - kEdgeTol)
            throw DomainError("psi argument above the spectral edge");
        if (x + 1.0 <= conv.nu + kEdgeTol)
            return -kInf;
    }
    return profile_->log_value(x + 2.0) - profile_->log_value(x + 1.0);
}

double DeformedAlgebra::psi(double rho) const {
    return std::exp(log_psi(rho));
}

bool DeformedAlgebra::index_in_spectrum(long n) const {
    switch (spectrum_.shape) {
    case SpectrumDescriptor::Shape::all_integers: return true;
    case SpectrumDescriptor::Shape::lower_bounded: return n >= spectrum_.edge;
    case SpectrumDescriptor::Shape::upper_bounded: return n <= spectrum_.edge;
    }
    return false;
}

double DeformedAlgebra::log_psi_factorial(long n) const {
    if (!index_in_spectrum(n))
        throw DomainError("index outside the spectrum");
    double acc = 0.0;
    if (n > 0)
        for (long i = 1; i <= n; ++i)
            acc += log_psi(mu_ + static_cast<double>(i));
    else if (n < 0)
        for (long i = n + 1; i <= 0; ++i)
            acc += log_psi(mu_ + static_cast<double>(i));
    return acc;
}

double DeformedAlgebra::psi_factorial(long n) const {
    return std::exp(log_psi_factorial(n));
}

DeformedAlgebra DeformedAlgebra::dual() const {
    return require_algebra(profile_, flipped(mode_), mu_);
}

// ---------------------------------------------------------------------------
// Construction

Classification classify_construction(const ConvergenceDomain& conv, const RatioLimits& limits,
                                     Mode mode) {
    using Shape = ConvergenceDomain::Shape;
    Classification out;
    DiagnosticsReport& rep = out.report;

    const bool upper_unbounded = conv.shape == Shape::all_rho || conv.shape == Shape::above_nu;
    rep.add("mellin-upper-unbounded",
            upper_unbounded ? CheckEntry::Status::pass : CheckEntry::Status::fail, true, 0.0,
            upper_unbounded
                ? "transform finite on an upper-unbounded interval"
                : (conv.shape == Shape::below_nu
                       ? "transform finite only below a finite abscissa; the characteristic "
                         "function would be singular at finite distance"
                       : "transform integral diverges for every rho"));
    if (!upper_unbounded) {
        rep.reject(rep.checks.back().statement);
        return out;
    }

    long edge_index = 0;
    if (conv.shape == Shape::above_nu) {
        const double nu = conv.nu;
        const double rounded = std::round(nu);
        const bool integer_ok = std::abs(nu - rounded) <= 1e-9 && rounded <= 0.0;
        rep.add("abscissa-nonpositive-integer",
                integer_ok ? CheckEntry::Status::pass : CheckEntry::Status::fail, true,
                std::abs(nu - rounded),
                "convergence abscissa nu = " + fmt(nu) +
                    (integer_ok ? " is a nonpositive integer"
                                : " is not a nonpositive integer"));
        if (!integer_ok) {
            rep.reject("convergence abscissa nu = " + fmt(nu) +
                       " is not a nonpositive integer");
            return out;
        }
        edge_index = std::lround(nu);
    } else {
        rep.add("abscissa-nonpositive-integer", CheckEntry::Status::not_applicable, true, 0.0,
                "transform finite on the whole real axis");
    }

    if (conv.shape == Shape::all_rho) {
        const bool ordered = limits.at_minus_infinity < limits.at_plus_infinity;
        std::ostringstream os;
        os << "ratio limits " << limits.at_minus_infinity << " and " << limits.at_plus_infinity
           << (ordered ? " are strictly ordered" : " do not leave room for a coherent ring");
        rep.add("ratio-limits-ordered",
                ordered ? CheckEntry::Status::pass : CheckEntry::Status::fail, true,
                ordered ? 0.0 : 1.0, os.str());
        if (!ordered) {
            rep.reject(limits.at_minus_infinity == limits.at_plus_infinity
                           ? "empty coherent domain: the two ratio limits coincide"
                           : "empty coherent domain: ratio limits out of order");
            return out;
        }
    } else {
        rep.add("ratio-limits-ordered", CheckEntry::Status::not_applicable, true, 0.0,
                "spectrum is bounded; only the outer radius applies");
    }

    SpectrumDescriptor spec;
    if (conv.shape == Shape::all_rho) {
        spec.shape = SpectrumDescriptor::Shape::all_integers;
    } else if (mode == Mode::annihilation) {
        spec.shape = SpectrumDescriptor::Shape::lower_bounded;
        spec.edge = edge_index;
    } else {
        spec.shape = SpectrumDescriptor::Shape::upper_bounded;
        spec.edge = -edge_index;
    }

    CoherentDomain dom;
    dom.inner_sq = (conv.shape == Shape::above_nu) ? 0.0 : limits.at_minus_infinity;
    dom.outer_sq = limits.at_plus_infinity;
    if (!(dom.inner_sq < dom.outer_sq)) {
        rep.reject("empty coherent domain");
        return out;
    }

    out.spectrum = spec;
    out.domain = dom;
    return out;
}

BuildOutcome build_algebra(MellinProfilePtr profile, Mode mode, double mu) {
    if (!profile)
        throw InvalidArgument("null profile");
    BuildOutcome out;

    const ConvergenceDomain& conv = profile->convergence();
    RatioLimits limits;
    const bool upper_unbounded = conv.shape == ConvergenceDomain::Shape::all_rho ||
                                 conv.shape == ConvergenceDomain::Shape::above_nu;
    if (upper_unbounded)
        limits = profile->ratio_limits();

    Classification cls = classify_construction(conv, limits, mode);
    out.report = cls.report;
    if (!cls.spectrum)
        return out;

    out.report.add("weight", CheckEntry::Status::pass, false, 0.0, profile->weight().describe());
    out.algebra = BuildAccess::make(std::move(profile), mode, mu, *cls.spectrum, *cls.domain);
    return out;
}

DeformedAlgebra require_algebra(MellinProfilePtr profile, Mode mode, double mu) {
    BuildOutcome out = build_algebra(std::move(profile), mode, mu);
    if (!out.algebra)
        throw DomainError("algebra construction rejected: " + out.report.rejection_reason);
    return *std::move(out.algebra);
}

// ---------------------------------------------------------------------------
// Sampling grid

std::vector<double> make_psi_grid(const DeformedAlgebra& alg, int points, double span,
                                  double edge_offset) {
    if (points < 3)
        throw InvalidArgument("grid needs at least 3 points");
    const auto [lo, hi] = alg.psi_support();
    std::vector<double> grid;
    grid.reserve(points);

    auto geometric = [&](double from, double to, int n, auto&& emit) {
        // n offsets from `from` geometrically spaced in [edge_offset, span]
        const double ratio = std::log(span / edge_offset);
        const double denom = (n > 1) ? (n - 1) : 1;
        for (int i = 0; i < n; ++i) {
            const double g = edge_offset * std::exp(ratio * i / denom);
            emit(from + (to > from ? g : -g));
        }
    };

    if (std::isfinite(lo)) {
        geometric(lo, kInf, points, [&](double v) { grid.push_back(v); });
    } else if (std::isfinite(hi)) {
        geometric(hi, -kInf, points, [&](double v) { grid.push_back(v); });
        std::reverse(grid.begin(), grid.end());
    } else {
        const int half = (points - 1) / 2;
        const double center = alg.mu();
        grid.push_back(center);
        geometric(center, kInf, half, [&](double v) { grid.push_back(v); });
        geometric(center, -kInf, half, [&](double v) { grid.push_back(v); });
        std::sort(grid.begin(), grid.end());
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Sufficient conditions and direct verification

namespace {

bool edge_condition_met(const WeightFunction& w, Edge e) {
    const EdgeBehavior b = w.edge_behavior(e);
    return b.kind == EdgeBehavior::Kind::nonzero_value ||
           b.kind == EdgeBehavior::Kind::first_nonvanishing_derivative;
}

} // namespace

DiagnosticsReport check_sufficient(const DeformedAlgebra& alg, const CheckOptions& opts) {
    DiagnosticsReport rep;
    const MellinProfile& p = *alg.profile();
    const WeightFunction& w = p.weight();
    const Interval& iv = w.interval();
    const ConvergenceDomain& conv = p.convergence();
    const RatioLimits& lim = p.ratio_limits();
    const std::string not_covered = "not covered - consistency must be verified directly";

    // Which sufficient criterion applies to this interval shape.
    if (iv.is_finite_ring()) {
        const bool ok = edge_condition_met(w, Edge::lower) && edge_condition_met(w, Edge::upper);
        rep.add("ring-edge-sufficient", ok ? CheckEntry::Status::pass : CheckEntry::Status::not_applicable,
                false, 0.0,
                ok ? "finite ring with admissible edge values; construction guaranteed"
                   : "finite ring but an edge condition fails: " + not_covered);
        rep.add("disk-full-axis-sufficient", CheckEntry::Status::not_applicable, false, 0.0,
                "domain is a ring, not a disk");
        rep.add("disk-bounded-sufficient", CheckEntry::Status::not_applicable, false, 0.0,
                "domain is a ring, not a disk");
    } else if (iv.lower_is_zero() && !iv.upper_is_infinite()) {
        const bool beta_ok = edge_condition_met(w, Edge::upper);
        if (conv.shape == ConvergenceDomain::Shape::all_rho) {
            const bool ok = beta_ok && lim.at_minus_infinity == 0.0;
            rep.add("disk-full-axis-sufficient",
                    ok ? CheckEntry::Status::pass : CheckEntry::Status::not_applicable, false, 0.0,
                    ok ? "disk with full-axis transform and vanishing lower ratio limit"
                       : "disk case hypotheses fail: " + not_covered);
            rep.add("disk-bounded-sufficient", CheckEntry::Status::not_applicable, false, 0.0,
                    "transform exists on the whole axis");
        } else {
            const bool ok = beta_ok;
            rep.add("disk-bounded-sufficient",
                    ok ? CheckEntry::Status::pass : CheckEntry::Status::not_applicable, false, 0.0,
                    ok ? "disk with integer abscissa and admissible upper edge"
                       : "upper edge condition fails: " + not_covered);
            rep.add("disk-full-axis-sufficient", CheckEntry::Status::not_applicable, false, 0.0,
                    "transform abscissa is finite");
        }
        rep.add("ring-edge-sufficient", CheckEntry::Status::not_applicable, false, 0.0,
                "domain is a disk, not a finite ring");
    } else {
        const std::string why = "domain extends to infinity: " + not_covered;
        rep.add("ring-edge-sufficient", CheckEntry::Status::not_applicable, false, 0.0, why);
        rep.add("disk-full-axis-sufficient", CheckEntry::Status::not_applicable, false, 0.0, why);
        rep.add("disk-bounded-sufficient", CheckEntry::Status::not_applicable, false, 0.0, why);
    }

    // Direct verification on a sampling grid.
    const std::vector<double> grid = make_psi_grid(alg, opts.grid_points, opts.grid_span);
    std::vector<double> psi_vals;
    psi_vals.reserve(grid.size());
    for (double rho : grid)
        psi_vals.push_back(alg.psi(rho));

    {
        // alpha <= psi <= beta, a consequence of the defining integral.
        double worst = 0.0;
        for (double v : psi_vals) {
            if (std::isfinite(iv.beta))
                worst = std::max(worst, (v - iv.beta) / iv.beta);
            worst = std::max(worst, (iv.alpha - v) / std::max(iv.alpha, 1.0));
        }
        rep.add("band-condition",
                worst <= opts.band_slack ? CheckEntry::Status::pass : CheckEntry::Status::fail,
                true, std::max(worst, 0.0),
                "sampled psi within [alpha, beta] = [" + fmt(iv.alpha) + ", " + fmt(iv.beta) + "]");
    }

    {
        // Sampled psi strictly between its two limiting values.
        const double lo = std::min(lim.at_minus_infinity, lim.at_plus_infinity);
        const double hi = std::max(lim.at_minus_infinity, lim.at_plus_infinity);
        const double lo_eff = alg.spectrum().shape == SpectrumDescriptor::Shape::all_integers
                                  ? lo
                                  : 0.0;
        bool ok = true;
        for (double v : psi_vals)
            ok = ok && v > lo_eff && v < hi;
        rep.add("psi-between-limits", ok ? CheckEntry::Status::pass : CheckEntry::Status::fail,
                true, 0.0,
                "sampled psi strictly inside (" + fmt(lo_eff) + ", " + fmt(hi) + ")");
    }

    {
        // Extrapolated ratio limits against the stored ones.
        double residual = 0.0;
        bool ok = true;
        std::ostringstream os;
        try {
            double extr_plus = p.extrapolate_ratio_limit(+1);
            if (std::isinf(lim.at_plus_infinity)) {
                ok = std::isinf(extr_plus) || extr_plus > p.ratio(8.0 * p.options().ratio_limit_base);
                os << "outer limit diverges; extrapolation agrees";
            } else {
                residual = std::abs(extr_plus - lim.at_plus_infinity) /
                           std::max(1.0, lim.at_plus_infinity);
                ok = residual <= opts.limit_consistency_tol;
                os << "outer limit " << lim.at_plus_infinity << ", extrapolated " << extr_plus;
            }
            if (alg.spectrum().shape == SpectrumDescriptor::Shape::all_integers) {
                double extr_minus = p.extrapolate_ratio_limit(-1);
                const double r2 = std::isinf(lim.at_minus_infinity)
                                      ? 0.0
                                      : std::abs(extr_minus - lim.at_minus_infinity) /
                                            std::max(1.0, lim.at_minus_infinity);
                residual = std::max(residual, r2);
                ok = ok && r2 <= opts.limit_consistency_tol;
                os << "; inner limit " << lim.at_minus_infinity << ", extrapolated " << extr_minus;
            }
        } catch (const NumericalFailure& e) {
            ok = false;
            os << "extrapolation failed: " << e.what();
        }
        rep.add("ratio-limit-consistency", ok ? CheckEntry::Status::pass : CheckEntry::Status::fail,
                true, residual, os.str());
    }

    // Advisory sanity checks on the transform itself (F-argument space).
    const double nu = conv.abscissa();
    const double samp_lo = std::isfinite(nu) ? nu + 1.2 : -10.0;
    const double samp_hi = 20.0;
    {
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 24; ++i) {
            const double rho = samp_lo + i * (samp_hi - samp_lo) / 23.0;
            const double fl = std::floor(rho);
            if (fl <= nu || fl == rho)
                continue;
            // log(F(fl) + F(fl+1)) via the larger term
            const double la = p.log_value(fl), lb = p.log_value(fl + 1.0);
            const double m = std::max(la, lb);
            const double bound = m + std::log(std::exp(la - m) + std::exp(lb - m));
            worst = std::max(worst, p.log_value(rho) - bound);
            ok = ok && p.log_value(rho) <= bound + 1e-10;
        }
        rep.add("mellin-monotone-bound", ok ? CheckEntry::Status::pass : CheckEntry::Status::fail,
                false, std::max(worst, 0.0),
                "transform bounded by the sum of the two flanking integer values");
    }
    {
        bool ok = true;
        double worst = 0.0;
        for (double h : {0.5, 1.0}) {
            for (int i = 0; i < 16; ++i) {
                const double x = samp_lo + h + i * (samp_hi - samp_lo - h) / 15.0;
                if (!conv.contains(x - h) || !conv.contains(x + h))
                    continue;
                const double mid = 2.0 * p.log_value(x);
                const double sides = p.log_value(x - h) + p.log_value(x + h);
                worst = std::max(worst, mid - sides);
                ok = ok && mid <= sides + 1e-10;
            }
        }
        rep.add("log-convexity", ok ? CheckEntry::Status::pass : CheckEntry::Status::fail, false,
                std::max(worst, 0.0),
                "squared transform bounded by the product of equidistant neighbours");
    }
    {
        // psi nondecreasing toward the outer limit (nonincreasing in rho for
        // the reflected mode); log-convexity makes this hold up to noise.
        bool ok = true;
        const double sgn = alg.mode() == Mode::annihilation ? 1.0 : -1.0;
        for (std::size_t i = 1; i < psi_vals.size(); ++i) {
            const double slack = 1e-9 * std::max(psi_vals[i - 1], psi_vals[i]);
            if (sgn * (psi_vals[i] - psi_vals[i - 1]) < -slack)
                ok = false;
        }
        rep.add("ratio-nondecreasing", ok ? CheckEntry::Status::pass : CheckEntry::Status::fail,
                false, 0.0, "sampled characteristic function monotone toward the outer limit");
    }

    return rep;
}

} // namespace dhoa
