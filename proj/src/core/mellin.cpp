#include "core/mellin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace dhoa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logsumexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Analytic convergence classification: the integral is constrained only by
// the x -> 0 edge (when alpha = 0) and the x -> inf edge (when beta = inf).
ConvergenceDomain classify_convergence(const WeightFunction& w) {
    const Interval& iv = w.interval();
    std::optional<double> lower_bound; // finite for rho > this
    std::optional<double> upper_bound; // finite for rho < this

    if (iv.lower_is_zero()) {
        switch (w.family()) {
        case Family::power:
            lower_bound = -w.power_params().sigma;
            break;
        case Family::power_beta:
            lower_bound = -w.power_beta_params().sigma;
            break;
        case Family::stretched_exp:
        case Family::essential_edge:
        case Family::tabulated:
            lower_bound = 0.0; // F has a finite positive limit at 0
            break;
        case Family::log_gaussian:
            break; // decays faster than any power of x
        }
    }
    if (iv.upper_is_infinite()) {
        switch (w.family()) {
        case Family::power:
            upper_bound = -w.power_params().sigma;
            break;
        case Family::stretched_exp:
        case Family::log_gaussian:
            break; // decays faster than any power of x
        default:
            break; // other families have finite beta by construction
        }
    }

    ConvergenceDomain d;
    if (lower_bound && upper_bound) {
        d.shape = ConvergenceDomain::Shape::nowhere; // (nu_lo, nu_hi) is empty here
        d.nu = *lower_bound;
    } else if (lower_bound) {
        d.shape = ConvergenceDomain::Shape::above_nu;
        d.nu = *lower_bound;
    } else if (upper_bound) {
        d.shape = ConvergenceDomain::Shape::below_nu;
        d.nu = *upper_bound;
    } else {
        d.shape = ConvergenceDomain::Shape::all_rho;
    }
    return d;
}

bool family_has_closed_form(const WeightFunction& w) {
    switch (w.family()) {
    case Family::power:
    case Family::power_beta:
    case Family::stretched_exp:
        return true;
    case Family::log_gaussian:
        return w.log_gaussian_params().n == 1;
    default:
        return false;
    }
}

// Peak hints for the substituted integrand ln F(e^t) + rho t.
void add_peak_hints(const WeightFunction& w, double rho, std::vector<double>& hints) {
    switch (w.family()) {
    case Family::stretched_exp: {
        const double c = w.stretched_exp_params().exponent();
        if (rho > 0.0)
            hints.push_back(std::log(rho / c) / c);
        break;
    }
    case Family::log_gaussian: {
        const auto& p = w.log_gaussian_params();
        const double e = 1.0 / (2.0 * p.n - 1.0);
        const double t = std::pow(std::abs(rho) / (2.0 * p.n * p.sigma), e);
        hints.push_back(rho >= 0.0 ? t : -t);
        break;
    }
    case Family::power_beta: {
        const auto& p = w.power_beta_params();
        const double s = p.sigma + rho;
        if (s > 0.0)
            hints.push_back(std::log(p.beta * s / (s + std::max(p.eta, 1e-300))));
        break;
    }
    default:
        break;
    }
}

struct PolyFit {
    std::array<double, 4> coeff{};
    double residual = 0.0;
};

// Least-squares cubic through (v_i, r_i); 5 samples, 4 coefficients.
std::optional<PolyFit> fit_cubic(const std::vector<double>& v, const std::vector<double>& r) {
    const std::size_t n = v.size();
    long double ata[4][4] = {};
    long double atb[4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        long double basis[4] = {1.0L, v[i], v[i] * v[i], v[i] * v[i] * v[i]};
        for (int a = 0; a < 4; ++a) {
            atb[a] += basis[a] * r[i];
            for (int b = 0; b < 4; ++b)
                ata[a][b] += basis[a] * basis[b];
        }
    }
    // Gaussian elimination with partial pivoting.
    int perm[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs((double)ata[perm[row]][col]) > std::abs((double)ata[perm[pivot]][col]))
                pivot = row;
        std::swap(perm[col], perm[pivot]);
        if (ata[perm[col]][col] == 0.0L)
            return std::nullopt;
        for (int row = col + 1; row < 4; ++row) {
            const long double f = ata[perm[row]][col] / ata[perm[col]][col];
            for (int b = col; b < 4; ++b)
                ata[perm[row]][b] -= f * ata[perm[col]][b];
            atb[perm[row]] -= f * atb[perm[col]];
        }
    }
    PolyFit fit;
    for (int col = 3; col >= 0; --col) {
        long double s = atb[perm[col]];
        for (int b = col + 1; b < 4; ++b)
            s -= ata[perm[col]][b] * fit.coeff[b];
        fit.coeff[col] = (double)(s / ata[perm[col]][col]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double p = fit.coeff[0] + v[i] * (fit.coeff[1] + v[i] * (fit.coeff[2] + v[i] * fit.coeff[3]));
        fit.residual = std::max(fit.residual, std::abs(p - r[i]));
    }
    return fit;
}

} // namespace

double ConvergenceDomain::abscissa() const {
    switch (shape) {
    case Shape::all_rho: return -kInf;
    case Shape::above_nu: return nu;
    case Shape::below_nu:
    case Shape::nowhere: return kInf;
    }
    return kInf;
}

MellinProfile::MellinProfile(WeightFunction w, MellinOptions opts)
    : weight_(std::move(w)), opts_(opts) {
    convergence_ = classify_convergence(weight_);
    has_closed_form_ = family_has_closed_form(weight_);
    if (opts_.method == MellinMethod::closed_form && !has_closed_form_)
        throw InvalidArgument("no closed-form transform for " + weight_.describe());
}

// ---------------------------------------------------------------------------
// Closed forms (log scale)

double MellinProfile::compute_closed_form(double rho) const {
    const Interval& iv = weight_.interval();
    switch (weight_.family()) {
    case Family::power: {
        const double s = weight_.power_params().sigma + rho;
        const double la = iv.lower_is_zero() ? -kInf : std::log(iv.alpha);
        const double lb = iv.upper_is_infinite() ? kInf : std::log(iv.beta);
        if (iv.lower_is_zero() && iv.upper_is_infinite())
            throw DivergentIntegral("power weight on (0, inf) has no finite transform");
        if (iv.lower_is_zero())
            return s * lb - std::log(s); // caller guarantees s > 0
        if (iv.upper_is_infinite())
            return s * la - std::log(-s); // caller guarantees s < 0
        const double width = lb - la;
        if (std::abs(s) < 1e-6) {
            // (b^s - a^s)/s = width * (1 + s*(la+lb)/2 + s^2*(la^2+la*lb+lb^2)/6 + ...)
            const double c1 = 0.5 * (la + lb);
            const double c2 = (la * la + la * lb + lb * lb) / 6.0;
            return std::log(width) + std::log1p(s * c1 + s * s * c2);
        }
        if (s > 0.0)
            return s * lb + std::log1p(-std::exp(s * (la - lb))) - std::log(s);
        return s * la + std::log1p(-std::exp(s * (lb - la))) - std::log(-s);
    }
    case Family::power_beta: {
        const auto& p = weight_.power_beta_params();
        const double a = rho + p.sigma; // > 0 by the convergence guard
        return (p.eta + p.sigma + rho) * std::log(p.beta) + std::lgamma(a) +
               std::lgamma(p.eta + 1.0) - std::lgamma(a + p.eta + 1.0);
    }
    case Family::stretched_exp: {
        const auto& p = weight_.stretched_exp_params();
        const double inv = 1.0 / p.exponent(); // m/k
        return std::log(inv) + std::lgamma(rho * inv);
    }
    case Family::log_gaussian: {
        const auto& p = weight_.log_gaussian_params();
        // Gaussian integral of exp(-sigma t^2 + rho t)
        return 0.5 * std::log(M_PI / p.sigma) + rho * rho / (4.0 * p.sigma);
    }
    default:
        throw Error("no closed-form transform for " + weight_.describe());
    }
}

// ---------------------------------------------------------------------------
// Quadrature path: x = e^t maps the integral to exp(ln F(e^t) + rho t) on
// (ln alpha, ln beta); an essential upper edge additionally substitutes
// u = 1/(beta - x) past a splitting point, turning the edge into an e^{-u}
// tail.

MellinProfile::QuadOutcome MellinProfile::quadrature_probe(double rho) const {
    const Interval& iv = weight_.interval();
    const QuadratureOptions& q = opts_.quadrature;

    const bool essential_split =
        weight_.family() == Family::essential_edge && !iv.upper_is_infinite();
    const double beta = iv.beta;
    const double split_x = essential_split ? beta - std::min(1.0, 0.5 * (beta - iv.alpha)) : 0.0;

    const double t_lo = iv.lower_is_zero() ? -kInf : std::log(iv.alpha);
    const double t_hi = essential_split ? std::log(split_x)
                                        : (iv.upper_is_infinite() ? kInf : std::log(iv.beta));

    // Scale scan over the substituted integrand.
    const double scan_cap = 400.0;
    std::vector<double> candidates;
    const double scan_lo = std::max(t_lo, -scan_cap);
    const double scan_hi = std::min(t_hi, scan_cap);
    const int scan_n = 512;
    for (int i = 0; i <= scan_n; ++i)
        candidates.push_back(scan_lo + (scan_hi - scan_lo) * i / scan_n);
    add_peak_hints(weight_, rho, candidates);

    double t_peak = scan_lo;
    double log_scale = -kInf;
    for (double t : candidates) {
        if (t < t_lo || t > t_hi) continue;
        const double g = weight_.log_evaluate_at_exp(t) + rho * t;
        if (g > log_scale) {
            log_scale = g;
            t_peak = t;
        }
    }
    if (log_scale == -kInf)
        log_scale = 0.0;

    const double s0 = log_scale;
    auto f = [&](double t) { return std::exp(weight_.log_evaluate_at_exp(t) + rho * t - s0); };

    QuadOutcome out;
    double total = 0.0, err = 0.0;
    bool all_converged = true;

    const double core_lo = std::isfinite(t_lo) ? t_lo : t_peak - 8.0;
    const double core_hi = std::isfinite(t_hi) ? t_hi : t_peak + 8.0;
    QuadratureResult core = integrate_adaptive(f, core_lo, core_hi, q);
    total += core.value;
    err += core.abs_error;
    all_converged = all_converged && core.converged;

    if (!std::isfinite(t_hi)) {
        TailResult tail = integrate_tail(f, core_hi, +1, total, q);
        if (tail.divergent) {
            out.divergent = true;
            return out;
        }
        total += tail.value;
        err += tail.abs_error;
        all_converged = all_converged && tail.converged;
    }
    if (!std::isfinite(t_lo)) {
        TailResult tail = integrate_tail(f, core_lo, -1, total, q);
        if (tail.divergent) {
            out.divergent = true;
            return out;
        }
        total += tail.value;
        err += tail.abs_error;
        all_converged = all_converged && tail.converged;
    }

    double log_main = (total > 0.0) ? s0 + std::log(total) : -kInf;
    double rel_main = (total > 0.0) ? err / total : 0.0;

    if (essential_split) {
        // Right part: u = 1/(beta - x), integrand e^{-u} (beta - 1/u)^{rho-1} u^{-2}.
        const double u_s = 1.0 / (beta - split_x);
        auto log_g = [&](double u) {
            return -u + (rho - 1.0) * std::log(beta - 1.0 / u) - 2.0 * std::log(u);
        };
        double s1 = -kInf;
        for (int i = 0; i <= 256; ++i) {
            const double u = u_s + i * 0.5;
            s1 = std::max(s1, log_g(u));
        }
        auto fu = [&](double u) { return std::exp(log_g(u) - s1); };
        QuadratureResult ucore = integrate_adaptive(fu, u_s, u_s + 128.0, q);
        TailResult utail = integrate_tail(fu, u_s + 128.0, +1, ucore.value, q);
        const double usum = ucore.value + utail.value;
        all_converged = all_converged && ucore.converged && utail.converged && !utail.divergent;
        if (usum > 0.0) {
            const double log_right = s1 + std::log(usum);
            const double rel_right = (ucore.abs_error + utail.abs_error) / usum;
            const double combined = logsumexp(log_main, log_right);
            const double w_main = std::exp(log_main - combined);
            rel_main = w_main * rel_main + (1.0 - w_main) * rel_right;
            log_main = combined;
        }
    }

    out.log_value = log_main;
    out.rel_error = rel_main;
    out.converged = all_converged && log_main > -kInf;
    return out;
}

double MellinProfile::compute_quadrature(double rho) const {
    QuadOutcome q = quadrature_probe(rho);
    if (q.divergent)
        throw DivergentIntegral("transform integral diverges at rho = " + std::to_string(rho));
    if (!q.converged) {
        std::ostringstream os;
        os << "transform quadrature did not converge at rho = " << rho
           << " (log-scale estimate " << q.log_value << ", relative bound " << q.rel_error << ")";
        throw NumericalFailure(os.str(), q.log_value, q.rel_error);
    }
    return q.log_value;
}

// ---------------------------------------------------------------------------

double MellinProfile::cached(int path, double rho,
                             double (MellinProfile::*compute)(double) const) const {
    const bool cacheable = opts_.cache_enabled && std::abs(rho) < 4.0e6;
    long long key = 0;
    if (cacheable) {
        key = std::llround(rho * 1e12);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_[path].find(key);
        if (it != cache_[path].end())
            return it->second;
    }
    const double v = (this->*compute)(rho);
    if (cacheable) {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_[path].emplace(key, v);
    }
    return v;
}

double MellinProfile::log_value(double rho) const {
    if (!convergence_.contains(rho))
        throw DivergentIntegral("transform integral diverges at rho = " + std::to_string(rho));
    const bool closed = (opts_.method == MellinMethod::closed_form) ||
                        (opts_.method == MellinMethod::automatic && has_closed_form_);
    if (closed)
        return cached(0, rho, &MellinProfile::compute_closed_form);
    return cached(1, rho, &MellinProfile::compute_quadrature);
}

double MellinProfile::value(double rho) const {
    return std::exp(log_value(rho));
}

std::optional<double> MellinProfile::try_log_value(double rho) const {
    try {
        return log_value(rho);
    } catch (const DivergentIntegral&) {
        return std::nullopt;
    }
}

double MellinProfile::ratio(double rho) const {
    return std::exp(log_ratio(rho));
}

double MellinProfile::log_normalization() const {
    return log_value(1.0);
}

double MellinProfile::log_value_closed_form(double rho) const {
    if (!has_closed_form_)
        throw Error("no closed-form transform for " + weight_.describe());
    if (!convergence_.contains(rho))
        throw DivergentIntegral("transform integral diverges at rho = " + std::to_string(rho));
    return cached(0, rho, &MellinProfile::compute_closed_form);
}

double MellinProfile::log_value_quadrature(double rho) const {
    if (!convergence_.contains(rho))
        throw DivergentIntegral("transform integral diverges at rho = " + std::to_string(rho));
    return cached(1, rho, &MellinProfile::compute_quadrature);
}

// Radial-moment form of the transform: 2 * integral of F(r^2) r^(2 rho - 1).
// A deliberately different evaluation route (no exponential substitution) so
// that measure-side checks do not reuse the values they are checking.
double MellinProfile::compute_radial(double rho) const {
    const Interval& iv = weight_.interval();
    const double r_lo = std::sqrt(iv.alpha);
    const double power = 2.0 * rho - 1.0;

    auto log_g = [&](double r) {
        return weight_.log_evaluate_at_exp(2.0 * std::log(r)) + power * std::log(r);
    };

    double r_hi;
    if (!iv.upper_is_infinite()) {
        r_hi = std::sqrt(iv.beta);
    } else {
        // march outward until the integrand drops far below its running peak
        double peak = -kInf, r = std::max(r_lo, 1e-3), best_r = r;
        for (int i = 0; i < 4096; ++i) {
            const double v = log_g(r);
            if (v > peak) {
                peak = v;
                best_r = r;
            }
            if (v < peak - 80.0 && r > best_r)
                break;
            r *= 1.05;
        }
        r_hi = r;
    }

    double s0 = -kInf;
    for (int i = 1; i < 512; ++i) {
        const double r = r_lo + (r_hi - r_lo) * i / 512.0;
        if (r > r_lo && r < r_hi)
            s0 = std::max(s0, log_g(r));
    }
    if (!std::isfinite(s0))
        s0 = 0.0;

    const double guard_hi = iv.upper_is_infinite() ? kInf : std::sqrt(iv.beta);
    auto f = [&](double r) {
        if (r <= r_lo || r >= guard_hi)
            return 0.0;
        return std::exp(log_g(r) - s0);
    };
    QuadratureResult res = integrate_adaptive(f, r_lo, r_hi, opts_.quadrature);
    if (!(res.value > 0.0))
        throw NumericalFailure("radial moment quadrature returned no mass at rho = " +
                                   std::to_string(rho),
                               -kInf, kInf);
    return M_LN2 + s0 + std::log(res.value);
}

double MellinProfile::log_value_radial(double rho) const {
    if (!convergence_.contains(rho))
        throw DivergentIntegral("transform integral diverges at rho = " + std::to_string(rho));
    return cached(2, rho, &MellinProfile::compute_radial);
}

// ---------------------------------------------------------------------------
// Ratio limits

double MellinProfile::extrapolate_ratio_limit(int direction, double* residual_out) const {
    const double base = opts_.ratio_limit_base;
    std::vector<double> rho(5), r(5);
    for (int j = 0; j < 5; ++j) {
        rho[j] = direction * base * std::pow(2.0, j);
        r[j] = ratio(rho[j]);
    }

    // Strict monotonicity up to noise; oscillation means the samples cannot
    // be extrapolated.
    int up = 0, down = 0;
    for (int j = 0; j + 1 < 5; ++j) {
        const double d = r[j + 1] - r[j];
        const double noise = 1e-9 * std::max(std::abs(r[j]), std::abs(r[j + 1]));
        if (d > noise) ++up;
        else if (d < -noise) ++down;
    }
    if (up > 0 && down > 0) {
        std::ostringstream os;
        os << "ratio samples oscillate; no limit extracted:";
        for (int j = 0; j < 5; ++j)
            os << " r(" << rho[j] << ")=" << r[j];
        throw NumericalFailure(os.str(), r[4], std::abs(r[4] - r[0]));
    }

    // Diverging toward +inf: values grow and the increments do not shrink.
    if (up == 4 && r[4] > 2.0 * r[0] && (r[4] - r[3]) > 0.5 * (r[3] - r[2])) {
        if (residual_out) *residual_out = 0.0;
        return kInf;
    }

    // Fit a cubic in 1/|rho| and in 1/sqrt(|rho|); keep the model that
    // explains the samples better. Power-law edge corrections favour the
    // first, essential-edge corrections the second.
    std::vector<double> u(5), h(5);
    for (int j = 0; j < 5; ++j) {
        u[j] = 1.0 / std::abs(rho[j]);
        h[j] = 1.0 / std::sqrt(std::abs(rho[j]));
    }
    auto fit_u = fit_cubic(u, r);
    auto fit_h = fit_cubic(h, r);
    if (!fit_u && !fit_h)
        throw NumericalFailure("ratio-limit extrapolation failed (singular fit)", r[4], kInf);
    double limit, residual;
    if (!fit_h || (fit_u && fit_u->residual <= fit_h->residual)) {
        limit = fit_u->coeff[0];
        residual = fit_u->residual;
    } else {
        limit = fit_h->coeff[0];
        residual = fit_h->residual;
    }
    limit = std::max(limit, 0.0);
    if (residual_out) *residual_out = residual;
    return limit;
}

const RatioLimits& MellinProfile::ratio_limits() const {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        if (ratio_limits_)
            return *ratio_limits_;
    }

    const auto shape = convergence_.shape;
    if (shape == ConvergenceDomain::Shape::below_nu || shape == ConvergenceDomain::Shape::nowhere)
        throw DomainError("ratio limits need the transform on an upper-unbounded interval");

    const Interval& iv = weight_.interval();
    RatioLimits lim;
    bool plus_closed = false, minus_closed = false;
    double residual = 0.0;

    // Limit toward +inf, controlled by the upper edge.
    if (!iv.upper_is_infinite()) {
        if (weight_.family() == Family::essential_edge) {
            lim.at_plus_infinity = extrapolate_ratio_limit(+1, &residual);
        } else {
            lim.at_plus_infinity = iv.beta; // nonzero value or finite-order zero at beta
            plus_closed = true;
        }
    } else {
        lim.at_plus_infinity = kInf; // superpolynomial decay at infinity
        plus_closed = true;
    }

    // Limit toward -inf, controlled by the lower edge; only meaningful when
    // the transform extends to -inf.
    if (shape == ConvergenceDomain::Shape::above_nu) {
        lim.at_minus_infinity = 0.0; // spectrum bounded below; inner radius is 0
        minus_closed = true;
    } else if (iv.lower_is_zero()) {
        lim.at_minus_infinity = 0.0; // log_gaussian-type superdecay at 0
        minus_closed = true;
    } else {
        lim.at_minus_infinity = iv.alpha;
        minus_closed = true;
    }

    lim.confidence = (plus_closed && minus_closed) ? RatioLimits::Confidence::closed_form
                                                   : RatioLimits::Confidence::extrapolated;
    lim.residual = residual;

    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!ratio_limits_)
        ratio_limits_ = lim;
    return *ratio_limits_;
}

// ---------------------------------------------------------------------------

double MellinProfile::estimate_abscissa_numeric(double lo, double hi, double tol) const {
    auto diverges = [&](double rho) { return quadrature_probe(rho).divergent; };
    bool lo_div = diverges(lo);
    bool hi_div = diverges(hi);
    if (lo_div && hi_div)
        return kInf;
    if (!lo_div && !hi_div)
        return -kInf;
    // One end diverges: bisect to the boundary (works for either orientation).
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (diverges(mid) == lo_div)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace dhoa
