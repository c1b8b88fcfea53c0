#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "core/algebra.hpp"

using namespace dhoa;

namespace {

MellinProfilePtr profile(WeightFunction w) {
    return std::make_shared<MellinProfile>(std::move(w));
}

MellinProfilePtr quad_profile(WeightFunction w) {
    MellinOptions o;
    o.method = MellinMethod::quadrature;
    return std::make_shared<MellinProfile>(std::move(w), o);
}

const CheckEntry* find_check(const DiagnosticsReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

} // namespace

TEST_CASE("plain exponential weight reproduces the undeformed oscillator") {
    auto alg = require_algebra(profile(WeightFunction::stretched_exp(1, 1)), Mode::annihilation);
    CHECK(alg.spectrum().shape == SpectrumDescriptor::Shape::lower_bounded);
    CHECK(alg.spectrum().edge == 0);
    CHECK(alg.domain().inner_sq == 0.0);
    CHECK(std::isinf(alg.domain().outer_sq));

    for (double rho : {0.1, 0.5, 1.0, 3.0, 11.5, 40.0})
        CHECK(alg.psi(rho) == doctest::Approx(rho).epsilon(1e-10));

    CHECK(alg.psi_factorial(0) == doctest::Approx(1.0));
    CHECK(alg.psi_factorial(5) == doctest::Approx(120.0).epsilon(1e-12));
    double fact = 1.0;
    for (long n = 1; n <= 20; ++n) {
        fact *= n;
        CHECK(alg.psi_factorial(n) == doctest::Approx(fact).epsilon(1e-10));
    }
    CHECK_THROWS_AS(alg.psi_factorial(-1), DomainError);
}

TEST_CASE("non-integer abscissa is rejected with the integer condition named") {
    BuildOutcome out = build_algebra(profile(WeightFunction::power(1.5, Interval(0.0, 1.0))),
                                     Mode::annihilation);
    CHECK_FALSE(out.algebra.has_value());
    CHECK_FALSE(out.report.constructible);
    CHECK(out.report.rejection_reason.find("nonpositive integer") != std::string::npos);
    const CheckEntry* c = find_check(out.report, "abscissa-nonpositive-integer");
    REQUIRE(c != nullptr);
    CHECK(c->status == CheckEntry::Status::fail);
}

TEST_CASE("weights unbounded above are rejected") {
    const double inf = std::numeric_limits<double>::infinity();
    BuildOutcome ring = build_algebra(profile(WeightFunction::power(0.0, Interval(1.0, inf))),
                                      Mode::annihilation);
    CHECK_FALSE(ring.algebra.has_value());
    CHECK(ring.report.rejection_reason.find("singular at finite distance") != std::string::npos);

    BuildOutcome nowhere = build_algebra(profile(WeightFunction::power(0.0, Interval(0.0, inf))),
                                         Mode::annihilation);
    CHECK_FALSE(nowhere.algebra.has_value());
}

TEST_CASE("equal ratio limits reject with an empty coherent domain") {
    ConvergenceDomain conv;
    conv.shape = ConvergenceDomain::Shape::all_rho;
    RatioLimits lim;
    lim.at_minus_infinity = 2.0;
    lim.at_plus_infinity = 2.0;
    Classification cls = classify_construction(conv, lim, Mode::annihilation);
    CHECK_FALSE(cls.spectrum.has_value());
    CHECK(cls.report.rejection_reason.find("empty coherent domain") != std::string::npos);
    CHECK(cls.report.rejection_reason.find("coincide") != std::string::npos);
}

TEST_CASE("annulus power weight: spectrum Z, domain (1,4)") {
    auto alg = require_algebra(profile(WeightFunction::power(0.0, Interval(1.0, 4.0))),
                               Mode::annihilation);
    CHECK(alg.spectrum().shape == SpectrumDescriptor::Shape::all_integers);
    CHECK(alg.domain().inner_sq == doctest::Approx(1.0));
    CHECK(alg.domain().outer_sq == doctest::Approx(4.0));

    // closed-form characteristic function on the ring
    auto x1 = [](double rho, double sigma, double a, double b) {
        const double s = sigma + rho;
        return (s / (s + 1.0)) * (std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) /
               (std::pow(b, s) - std::pow(a, s));
    };
    for (double rho : {-12.5, -3.0, -0.5, 0.7, 4.0, 17.0})
        CHECK(alg.psi(rho) == doctest::Approx(x1(rho, 0.0, 1.0, 4.0)).epsilon(1e-10));

    // two-sided factorials against the transform moments
    const MellinProfile& p = *alg.profile();
    for (long n = -12; n <= 20; ++n) {
        const double lhs = std::exp(p.log_value(n + 1.0) - p.log_normalization());
        const double rhs = n >= 0 ? alg.psi_factorial(n) : 1.0 / alg.psi_factorial(n);
        CAPTURE(n);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("pinned characteristic values") {
    // beta-family: psi(rho) = rho/(rho+2) at sigma=0, eta=1, beta=1
    auto pb = require_algebra(profile(WeightFunction::power_beta(0.0, 1.0, 1.0)),
                              Mode::annihilation);
    for (double rho : {0.5, 1.0, 2.0, 7.0})
        CHECK(pb.psi(rho) == doctest::Approx(rho / (rho + 2.0)).epsilon(1e-12));

    // disk power: psi(1) = 1/2 at sigma=0, beta=1
    auto dk = require_algebra(profile(WeightFunction::power(0.0, Interval(0.0, 1.0))),
                              Mode::annihilation);
    CHECK(dk.psi(1.0) == doctest::Approx(0.5).epsilon(1e-12));

    // psi(3)! = (1/2)(2/3)(3/4) = 1/4
    CHECK(dk.psi_factorial(3) == doctest::Approx(0.25).epsilon(1e-12));

    // log-gaussian closed form: psi(rho) = exp((2 rho + 1)/4)
    auto lg = require_algebra(profile(WeightFunction::log_gaussian(1.0, 1)), Mode::annihilation);
    for (double rho : {-3.0, 0.0, 2.0, 9.0})
        CHECK(lg.psi(rho) == doctest::Approx(std::exp((2.0 * rho + 1.0) / 4.0)).epsilon(1e-12));
    CHECK(lg.psi(2.0) == doctest::Approx(std::exp(1.25)).epsilon(1e-12));
}

TEST_CASE("interpolation identity across evaluation paths") {
    // closed-form psi against quadrature transform values
    auto closed = require_algebra(profile(WeightFunction::stretched_exp(2, 1)),
                                  Mode::annihilation);
    auto qp = quad_profile(WeightFunction::stretched_exp(2, 1));
    for (double rho : {0.3, 1.0, 2.5, 6.0, 11.0}) {
        const double lhs = std::exp(qp->log_value(rho + 1.0) - qp->log_value(rho));
        CHECK(lhs == doctest::Approx(closed.psi(rho)).epsilon(1e-8));
    }

    // reflected-mode analog: psi_c(rho+1) * F(-rho) = F(-rho+1)
    auto cre = require_algebra(profile(WeightFunction::power(0.0, Interval(1.0, 4.0))),
                               Mode::creation);
    auto qr = quad_profile(WeightFunction::power(0.0, Interval(1.0, 4.0)));
    for (double rho : {-6.0, -1.5, 0.0, 2.0, 7.5}) {
        const double lhs = std::exp(qr->log_value(-rho + 1.0) - qr->log_value(-rho));
        CHECK(lhs == doctest::Approx(cre.psi(rho + 1.0)).epsilon(1e-8));
    }
}

TEST_CASE("spectral edge: psi vanishes from the right") {
    auto dk = require_algebra(profile(WeightFunction::power(0.0, Interval(0.0, 1.0))),
                              Mode::annihilation);
    CHECK(dk.psi(0.0) == 0.0);
    CHECK(dk.psi(1e-7) < 1e-6);
    CHECK_THROWS_AS(dk.psi(-0.5), DomainError);

    auto st = require_algebra(profile(WeightFunction::stretched_exp(1, 2)), Mode::annihilation);
    CHECK(st.psi(1e-7) < 1e-6);

    auto ee = require_algebra(profile(WeightFunction::essential_edge(1.0)), Mode::annihilation);
    CHECK(ee.psi(0.0) == 0.0);
    CHECK(ee.psi(1e-7) < 1e-6);
}

TEST_CASE("log-gaussian reflection symmetry of psi") {
    auto lg = require_algebra(profile(WeightFunction::log_gaussian(1.0, 1)), Mode::annihilation);
    for (double rho : {0.5, 1.0, 3.0, 7.0})
        CHECK(lg.psi(-rho) * lg.psi(rho - 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    auto lg2 = require_algebra(quad_profile(WeightFunction::log_gaussian(1.0, 2)),
                               Mode::annihilation);
    for (double rho : {0.5, 1.0, 3.0, 7.0})
        CHECK(lg2.psi(-rho) * lg2.psi(rho - 1.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("duality: reflection, involution, fixed point") {
    std::vector<MellinProfilePtr> ps = {
        profile(WeightFunction::stretched_exp(1, 1)),
        profile(WeightFunction::power(0.0, Interval(1.0, 4.0))),
        profile(WeightFunction::log_gaussian(1.0, 1)),
    };
    for (auto& p : ps) {
        auto alg = require_algebra(p, Mode::annihilation);
        auto dual = alg.dual();
        CHECK(dual.mode() == Mode::creation);

        const auto [lo, hi] = alg.psi_support();
        for (double rho : {-7.3, -2.0, 0.25, 0.5, 3.0, 9.0}) {
            // psi_dual(rho) = psi(1 - rho) wherever both sides live
            const double reflected = 1.0 - rho;
            if (reflected <= lo || reflected >= hi)
                continue;
            const auto [dlo, dhi] = dual.psi_support();
            if (rho <= dlo || rho >= dhi)
                continue;
            CHECK(dual.psi(rho) == doctest::Approx(alg.psi(reflected)).epsilon(1e-12));
        }

        auto back = dual.dual();
        CHECK(back.mode() == Mode::annihilation);
        for (double rho : {0.4, 1.7, 6.0}) {
            const auto [blo, bhi] = back.psi_support();
            if (rho <= blo || rho >= bhi)
                continue;
            CHECK(back.psi(rho) == doctest::Approx(alg.psi(rho)).epsilon(1e-12));
        }

        // rho = 1/2 is the fixed point of the reflection
        const auto [dlo, dhi] = dual.psi_support();
        if (0.5 > lo && 0.5 < hi && 0.5 > dlo && 0.5 < dhi)
            CHECK(dual.psi(0.5) == doctest::Approx(alg.psi(0.5)).epsilon(1e-12));
    }
}

TEST_CASE("dual of the annulus algebra lives on the same ring") {
    auto alg = require_algebra(profile(WeightFunction::power(0.0, Interval(1.0, 4.0))),
                               Mode::annihilation);
    auto dual = alg.dual();
    CHECK(dual.spectrum().shape == SpectrumDescriptor::Shape::all_integers);
    CHECK(dual.domain().inner_sq == doctest::Approx(1.0));
    CHECK(dual.domain().outer_sq == doctest::Approx(4.0));
}

TEST_CASE("dual of the undeformed oscillator") {
    auto alg = require_algebra(profile(WeightFunction::stretched_exp(1, 1)), Mode::annihilation);
    auto dual = alg.dual();
    CHECK(dual.spectrum().shape == SpectrumDescriptor::Shape::upper_bounded);
    CHECK(dual.spectrum().edge == 0);
    // psi_dual(rho) = 1 - rho on its support (rho < 1)
    for (double rho : {-5.0, -1.0, 0.0, 0.9})
        CHECK(dual.psi(rho) == doctest::Approx(1.0 - rho).epsilon(1e-10));
    CHECK(dual.psi(1.0) == 0.0);
    CHECK_THROWS_AS(dual.psi(1.5), DomainError);
    // same disk: |z|^2 < inf
    CHECK(dual.domain().inner_sq == 0.0);
    CHECK(std::isinf(dual.domain().outer_sq));
    CHECK(dual.psi_factorial(-3) == doctest::Approx(1.0 * 2.0 * 3.0).epsilon(1e-10));
}

TEST_CASE("creation-mode build on the disk") {
    auto cr = require_algebra(profile(WeightFunction::power(0.0, Interval(0.0, 1.0))),
                              Mode::creation);
    CHECK(cr.spectrum().shape == SpectrumDescriptor::Shape::upper_bounded);
    CHECK(cr.spectrum().edge == 0);
    CHECK(cr.domain().outer_sq == doctest::Approx(1.0));
    // psi_c(rho) = psi(1-rho) = (1-rho)/(2-rho)
    CHECK(cr.psi(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cr.psi(1.0) == 0.0);
    CHECK_THROWS_AS(cr.psi(1.5), DomainError);
}

TEST_CASE("mu shifts the argument of the characteristic function") {
    auto alg = require_algebra(profile(WeightFunction::stretched_exp(1, 1)),
                               Mode::annihilation, -2.0);
    // psi(s) = s - mu for the undeformed oscillator
    for (double s : {-1.5, -1.0, 0.0, 4.0})
        CHECK(alg.psi(s) == doctest::Approx(s + 2.0).epsilon(1e-10));
    // edge eigenvalue sits at mu + nu = -2
    CHECK(alg.psi(-2.0) == 0.0);
    CHECK(alg.psi_factorial(3) == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("band condition and direct verification per interval shape") {
    auto ring = require_algebra(profile(WeightFunction::power(0.0, Interval(1.0, 4.0))),
                                Mode::annihilation);
    DiagnosticsReport rep = check_sufficient(ring);
    const CheckEntry* suff = find_check(rep, "ring-edge-sufficient");
    REQUIRE(suff != nullptr);
    CHECK(suff->status == CheckEntry::Status::pass);
    CHECK(rep.all_required_pass());

    auto ee = require_algebra(profile(WeightFunction::essential_edge(1.0)), Mode::annihilation);
    DiagnosticsReport rep_ee = check_sufficient(ee);
    const CheckEntry* disk = find_check(rep_ee, "disk-bounded-sufficient");
    REQUIRE(disk != nullptr);
    CHECK(disk->status == CheckEntry::Status::not_applicable);
    CHECK(rep_ee.all_required_pass());

    auto lg = require_algebra(profile(WeightFunction::log_gaussian(1.0, 1)), Mode::annihilation);
    DiagnosticsReport rep_lg = check_sufficient(lg);
    for (const char* name : {"ring-edge-sufficient", "disk-full-axis-sufficient",
                             "disk-bounded-sufficient"}) {
        const CheckEntry* c = find_check(rep_lg, name);
        REQUIRE(c != nullptr);
        CHECK(c->status == CheckEntry::Status::not_applicable);
    }
    CHECK(rep_lg.all_required_pass());
}

TEST_CASE("band condition holds on the annulus grid") {
    auto ring = require_algebra(profile(WeightFunction::power(2.0, Interval(1.0, 4.0))),
                                Mode::annihilation);
    for (double rho : make_psi_grid(ring)) {
        const double v = ring.psi(rho);
        CHECK(v >= 1.0 - 1e-12);
        CHECK(v <= 4.0 + 1e-12);
    }
}

TEST_CASE("random weights satisfy the structural invariants") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> usigma(-2.0, 3.0), ua(0.2, 2.0), uw(0.5, 6.0);
    for (int trial = 0; trial < 12; ++trial) {
        const double sigma = usigma(rng);
        const double alpha = ua(rng);
        const double beta = alpha + uw(rng);
        CAPTURE(sigma);
        CAPTURE(alpha);
        CAPTURE(beta);
        auto alg = require_algebra(profile(WeightFunction::power(sigma, Interval(alpha, beta))),
                                   Mode::annihilation);

        // band condition and monotonicity on the sampling grid
        double prev = 0.0;
        for (double rho : make_psi_grid(alg, 61)) {
            const double v = alg.psi(rho);
            CHECK(v >= alpha - 1e-12 * alpha);
            CHECK(v <= beta + 1e-12 * beta);
            CHECK(v >= prev - 1e-9 * v);
            prev = v;
        }

        // moments of the transform against the factorial products
        const MellinProfile& p = *alg.profile();
        for (long n : {-7L, -2L, 1L, 6L, 13L}) {
            const double lhs = std::exp(p.log_value(n + 1.0) - p.log_normalization());
            const double rhs = n >= 0 ? alg.psi_factorial(n) : 1.0 / alg.psi_factorial(n);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }

        // duality is an involution with the reflection fixed point
        auto dual = alg.dual();
        CHECK(dual.psi(0.5) == doctest::Approx(alg.psi(0.5)).epsilon(1e-12));
        CHECK(dual.psi(-2.3) == doctest::Approx(alg.psi(3.3)).epsilon(1e-12));
        CHECK(dual.dual().psi(1.7) == doctest::Approx(alg.psi(1.7)).epsilon(1e-12));
    }
}
