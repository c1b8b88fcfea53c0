#ifndef DHOA_CORE_ALGEBRA_HPP
#define DHOA_CORE_ALGEBRA_HPP

#include <optional>
#include <utility>
#include <vector>

#include "core/diagnostics.hpp"
#include "core/mellin.hpp"

namespace dhoa {

// Which ladder operator owns the coherent states (equivalently, which one the
// Bargmann realization represents as multiplication by z: the other one).
enum class Mode { annihilation, creation };

Mode flipped(Mode m);

struct SpectrumDescriptor {
    enum class Shape { all_integers, lower_bounded, upper_bounded } shape = Shape::all_integers;
    long edge = 0; // lower edge index (<= 0) or upper edge index (>= 0)
};

// Ring of squared moduli on which the coherent states exist.
struct CoherentDomain {
    double inner_sq = 0.0;
    double outer_sq = std::numeric_limits<double>::infinity();

    bool contains_sq(double zz) const { return zz > inner_sq && zz < outer_sq; }
};

// The deformed oscillator reconstructed from a weight profile: characteristic
// function, spectrum of the number operator, coherent-state ring. Immutable.
class DeformedAlgebra {
public:
    const MellinProfilePtr& profile() const { return profile_; }
    Mode mode() const { return mode_; }
    double mu() const { return mu_; }
    const SpectrumDescriptor& spectrum() const { return spectrum_; }
    const CoherentDomain& domain() const { return domain_; }

    // Characteristic function at a number-operator eigenvalue. Returns 0 at
    // the spectral edge; throws DomainError past it.
    double psi(double rho) const;
    double log_psi(double rho) const; // -inf at the edge

    // Generalized factorial normalizing |n>; n is the basis index.
    double psi_factorial(long n) const;
    double log_psi_factorial(long n) const;

    // Partner algebra with the roles of the two ladder operators exchanged.
    DeformedAlgebra dual() const;

    bool index_in_spectrum(long n) const;

    // Eigenvalue-space interval where psi is finite and positive.
    std::pair<double, double> psi_support() const;

private:
    friend struct BuildAccess;
    DeformedAlgebra(MellinProfilePtr p, Mode mode, double mu, SpectrumDescriptor s, CoherentDomain d)
        : profile_(std::move(p)), mode_(mode), mu_(mu), spectrum_(s), domain_(d) {}

    MellinProfilePtr profile_;
    Mode mode_;
    double mu_;
    SpectrumDescriptor spectrum_;
    CoherentDomain domain_;
};

struct BuildOutcome {
    std::optional<DeformedAlgebra> algebra;
    DiagnosticsReport report;
};

// Runs the necessary existence conditions (transform on an upper-unbounded
// interval; finite abscissa a nonpositive integer; ordered ratio limits) and
// assembles the algebra, or a rejection report naming the failed condition.
BuildOutcome build_algebra(MellinProfilePtr profile, Mode mode, double mu = 0.0);

// Convenience for callers that treat rejection as exceptional.
DeformedAlgebra require_algebra(MellinProfilePtr profile, Mode mode, double mu = 0.0);

// Classification core shared by build_algebra; exposed so the degenerate
// branches (equal ratio limits, non-integer abscissa) are directly testable.
struct Classification {
    std::optional<SpectrumDescriptor> spectrum;
    std::optional<CoherentDomain> domain;
    DiagnosticsReport report;
};
Classification classify_construction(const ConvergenceDomain& conv, const RatioLimits& limits,
                                     Mode mode);

// Geometric sampling grid in eigenvalue space, clipped to psi's support:
// points accumulate toward the spectral edge and toward the infinities.
std::vector<double> make_psi_grid(const DeformedAlgebra& alg, int points = 201,
                                  double span = 40.0, double edge_offset = 1e-3);

struct CheckOptions {
    int grid_points = 201;
    double grid_span = 40.0;
    double band_slack = 1e-9;
    double limit_consistency_tol = 1e-2;
};

// Applicability of the sufficient edge-condition criteria for the interval at
// hand, plus the direct verification battery (band condition, strict interior
// values, ratio-limit consistency) and advisory sanity checks on the
// transform (monotone bound, log-convexity, nondecreasing ratio).
DiagnosticsReport check_sufficient(const DeformedAlgebra& alg, const CheckOptions& opts = {});

} // namespace dhoa

#endif
