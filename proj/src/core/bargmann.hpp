#ifndef DHOA_CORE_BARGMANN_HPP
#define DHOA_CORE_BARGMANN_HPP

#include <complex>
#include <span>
#include <vector>

#include "core/algebra.hpp"

namespace dhoa {

using Complex = std::complex<double>;

struct RealMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    RealMatrix() = default;
    RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// |n> basis truncated to [n_min, n_max] with the monomial coefficient table
// kept in log scale (the factorials overflow well before the basis ends).
class TruncatedBasis {
public:
    TruncatedBasis(const DeformedAlgebra& alg, long n_max, long n_min);

    long n_min() const { return n_min_; }
    long n_max() const { return n_max_; }
    std::size_t size() const { return static_cast<std::size_t>(n_max_ - n_min_ + 1); }
    std::size_t offset(long n) const { return static_cast<std::size_t>(n - n_min_); }

    double log_norm(long n) const { return log_norm_.at(offset(n)); }
    double norm(long n) const { return std::exp(log_norm(n)); }

private:
    long n_min_, n_max_;
    std::vector<double> log_norm_;
};

// Default truncation: [edge, extent], [-extent, edge] or [-extent, extent]
// depending on the spectrum shape.
TruncatedBasis make_basis(const DeformedAlgebra& alg, long extent = 64);

struct OperatorMatrices {
    RealMatrix a;        // superdiagonal sqrt(psi)
    RealMatrix a_dagger; // subdiagonal sqrt(psi)
    RealMatrix number;   // diagonal n + mu
};

OperatorMatrices operator_matrices(const DeformedAlgebra& alg, const TruncatedBasis& basis);

// The non-multiplication ladder operator obtained by acting on the monomial
// table with psi of the degree operator; must coincide entrywise with the
// direct matrix. Annihilation mode only (creation delegates through the dual).
RealMatrix ladder_via_monomials(const DeformedAlgebra& alg, const TruncatedBasis& basis);

struct CoherentVector {
    Complex z;
    long n_min = 0, n_max = 0;
    std::vector<Complex> coeff; // scaled: actual c_n = coeff[n-n_min] * exp(log_scale)
    double log_scale = 0.0;
    double norm_sq = 0.0;       // absolute; +inf if out of double range
    double tail_bound_rel = 0.0; // truncation tail of norm_sq, relative
};

// Eigenvector of the mode's ladder operator, truncated to the basis. Throws
// DomainError when |z|^2 leaves the coherent ring (z = 0 is admitted for a
// spectrum bounded at index 0, where the state is |0>).
CoherentVector coherent_vector(const DeformedAlgebra& alg, Complex z, const TruncatedBasis& basis);

struct KernelOptions {
    long max_terms = 4096;
    double rel_tol = 1e-12;
};

// Reproducing kernel as a series in the transform values; the value at z
// zeta-bar is the coherent overlap <zeta|z>.
Complex kernel(const DeformedAlgebra& alg, Complex x, const KernelOptions& opts = {});

// Overlap of two truncated coherent vectors.
Complex coherent_overlap(const CoherentVector& bra, const CoherentVector& ket);

// Scalar product of coefficient vectors over the basis, radial-moment path:
// the angular integral collapses onto the diagonal and leaves transform
// moments. This is the default evaluation path.
Complex scalar_product_moments(const DeformedAlgebra& alg, const TruncatedBasis& basis,
                               std::span<const Complex> f, std::span<const Complex> g);

// Verification oracle: the same scalar product through an explicit polar-grid
// quadrature over the ring (trapezoid in the angle, adaptive in the radius).
Complex scalar_product_quadrature(const DeformedAlgebra& alg, const TruncatedBasis& basis,
                                  std::span<const Complex> f, std::span<const Complex> g);

// Gram matrix of the normalized basis monomials under the quadrature path,
// row-major over [lo, hi] x [lo, hi].
std::vector<Complex> gram_quadrature(const DeformedAlgebra& alg, const TruncatedBasis& basis,
                                     long lo, long hi);

// Residual of the coherent eigen-equation on a truncated vector, including
// the boundary components the truncation cannot satisfy. No domain check, so
// callers can probe z outside the ring.
double eigen_residual(const DeformedAlgebra& alg, Complex z, long extent);

struct VerifyOptions {
    double monomial_tol = 1e-12;
    double adjoint_tol = 1e-8;
    double relation_tol = 1e-10; // relative to the local psi scale
    double gram_tol_finite = 1e-6;
    double gram_tol_infinite = 1e-5;
    double eigen_inside_tol = 1e-6;
    double eigen_outside_floor = 1e-3;
    double kernel_tol = 1e-8;
    int kernel_pairs = 20;
    unsigned seed = 12345;
};

// Full representation verification: adjointness through the measure, algebra
// relations on the truncation interior, resolution of identity on a Gram
// block, coherent eigen-residuals inside/outside the ring, kernel-overlap
// identity. Creation-mode algebras are verified through their dual.
DiagnosticsReport verify_representation(const DeformedAlgebra& alg, const TruncatedBasis& basis,
                                        const VerifyOptions& opts = {});

} // namespace dhoa

#endif
