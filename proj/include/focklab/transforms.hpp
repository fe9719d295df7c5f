#pragma once

#include <complex>
#include <span>
#include <vector>

#include "focklab/operator_matrix.hpp"
#include "focklab/quadrature.hpp"
#include "focklab/spectral_vector.hpp"

namespace focklab {

/// Fourier transform F f(x) = pi^{-n/2} int e^{-2i x.y} f(y) dy on
/// coefficients: c_alpha -> (-i)^{|alpha|} c_alpha. The Bargmann-compatible
/// Hermite functions are its eigenfunctions, so v must carry that tag.
SpectralVector fourier(const SpectralVector& v);
SpectralVector inverse_fourier(const SpectralVector& v);

/// Quadrature form of F f at each point of `x` (point-major, grid.dim per
/// point) using the plain weights of `grid`.
std::vector<Complex> fourier_quadrature(const RealFunction& f, std::span<const double> x, const QuadratureGrid& grid);

/// Bargmann transform: Hermite coefficients become Fock coefficients.
SpectralVector bargmann(const SpectralVector& v);
SpectralVector inverse_bargmann(const SpectralVector& v);

/// Quadrature form (2/pi)^{n/4} e^{z.z/2} int f(x) e^{-(x-z).(x-z)} dx at
/// one complex point (bilinear squares, no conjugation).
Complex bargmann_quadrature(const RealFunction& f, std::span<const Complex> z, const QuadratureGrid& grid);

/// (-i)^{|alpha|} on the diagonal, Fock tag: the matrix of B F B^{-1}.
OperatorMatrix rotation_matrix(int dim, int truncation);

inline constexpr int kTranslationMargin = 16;

/// <tau_a basis_beta, basis_alpha> with tau_a f(x) = f(x - a), by a
/// Gauss-Hermite rule centered at a/2 with order N + margin (exact for the
/// polynomial-times-Gaussian integrands). Works in either Hermite
/// convention; warns when the interior unitarity defect exceeds 1e-4.
OperatorMatrix translation_matrix(std::span<const double> a, int truncation, Basis basis = Basis::bargmann_hermite,
                                  int margin = kTranslationMargin);

/// Matrix of W_a F(z) = F(z - a) e^{-|a|^2/2 + z.conj(a)} on e_alpha, from
/// the binomial expansion of the monomial action (long double).
OperatorMatrix weyl_matrix(std::span<const Complex> a, int truncation);

struct DefectReport {
    double defect = 0.0;
    int truncation = 0;
    int interior_order = 0;
};

/// || translation_matrix(a) - B^{-1} weyl_matrix(a) B || on the N/2 block.
DefectReport conjugation_check(std::span<const double> a, int truncation);

/// Signed ladder letter: +j is H_j = d/dx_j + x_j, -j is H_{-j}, j 1-based.
struct LadderLetter {
    int j;
};

/// || H_j(tau_a v) - tau_a(H_j v + a_{|j|} v) || on the N/2 block, in the
/// paper-Hermite normalization (where the ladder factors hold).
DefectReport translation_ladder_check(std::span<const double> a, LadderLetter j, const SpectralVector& v);

/// Two-letter form: H_{j1} H_{j2} tau_a v against
/// tau_a(H_{j1}H_{j2} + a_{j1} H_{j2} + a_{j2} H_{j1} + a_{j1} a_{j2}) v.
DefectReport translation_ladder_check2(std::span<const double> a, LadderLetter j1, LadderLetter j2,
                                       const SpectralVector& v);

/// L^2 defect of H_j(fg) = (H_j f) g + f (H_j g) - x_j f g with products
/// re-projected at truncation K (default 2N), paper-Hermite normalization.
DefectReport leibniz_check(const SpectralVector& f, const SpectralVector& g, LadderLetter j, int projection_K = 0);

/// || H_j H^p v - (H + 2)^p H_j v || (lowering) or with (H - 2)^p for
/// raising; the eigenvalue shift behind the ladder norm equivalence.
double ladder_shift_defect(const SpectralVector& v, LadderLetter j, double p);

/// ||W_a v||_{F^{s,2}} / ((1 + |a|^s) ||v||_{F^{s,2}}) with W_a applied at a
/// padded truncation so no mass is lost.
double weyl_bound_ratio(std::span<const Complex> a, const SpectralVector& v, double s);

}  // namespace focklab
