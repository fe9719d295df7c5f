#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace focklab {

/// Tag for the basis a coefficient vector refers to.
///
///  - paper_hermite:    h_k(x) = (sqrt(pi) 2^k k!)^{-1/2} e^{-x^2/2} (-1)^k H_k(x),
///                      the eigenfunctions of -d^2/dx^2 + x^2.
///  - bargmann_hermite: hat h_k(x) = 2^{1/4} h_k(sqrt(2) x), Gaussian weight
///                      e^{-x^2}; the system mapped onto z^k / sqrt(k!) by the
///                      Bargmann kernel (2/pi)^{1/4} e^{2xz - x^2 - z^2/2}.
///  - fock:             e_alpha(z) = z^alpha / sqrt(alpha!).
///
/// Both Hermite systems are orthonormal in L^2 with identical labels, so a
/// change of convention never touches coefficients.
enum class Basis : unsigned char { paper_hermite = 0, bargmann_hermite = 1, fock = 2 };

std::string_view basis_name(Basis basis);
Basis parse_basis(std::string_view name);

inline bool is_hermite(Basis b) { return b != Basis::fock; }

/// Exponent of the squared-function Gaussian: products basis_a * basis_b
/// carry e^{-sigma x^2} with sigma = 1 (paper) or 2 (Bargmann).
double product_scale(Basis basis);

/// h_k or hat h_k at a complex point, by the normalized three-term
/// recurrence with running rescaling (no factorials are formed).
/// Throws RangeError when the result overflows a double, which for large
/// |Im x| happens through the factor e^{((Im x)^2 - (Re x)^2)/2}.
std::complex<double> eval_hermite(int k, std::complex<double> x, Basis basis);

/// All values k = 0..kmax at one complex point.
std::vector<std::complex<double>> eval_hermite_all(int kmax, std::complex<double> x, Basis basis);

/// Real-argument table: out[k * points.size() + q] = basis_k(points[q]),
/// k = 0..kmax. Uses the active SIMD kernel.
std::vector<double> hermite_table(int kmax, std::span<const double> points, Basis basis);

/// e_k(z) = z^k / sqrt(k!) for k = 0..kmax.
std::vector<std::complex<double>> fock_monomials(int kmax, std::complex<double> z);

}  // namespace focklab
