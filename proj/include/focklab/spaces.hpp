#pragma once

#include <span>
#include <vector>

#include "focklab/quadrature.hpp"
#include "focklab/spectral_vector.hpp"

namespace focklab {

/// Smoothness index s >= 0 for the public norms.
class SmoothnessOrder {
public:
    explicit SmoothnessOrder(double s);
    double value() const { return s_; }
    operator double() const { return s_; }

private:
    double s_;
};

/// Eigenvalue 2|alpha| + n of the Hermite operator -Delta + |x|^2.
inline double hermite_eigenvalue(const MultiIndex& alpha) { return 2.0 * alpha.order() + alpha.dim(); }

/// [sum (2|alpha|+n)^s |c_alpha|^2]^{1/2}. Serves W_H^{s,2} and F^{s,2}
/// alike since the Bargmann transform keeps coefficients.
double sobolev_norm(const SpectralVector& v, SmoothnessOrder s);

/// c_alpha -> (2|alpha|+n)^s c_alpha; any real s.
SpectralVector fractional_H(const SpectralVector& v, double s);

/// Quadrature value of [omega int (1+|z|)^{2s} |f(z)|^2 e^{-|z|^2} dz]^{1/2}
/// for a Fock vector. grid2n is a 2n-dimensional scale-1 rule whose point
/// layout is (Re z_1..Re z_n, Im z_1..Im z_n). omega is computed on the same
/// grid so that f = 1 has norm 1.
double weighted_fock_norm(const SpectralVector& v, SmoothnessOrder s, const QuadratureGrid& grid2n);

/// c_alpha -> e^{-t^2 (2|alpha|+n)} c_alpha.
SpectralVector heat_semigroup(const SpectralVector& v, double t);

/// Truncated kernel sum_{|alpha|<=N} e^{-t^2(2|alpha|+n)} h_alpha(x) h_alpha(y).
double heat_kernel_truncated(int truncation, double t, std::span<const double> x, std::span<const double> y,
                             Basis basis);

/// Mehler closed form of the e^{-t^2 H} kernel for the paper-normalized
/// system: (2 pi sinh 2tau)^{-n/2} exp(-(coth(2tau)(|x|^2+|y|^2)/2 - x.y/sinh 2tau)),
/// tau = t^2. The Bargmann system's kernel is 2^{n/2} times this at (sqrt2 x, sqrt2 y).
double heat_kernel_mehler(double t, std::span<const double> x, std::span<const double> y, Basis basis);

struct TIntegral {
    double value = 0.0;  ///< the integral itself (c_{s,K}^2 = kappa^2)
    double error = 0.0;  ///< adaptive error estimate
};

/// int_0^inf (1 - e^{-u^2})^{2K} u^{-1-2s} du by log-substituted adaptive
/// Gauss-Kronrod split at u = 1, with analytic tails. Throws DivergenceError
/// unless 0 < s < 2K.
TIntegral square_function_integral(double s, int K);

/// c_{s,K}: sqrt of the integral above.
double square_function_constant(double s, int K);

/// ||G_{s,K,H} f||_2 = c_{s,K} [sum lambda_alpha^s |c_alpha|^2]^{1/2}.
double square_function_norm(const SpectralVector& v, double s, int K);

/// kappa = {int_0^inf |t^{-s}(1-e^{-t^2})^K|^2 dt/t}^{1/2}.
double kappa_constant(double s, int K);

/// ||G_{s,K}(H^{-s/2} f)||_2 / (kappa ||f||_2); equals 1 up to roundoff.
double kappa_inequality_ratio(const SpectralVector& v, double s, int K);

/// Smooth partition bump. eta = 1 on |x|_inf <= 1, 0 outside |x|_inf <= 2,
/// built as the indicator of [-3/2, 3/2] convolved with a mollifier of
/// radius 1/2 (per axis). The integer translates eta_m(x) = eta(x + m)
/// then sum to c_0 = 3^n everywhere.
class PartitionBump {
public:
    explicit PartitionBump(int dim);

    int dim() const { return dim_; }
    double plateau_halfwidth() const { return 1.0; }
    double support_halfwidth() const { return 2.0; }
    double mollifier_radius() const { return 0.5; }
    double c0() const;

    /// One-dimensional profile.
    static double profile(double x);
    double operator()(std::span<const double> x) const;
    /// eta_m(x) = eta(x + m).
    double translate(std::span<const int> m, std::span<const double> x) const;

    /// min and max over x of sum_m eta_m(x)^2, from a fine 1D scan raised
    /// to the n-th power (the sum factorizes).
    std::pair<double, double> square_sum_range() const;

private:
    int dim_;
};

struct LocalizationResult {
    double norm = 0.0;
    /// share of norm^2 carried by cells with |m|_inf = M
    double boundary_fraction = 0.0;
    int lattice_cutoff = 0;
    int projection_truncation = 0;
    bool boundary_warning = false;
};

/// [sum_{|m|_inf <= M} ||project(f eta_m)||_{W^{s,2}}^2]^{1/2} with f the
/// synthesis of v. Products are projected at truncation `projection_N`
/// (default 4N + 64) by exact-support Gauss-Legendre quadrature. The
/// products are only Gevrey-smooth, so their Hermite tails decay slowly:
/// at N = 16 the s = 0 value is within ~1e-7 relative, s = 1 within ~1e-4. M <= 0
/// picks a cutoff past the turning point of the highest basis function.
LocalizationResult localization_norm(const SpectralVector& v, SmoothnessOrder s, const PartitionBump& bump,
                                     int lattice_cutoff = 0, int projection_N = 0);

/// Default lattice cutoff for a truncation and convention.
int default_lattice_cutoff(int truncation, Basis basis);

/// || |x|^{2s} synthesize(H^{-s} v) ||_2 / ||v||_2 by Gauss-Hermite
/// quadrature, exact when 2s is an integer. Otherwise 1D uses Legendre
/// panels graded toward the origin and nD a padded Gauss-Hermite rule
/// (approximate at the origin singularity).
double potential_bound_probe(const SpectralVector& v, SmoothnessOrder s);

/// sum over ladder words of length 1..k of ||H_{j_1}...H_{j_m} v||_2 plus
/// ||v||_2, letters j in {+-1..+-n}. v is padded to N + k first so raising
/// never truncates. Paper-Hermite normalization.
double ladder_norm(const SpectralVector& v, int k);

}  // namespace focklab
