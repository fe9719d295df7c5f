#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "focklab/hermite.hpp"
#include "focklab/multi_index.hpp"
#include "focklab/quadrature.hpp"

namespace focklab {

using Complex = std::complex<double>;

/// Function of a real point in R^n.
using RealFunction = std::function<Complex(std::span<const double>)>;

/// Truncated coefficient vector {c_alpha : |alpha| <= N} in a tagged basis.
/// The L^2 (or F^2) norm is the Euclidean norm of the coefficients.
class SpectralVector {
public:
    SpectralVector(int dim, int truncation, Basis basis);
    SpectralVector(std::shared_ptr<const IndexSet> indices, std::vector<Complex> coeffs, Basis basis);

    static SpectralVector unit(const MultiIndex& alpha, int truncation, Basis basis);
    /// Independent complex normal coefficients on |alpha| <= band, zero above.
    static SpectralVector random(int dim, int truncation, int band, Basis basis, std::mt19937_64& rng);

    int dim() const { return indices_->dim(); }
    int truncation() const { return indices_->truncation(); }
    Basis basis() const { return basis_; }
    const IndexSet& indices() const { return *indices_; }
    const std::shared_ptr<const IndexSet>& index_set() const { return indices_; }
    std::size_t size() const { return coeffs_.size(); }

    std::span<const Complex> coeffs() const { return coeffs_; }
    std::span<Complex> coeffs() { return coeffs_; }
    Complex operator[](std::size_t i) const { return coeffs_[i]; }
    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    /// Coefficient at alpha, zero when |alpha| > N.
    Complex at(const MultiIndex& alpha) const;

    double norm() const;

    /// Same function at another truncation: zero-padded when larger,
    /// tail discarded when smaller.
    SpectralVector with_truncation(int truncation) const;
    SpectralVector with_basis(Basis basis) const;

    SpectralVector& operator+=(const SpectralVector& other);
    SpectralVector& operator-=(const SpectralVector& other);
    SpectralVector& operator*=(Complex factor);
    friend SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return a += b; }
    friend SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return a -= b; }
    friend SpectralVector operator*(Complex f, SpectralVector v) { return v *= f; }

private:
    void require_compatible(const SpectralVector& other) const;

    std::shared_ptr<const IndexSet> indices_;
    std::vector<Complex> coeffs_;
    Basis basis_;
};

/// Values of every basis function at every grid point:
/// out[i * grid.size() + q] = basis_{alpha_i}(x_q).
std::vector<double> basis_table(const IndexSet& indices, const QuadratureGrid& grid, Basis basis);

/// c_alpha = <f, basis_alpha> by quadrature. For Gauss-Hermite grids the
/// scale must equal product_scale(basis) and the order must exceed N.
SpectralVector project(const RealFunction& f, int truncation, const QuadratureGrid& grid, Basis basis);

/// Same, with f already sampled at the grid points.
SpectralVector project_samples(std::span<const Complex> samples, int truncation,
                               const QuadratureGrid& grid, Basis basis);

/// sum_alpha c_alpha basis_alpha(x) at a complex point (entire continuation
/// for the Hermite systems, monomials for Fock).
Complex synthesize(const SpectralVector& v, std::span<const Complex> x);
Complex synthesize(const SpectralVector& v, std::span<const double> x);

/// Values at every point of a grid (real points).
std::vector<Complex> synthesize_on_grid(const SpectralVector& v, const QuadratureGrid& grid);

enum class LadderDirection { lower, raise };

struct LadderResult {
    SpectralVector vector;
    /// l^2 norm of coefficients pushed past |alpha| = N by a raise.
    double truncation_loss = 0.0;
};

/// Coefficient action of H_j = d/dx_j + x_j (lower) or
/// H_{-j} = -d/dx_j + x_j (raise) on axis j (0-based), in paper-Hermite
/// normalization: H_j h_k = sqrt(2k) h_{k-1}, H_{-j} h_k = sqrt(2k+2) h_{k+1}.
LadderResult ladder(const SpectralVector& v, LadderDirection direction, int axis);

/// Change between the two Hermite conventions: coefficients are kept.
SpectralVector convert_convention(const SpectralVector& v, Basis target);

}  // namespace focklab
