#include "focklab/spectral_vector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "focklab/kernels.hpp"

namespace focklab {

SpectralVector::SpectralVector(int dim, int truncation, Basis basis)
    : indices_(IndexSet::get(dim, truncation)), coeffs_(indices_->size()), basis_(basis) {}

SpectralVector::SpectralVector(std::shared_ptr<const IndexSet> indices, std::vector<Complex> coeffs,
                               Basis basis)
    : indices_(std::move(indices)), coeffs_(std::move(coeffs)), basis_(basis) {
    if (coeffs_.size() != indices_->size())
        throw std::invalid_argument("SpectralVector: coefficient count does not match index set");
}

SpectralVector SpectralVector::unit(const MultiIndex& alpha, int truncation, Basis basis) {
    SpectralVector v(alpha.dim(), truncation, basis);
    const std::size_t pos = v.indices().position(alpha);
    if (pos == IndexSet::npos) throw std::invalid_argument("SpectralVector::unit: |alpha| exceeds truncation");
    v.coeffs_[pos] = 1.0;
    return v;
}

SpectralVector SpectralVector::random(int dim, int truncation, int band, Basis basis, std::mt19937_64& rng) {
    SpectralVector v(dim, truncation, basis);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.indices()[i].order() > band) break;
        const double re = normal(rng);
        const double im = normal(rng);
        v.coeffs_[i] = {re, im};
    }
    return v;
}

Complex SpectralVector::at(const MultiIndex& alpha) const {
    const std::size_t pos = indices_->position(alpha);
    return pos == IndexSet::npos ? Complex{} : coeffs_[pos];
}

double SpectralVector::norm() const {
    double acc = 0.0;
    for (const Complex& c : coeffs_) acc += std::norm(c);
    return std::sqrt(acc);
}

SpectralVector SpectralVector::with_truncation(int truncation) const {
    SpectralVector out(dim(), truncation, basis_);
    const std::size_t common = std::min(out.size(), size());
    // graded order makes the common part a shared prefix
    for (std::size_t i = 0; i < common; ++i) out.coeffs_[i] = coeffs_[i];
    return out;
}

SpectralVector SpectralVector::with_basis(Basis basis) const {
    SpectralVector out = *this;
    out.basis_ = basis;
    return out;
}

void SpectralVector::require_compatible(const SpectralVector& other) const {
    if (other.dim() != dim() || other.truncation() != truncation() || other.basis_ != basis_)
        throw std::invalid_argument("SpectralVector: operands differ in dimension, truncation or basis");
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralVector& SpectralVector::operator-=(const SpectralVector& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralVector& SpectralVector::operator*=(Complex factor) {
    for (Complex& c : coeffs_) c *= factor;
    return *this;
}

std::vector<double> basis_table(const IndexSet& indices, const QuadratureGrid& grid, Basis basis) {
    if (!is_hermite(basis)) throw std::invalid_argument("basis_table: Hermite basis required");
    if (grid.dim != indices.dim()) throw std::invalid_argument("basis_table: grid dimension mismatch");
    const std::size_t nq = grid.size();
    const int kmax = indices.truncation();
    std::vector<std::vector<double>> axis_tables;
    axis_tables.reserve(static_cast<std::size_t>(grid.dim));
    for (int j = 0; j < grid.dim; ++j) {
        const std::vector<double> coords = grid.axis_coordinates(j);
        axis_tables.push_back(hermite_table(kmax, coords, basis));
    }
    std::vector<double> out(indices.size() * nq);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const MultiIndex& alpha = indices[i];
        double* row = out.data() + i * nq;
        const double* first = axis_tables[0].data() + static_cast<std::size_t>(alpha[0]) * nq;
        for (std::size_t q = 0; q < nq; ++q) row[q] = first[q];
        for (int j = 1; j < grid.dim; ++j) {
            const double* t = axis_tables[static_cast<std::size_t>(j)].data() + static_cast<std::size_t>(alpha[j]) * nq;
            for (std::size_t q = 0; q < nq; ++q) row[q] *= t[q];
        }
    }
    return out;
}

namespace {

void check_projection_grid(int truncation, const QuadratureGrid& grid, Basis basis) {
    if (!is_hermite(basis)) throw std::invalid_argument("project: Hermite basis required");
    if (grid.kind == QuadratureGrid::Kind::gauss_hermite) {
        if (grid.scale != product_scale(basis))
            throw std::invalid_argument("project: grid scale " + std::to_string(grid.scale) +
                                        " does not match the " + std::string(basis_name(basis)) +
                                        " product weight (scale " + std::to_string(product_scale(basis)) + ")");
        if (grid.order <= truncation)
            throw std::invalid_argument("project: grid order must exceed the truncation");
    }
}

}  // namespace

SpectralVector project_samples(std::span<const Complex> samples, int truncation, const QuadratureGrid& grid,
                               Basis basis) {
    check_projection_grid(truncation, grid, basis);
    if (samples.size() != grid.size()) throw std::invalid_argument("project: sample count mismatch");
    SpectralVector v(grid.dim, truncation, basis);
    const std::vector<double> table = basis_table(v.indices(), grid, basis);
    const std::size_t nq = grid.size();
    std::vector<double> re(nq);
    std::vector<double> im(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        re[q] = samples[q].real();
        im[q] = samples[q].imag();
    }
    const auto& k = kernels::active();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::span<const double> row(table.data() + i * nq, nq);
        v[i] = {k.dot3(grid.plain_weights, re, row), k.dot3(grid.plain_weights, im, row)};
    }
    return v;
}

SpectralVector project(const RealFunction& f, int truncation, const QuadratureGrid& grid, Basis basis) {
    check_projection_grid(truncation, grid, basis);
    std::vector<Complex> samples(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) samples[q] = f(grid.point(q));
    return project_samples(samples, truncation, grid, basis);
}

Complex synthesize(const SpectralVector& v, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != v.dim()) throw std::invalid_argument("synthesize: point dimension mismatch");
    const int kmax = v.truncation();
    std::vector<std::vector<Complex>> axis_values;
    for (int j = 0; j < v.dim(); ++j) {
        axis_values.push_back(v.basis() == Basis::fock ? fock_monomials(kmax, x[static_cast<std::size_t>(j)])
                                                        : eval_hermite_all(kmax, x[static_cast<std::size_t>(j)], v.basis()));
    }
    Complex acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        const MultiIndex& alpha = v.indices()[i];
        Complex term = v[i];
        for (int j = 0; j < v.dim(); ++j) term *= axis_values[static_cast<std::size_t>(j)][static_cast<std::size_t>(alpha[j])];
        acc += term;
    }
    return acc;
}

Complex synthesize(const SpectralVector& v, std::span<const double> x) {
    std::vector<Complex> z(x.begin(), x.end());
    return synthesize(v, std::span<const Complex>(z));
}

std::vector<Complex> synthesize_on_grid(const SpectralVector& v, const QuadratureGrid& grid) {
    const std::vector<double> table = basis_table(v.indices(), grid, v.basis());
    const std::size_t nq = grid.size();
    std::vector<Complex> out(nq);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        const double* row = table.data() + i * nq;
        for (std::size_t q = 0; q < nq; ++q) out[q] += v[i] * row[q];
    }
    return out;
}

LadderResult ladder(const SpectralVector& v, LadderDirection direction, int axis) {
    if (axis < 0 || axis >= v.dim()) throw std::invalid_argument("ladder: axis out of range");
    if (!is_hermite(v.basis())) throw std::invalid_argument("ladder: Hermite basis required");
    LadderResult result{SpectralVector(v.dim(), v.truncation(), v.basis()), 0.0};
    double lost = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        const MultiIndex& alpha = v.indices()[i];
        const int k = alpha[axis];
        if (direction == LadderDirection::lower) {
            if (k == 0) continue;
            result.vector[v.indices().position(alpha.shifted(axis, -1))] += std::sqrt(2.0 * k) * v[i];
        } else {
            const Complex value = std::sqrt(2.0 * k + 2.0) * v[i];
            const std::size_t pos = v.indices().position(alpha.shifted(axis, 1));
            if (pos == IndexSet::npos)
                lost += std::norm(value);
            else
                result.vector[pos] += value;
        }
    }
    result.truncation_loss = std::sqrt(lost);
    return result;
}

SpectralVector convert_convention(const SpectralVector& v, Basis target) {
    if (!is_hermite(v.basis()) || !is_hermite(target))
        throw std::invalid_argument("convert_convention: both conventions must be Hermite");
    return v.with_basis(target);
}

}  // namespace focklab
