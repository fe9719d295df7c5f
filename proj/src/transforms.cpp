#include "focklab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "focklab/kernels.hpp"
#include "focklab/parallel.hpp"
#include "focklab/spaces.hpp"

namespace focklab {

namespace {

// (-i)^k
Complex minus_i_power(int k) {
    switch (k % 4) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, -1.0};
        case 2:
            return {-1.0, 0.0};
        default:
            return {0.0, 1.0};
    }
}

void require_bargmann(const SpectralVector& v, const char* what) {
    if (v.basis() != Basis::bargmann_hermite)
        throw std::invalid_argument(std::string(what) + ": expects the bargmann-hermite convention, got " +
                                    std::string(basis_name(v.basis())));
}

LadderDirection direction_of(LadderLetter j, int dim) {
    if (j.j == 0 || std::abs(j.j) > dim) throw std::invalid_argument("ladder letter out of range");
    return j.j > 0 ? LadderDirection::lower : LadderDirection::raise;
}

int axis_of(LadderLetter j) { return std::abs(j.j) - 1; }

SpectralVector apply_letter(const SpectralVector& v, LadderLetter j) {
    return ladder(v, direction_of(j, v.dim()), axis_of(j)).vector;
}

double interior_vector_distance(const SpectralVector& a, const SpectralVector& b, int order) {
    const std::size_t k = a.indices().prefix_size(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc);
}

// 1D block T[alpha][beta] = int basis_beta(x - a) basis_alpha(x) dx
std::vector<double> translation_1d(double a, int N, Basis basis, int order) {
    const QuadratureGrid g = gauss_hermite(order, product_scale(basis), 1);
    std::vector<double> plus(g.size()), minus(g.size());
    for (std::size_t q = 0; q < g.size(); ++q) {
        plus[q] = g.nodes[q] + 0.5 * a;
        minus[q] = g.nodes[q] - 0.5 * a;
    }
    const auto tp = hermite_table(N, plus, basis);
    const auto tm = hermite_table(N, minus, basis);
    const std::size_t nq = g.size();
    const std::size_t side = static_cast<std::size_t>(N) + 1;
    std::vector<double> out(side * side);
    const auto& k = kernels::active();
    for (std::size_t al = 0; al < side; ++al)
        for (std::size_t be = 0; be < side; ++be)
            out[al * side + be] = k.dot3(g.plain_weights, std::span<const double>(tp.data() + al * nq, nq),
                                         std::span<const double>(tm.data() + be * nq, nq));
    return out;
}

// 1D block of W_a on e_m, long double
std::vector<std::complex<long double>> weyl_1d(std::complex<long double> a, int N) {
    const std::size_t side = static_cast<std::size_t>(N) + 1;
    std::vector<long double> fact(side + 1, 1.0L);
    for (std::size_t k = 1; k <= side; ++k) fact[k] = fact[k - 1] * static_cast<long double>(k);
    std::vector<std::complex<long double>> pa(side, 1.0L), pc(side, 1.0L);  // (-a)^k, conj(a)^k
    for (std::size_t k = 1; k < side; ++k) {
        pa[k] = pa[k - 1] * (-a);
        pc[k] = pc[k - 1] * std::conj(a);
    }
    const long double pref = std::exp(-0.5L * std::norm(a));
    std::vector<std::complex<long double>> out(side * side);
    for (std::size_t m = 0; m < side; ++m)
        for (std::size_t b = 0; b < side; ++b) {
            std::complex<long double> acc = 0.0L;
            for (std::size_t j = 0; j <= std::min(m, b); ++j)
                acc += (fact[b] / (fact[j] * fact[b - j])) * pa[b - j] * pc[m - j] / fact[m - j];
            out[m * side + b] = pref * std::sqrt(fact[m] / fact[b]) * acc;
        }
    return out;
}

// tensor product of per-axis blocks into a graded matrix
template <typename Block, typename Cast>
OperatorMatrix tensor_blocks(int dim, int N, Basis basis, const std::vector<Block>& blocks, Cast cast) {
    OperatorMatrix m(dim, N, basis);
    const std::size_t side = static_cast<std::size_t>(N) + 1;
    const IndexSet& set = m.indices();
    parallel_for(m.size(), [&](std::size_t i) {
        const MultiIndex& al = set[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            const MultiIndex& be = set[j];
            Complex v = 1.0;
            for (int ax = 0; ax < dim; ++ax)
                v *= cast(blocks[static_cast<std::size_t>(ax)][static_cast<std::size_t>(al[ax]) * side +
                                                               static_cast<std::size_t>(be[ax])]);
            m(i, j) = v;
        }
    });
    return m;
}

// c_alpha = sum_q pw_q F(x_q) basis_alpha(x_q) on any grid (no scale check)
SpectralVector project_on_grid(std::span<const Complex> samples, int K, const QuadratureGrid& grid, Basis basis) {
    SpectralVector v(grid.dim, K, basis);
    const auto table = basis_table(v.indices(), grid, basis);
    const std::size_t nq = grid.size();
    std::vector<double> re(nq), im(nq);
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

}  // namespace

SpectralVector fourier(const SpectralVector& v) {
    require_bargmann(v, "fourier");
    SpectralVector out = v;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= minus_i_power(v.indices()[i].order());
    return out;
}

SpectralVector inverse_fourier(const SpectralVector& v) {
    require_bargmann(v, "inverse_fourier");
    SpectralVector out = v;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::conj(minus_i_power(v.indices()[i].order()));
    return out;
}

std::vector<Complex> fourier_quadrature(const RealFunction& f, std::span<const double> x, const QuadratureGrid& grid) {
    const std::size_t n = static_cast<std::size_t>(grid.dim);
    if (x.size() % n != 0) throw std::invalid_argument("fourier_quadrature: point array not a multiple of the dimension");
    std::vector<Complex> samples(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) samples[q] = grid.plain_weights[q] * f(grid.point(q));
    const double pref = std::pow(std::numbers::pi, -0.5 * static_cast<double>(n));
    std::vector<Complex> out(x.size() / n);
    parallel_for(out.size(), [&](std::size_t p) {
        Complex acc = 0.0;
        for (std::size_t q = 0; q < grid.size(); ++q) {
            double phase = 0.0;
            const auto y = grid.point(q);
            for (std::size_t j = 0; j < n; ++j) phase += x[p * n + j] * y[j];
            acc += samples[q] * std::polar(1.0, -2.0 * phase);
        }
        out[p] = pref * acc;
    });
    return out;
}

SpectralVector bargmann(const SpectralVector& v) {
    require_bargmann(v, "bargmann");
    return v.with_basis(Basis::fock);
}

SpectralVector inverse_bargmann(const SpectralVector& v) {
    if (v.basis() != Basis::fock) throw std::invalid_argument("inverse_bargmann: expects a Fock vector");
    return v.with_basis(Basis::bargmann_hermite);
}

Complex bargmann_quadrature(const RealFunction& f, std::span<const Complex> z, const QuadratureGrid& grid) {
    if (z.size() != static_cast<std::size_t>(grid.dim)) throw std::invalid_argument("bargmann_quadrature: dimension mismatch");
    Complex zz = 0.0;
    for (const Complex& c : z) zz += c * c;
    Complex acc = 0.0;
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const auto x = grid.point(q);
        Complex e = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) e += (x[j] - z[j]) * (x[j] - z[j]);
        acc += grid.plain_weights[q] * f(x) * std::exp(-e);
    }
    return std::pow(2.0 / std::numbers::pi, 0.25 * static_cast<double>(grid.dim)) * std::exp(0.5 * zz) * acc;
}

OperatorMatrix rotation_matrix(int dim, int truncation) {
    OperatorMatrix m(dim, truncation, Basis::fock);
    for (std::size_t i = 0; i < m.size(); ++i) m(i, i) = minus_i_power(m.indices()[i].order());
    return m;
}

OperatorMatrix translation_matrix(std::span<const double> a, int truncation, Basis basis, int margin) {
    if (!is_hermite(basis)) throw std::invalid_argument("translation_matrix: Hermite convention required");
    const int dim = static_cast<int>(a.size());
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("translation_matrix: dimension out of range");
    if (margin < 1) throw std::invalid_argument("translation_matrix: margin must be positive");
    std::vector<std::vector<double>> blocks;
    for (double aj : a) blocks.push_back(translation_1d(aj, truncation, basis, truncation + margin));
    OperatorMatrix m = tensor_blocks(dim, truncation, basis, blocks, [](double v) { return Complex(v); });
    const double defect = unitarity_defect(m, truncation / 2);
    if (defect > 1e-4)
        m.warnings.push_back("translation_matrix: interior unitarity defect " + std::to_string(defect) +
                             " exceeds 1e-4; truncation too small for this |a|");
    return m;
}

OperatorMatrix weyl_matrix(std::span<const Complex> a, int truncation) {
    const int dim = static_cast<int>(a.size());
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("weyl_matrix: dimension out of range");
    std::vector<std::vector<std::complex<long double>>> blocks;
    for (const Complex& aj : a) blocks.push_back(weyl_1d({aj.real(), aj.imag()}, truncation));
    return tensor_blocks(dim, truncation, Basis::fock, blocks, [](const std::complex<long double>& v) {
        return Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    });
}

DefectReport conjugation_check(std::span<const double> a, int truncation) {
    const OperatorMatrix t = translation_matrix(a, truncation, Basis::bargmann_hermite);
    std::vector<Complex> ac(a.begin(), a.end());
    OperatorMatrix w = weyl_matrix(ac, truncation);
    // B^{-1} W B: same coefficients, Hermite tag
    w.set_basis(Basis::bargmann_hermite);
    return {interior_distance(t, w, truncation / 2), truncation, truncation / 2};
}

DefectReport translation_ladder_check(std::span<const double> a, LadderLetter j, const SpectralVector& v) {
    if (v.basis() != Basis::paper_hermite)
        throw std::invalid_argument("translation_ladder_check: ladder factors hold in the paper-hermite convention");
    if (static_cast<int>(a.size()) != v.dim()) throw std::invalid_argument("translation_ladder_check: dimension mismatch");
    const OperatorMatrix t = translation_matrix(a, v.truncation(), Basis::paper_hermite);
    const double aj = a[static_cast<std::size_t>(axis_of(j))];
    const SpectralVector lhs = apply_letter(t.apply(v), j);
    const SpectralVector rhs = t.apply(apply_letter(v, j) + Complex(aj) * v);
    return {interior_vector_distance(lhs, rhs, v.truncation() / 2), v.truncation(), v.truncation() / 2};
}

DefectReport translation_ladder_check2(std::span<const double> a, LadderLetter j1, LadderLetter j2,
                                       const SpectralVector& v) {
    if (v.basis() != Basis::paper_hermite)
        throw std::invalid_argument("translation_ladder_check2: ladder factors hold in the paper-hermite convention");
    if (static_cast<int>(a.size()) != v.dim()) throw std::invalid_argument("translation_ladder_check2: dimension mismatch");
    const OperatorMatrix t = translation_matrix(a, v.truncation(), Basis::paper_hermite);
    const Complex a1 = a[static_cast<std::size_t>(axis_of(j1))];
    const Complex a2 = a[static_cast<std::size_t>(axis_of(j2))];
    const SpectralVector lhs = apply_letter(apply_letter(t.apply(v), j2), j1);
    const SpectralVector inner = apply_letter(apply_letter(v, j2), j1) + a1 * apply_letter(v, j2) +
                                 a2 * apply_letter(v, j1) + (a1 * a2) * v;
    const SpectralVector rhs = t.apply(inner);
    return {interior_vector_distance(lhs, rhs, v.truncation() / 2), v.truncation(), v.truncation() / 2};
}

DefectReport leibniz_check(const SpectralVector& f, const SpectralVector& g, LadderLetter j, int projection_K) {
    if (f.basis() != Basis::paper_hermite || g.basis() != Basis::paper_hermite)
        throw std::invalid_argument("leibniz_check: ladder factors hold in the paper-hermite convention");
    if (f.dim() != g.dim()) throw std::invalid_argument("leibniz_check: dimension mismatch");
    const int N = std::max(f.truncation(), g.truncation());
    const int K = projection_K > 0 ? projection_K : 2 * N;
    const int axis = axis_of(j);
    direction_of(j, f.dim());
    // f g h_K with one extra x: degree 2N + K + 2 against e^{-3x^2/2}
    const int order = (2 * N + K + 3) / 2 + 8;
    const QuadratureGrid grid = gauss_hermite(order, 1.5, f.dim());

    const SpectralVector fp = f.with_truncation(f.truncation() + 1);
    const SpectralVector gp = g.with_truncation(g.truncation() + 1);
    const auto fv = synthesize_on_grid(f, grid);
    const auto gv = synthesize_on_grid(g, grid);
    const auto hf = synthesize_on_grid(apply_letter(fp, j), grid);
    const auto hg = synthesize_on_grid(apply_letter(gp, j), grid);
    std::vector<Complex> prod(grid.size()), rhs(grid.size());
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const double x = grid.point(q)[static_cast<std::size_t>(axis)];
        prod[q] = fv[q] * gv[q];
        rhs[q] = hf[q] * gv[q] + fv[q] * hg[q] - x * prod[q];
    }
    const SpectralVector lhs = apply_letter(project_on_grid(prod, K, grid, Basis::paper_hermite), j);
    const SpectralVector right = project_on_grid(rhs, K, grid, Basis::paper_hermite);
    return {(lhs - right).norm(), N, K};
}

double ladder_shift_defect(const SpectralVector& v, LadderLetter j, double p) {
    const SpectralVector padded = v.with_truncation(v.truncation() + 1);
    const double shift = j.j > 0 ? 2.0 : -2.0;
    const SpectralVector lhs = apply_letter(fractional_H(padded, p), j);
    const SpectralVector hv = apply_letter(padded, j);
    SpectralVector rhs = hv;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        const double lambda = hermite_eigenvalue(rhs.indices()[i]) + shift;
        if (rhs[i] != 0.0) rhs[i] *= std::pow(lambda, p);
    }
    return (lhs - rhs).norm();
}

double weyl_bound_ratio(std::span<const Complex> a, const SpectralVector& v, double s) {
    if (v.basis() != Basis::fock) throw std::invalid_argument("weyl_bound_ratio: Fock vector required");
    double amag = 0.0;
    for (const Complex& c : a) amag += std::norm(c);
    amag = std::sqrt(amag);
    const int pad = 16 + static_cast<int>(std::ceil(8.0 * amag * (amag + std::sqrt(v.truncation() + 1.0))));
    const int big = v.truncation() + pad;
    const OperatorMatrix w = weyl_matrix(a, big);
    const SpectralVector image = w.apply(v.with_truncation(big));
    const SmoothnessOrder so(s);
    return sobolev_norm(image, so) / ((1.0 + std::pow(amag, s)) * sobolev_norm(v, so));
}

}  // namespace focklab
