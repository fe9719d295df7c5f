#include "focklab/zhu.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "focklab/kernels.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

namespace {

using std::numbers::pi;

// i^k
Complex i_power(int k) {
    static const Complex table[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return table[((k % 4) + 4) % 4];
}

void require_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension must be 1, 2 or 3");
}

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

// samples of m times Gaussian weights on a real rule, shared by evaluators
struct WeightedSamples {
    int dim = 1;
    std::vector<double> nodes;
    std::vector<Complex> coef;
};

}  // namespace

bool SymbolSpec::reliable_at(std::span<const Complex> z) const {
    for (const Complex& c : z)
        if (std::abs(c.real()) > reliable_real || std::abs(c.imag()) > reliable_imag) return false;
    return true;
}

SymbolSpec symbol_from_multiplier(const MultiplierSpec& m, int dim, int order) {
    require_dim(dim);
    m.require_dim(dim);
    const QuadratureGrid grid = gauss_hermite(order, 2.0, dim);
    auto data = std::make_shared<WeightedSamples>();
    data->dim = dim;
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const Complex c = grid.weights[q] * m(grid.point(q));
        if (c == 0.0) continue;
        data->coef.push_back(c);
        const auto p = grid.point(q);
        data->nodes.insert(data->nodes.end(), p.begin(), p.end());
    }
    const double pref = std::pow(2.0 / pi, 0.5 * dim);
    SymbolSpec phi;
    phi.dim = dim;
    phi.label = "symbol(" + m.label + ")";
    phi.provenance = SymbolProvenance::from_multiplier;
    phi.reliable_imag = *std::max_element(grid.nodes.begin(), grid.nodes.end());
    phi.reliable_real = phi.reliable_imag;
    phi.eval = [data, pref](std::span<const Complex> z) {
        const std::size_t n = static_cast<std::size_t>(data->dim);
        Complex zz = 0.0;
        for (const Complex& c : z) zz += c * c;
        std::complex<long double> acc = 0.0L;
        for (std::size_t q = 0; q < data->coef.size(); ++q) {
            Complex e = 0.5 * zz;
            for (std::size_t j = 0; j < n; ++j) e += Complex(0.0, 2.0 * data->nodes[q * n + j]) * z[j];
            const Complex t = data->coef[q] * std::exp(e);
            acc += std::complex<long double>(t.real(), t.imag());
        }
        return pref * Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    };
    if (!m.smooth)
        phi.warnings.push_back("symbol of a non-smooth multiplier: Gauss-Hermite evaluation converges slowly");
    return phi;
}

SymbolSpec closed_form_symbol(const MultiplierSpec& m, int dim) {
    require_dim(dim);
    m.require_dim(dim);
    SymbolSpec phi;
    phi.dim = dim;
    phi.label = "symbol(" + m.label + ")";
    phi.provenance = SymbolProvenance::direct;
    if (m.kind == "constant") {
        const Complex c(m.parameters.at(0), m.parameters.at(1));
        phi.eval = [c](std::span<const Complex>) { return c; };
        return phi;
    }
    if (m.kind == "modulation") {
        const std::vector<double> c = m.parameters;
        double c2 = 0.0;
        for (double v : c) c2 += v * v;
        phi.eval = [c, c2](std::span<const Complex> z) {
            Complex e = -0.5 * c2;
            for (std::size_t j = 0; j < c.size(); ++j) e += c[j] * z[j];
            return std::exp(e);
        };
        return phi;
    }
    throw std::invalid_argument("no closed-form symbol for multiplier " + m.label);
}

SpectralVector project_symbol(const SymbolSpec& phi, int truncation, const QuadratureGrid& grid2n) {
    if (grid2n.dim != 2 * phi.dim || grid2n.kind != QuadratureGrid::Kind::gauss_hermite || grid2n.scale != 1.0)
        throw std::invalid_argument("project_symbol: needs a 2n-dim scale-1 Gauss-Hermite grid");
    const std::size_t n = static_cast<std::size_t>(phi.dim);
    SpectralVector v(phi.dim, truncation, Basis::fock);
    const double norm = std::pow(pi, -static_cast<double>(n));
    std::vector<Complex> acc(v.size());
    std::vector<Complex> z(n);
    for (std::size_t q = 0; q < grid2n.size(); ++q) {
        const auto p = grid2n.point(q);
        for (std::size_t j = 0; j < n; ++j) z[j] = {p[j], p[n + j]};
        const Complex f = grid2n.weights[q] * norm * phi(z);
        std::vector<std::vector<Complex>> mono;
        for (std::size_t j = 0; j < n; ++j) mono.push_back(fock_monomials(truncation, std::conj(z[j])));
        for (std::size_t i = 0; i < v.size(); ++i) {
            Complex e = f;
            for (std::size_t j = 0; j < n; ++j)
                e *= mono[j][static_cast<std::size_t>(v.indices()[i][static_cast<int>(j)])];
            acc[i] += e;
        }
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = acc[i];
    return v;
}

double inverse_symbol_constant(int dim) { return std::pow(2.0, -0.5 * dim); }

namespace {

std::shared_ptr<WeightedSamples> inverse_samples(const SymbolSpec& phi, int order) {
    const QuadratureGrid grid = gauss_hermite(order, 0.5, phi.dim);
    auto data = std::make_shared<WeightedSamples>();
    data->dim = phi.dim;
    std::vector<Complex> u(static_cast<std::size_t>(phi.dim));
    for (std::size_t q = 0; q < grid.size(); ++q) {
        const auto p = grid.point(q);
        for (std::size_t j = 0; j < u.size(); ++j) u[j] = p[j];
        if (!phi.reliable_at(u)) continue;
        const Complex c = grid.weights[q] * phi(u);
        if (c == 0.0) continue;
        data->coef.push_back(c);
        data->nodes.insert(data->nodes.end(), p.begin(), p.end());
    }
    return data;
}

double valid_range(const WeightedSamples& data, double tolerance) {
    // roundoff of the oscillatory sum, amplified by C' e^{2|x|^2}
    constexpr double kNoise = 1e-15;
    double mass = 0.0;
    for (const Complex& c : data.coef) mass += std::abs(c);
    mass *= std::pow(pi, -0.5 * data.dim) * inverse_symbol_constant(data.dim);
    const double ratio = tolerance / (kNoise * std::max(mass, 1e-300));
    return ratio <= 1.0 ? 0.0 : std::sqrt(0.5 * std::log(ratio));
}

}  // namespace

double inverse_symbol_valid_range(const SymbolSpec& phi, const InverseSymbolOptions& options) {
    return valid_range(*inverse_samples(phi, options.order), options.tolerance);
}

MultiplierSpec multiplier_from_symbol(const SymbolSpec& phi, InverseSymbolOptions options) {
    const auto data = inverse_samples(phi, options.order);
    const double range = valid_range(*data, options.tolerance);
    const double pref = inverse_symbol_constant(phi.dim) * std::pow(pi, -0.5 * phi.dim);
    MultiplierSpec m;
    m.kind = "from_symbol";
    m.label = "from_symbol(" + phi.label + ")";
    m.dim = phi.dim;
    m.smooth = true;
    m.warnings.push_back("e^{2|x|^2} amplification: values validated for |x| <= " + sci(range) +
                         "; outside that radius the value at the boundary sphere is returned");
    m.eval = [data, pref, range](std::span<const double> x) {
        const std::size_t n = static_cast<std::size_t>(data->dim);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const double shrink = r2 > range * range ? range / std::sqrt(r2) : 1.0;
        r2 *= shrink * shrink;
        std::complex<long double> acc = 0.0L;
        for (std::size_t q = 0; q < data->coef.size(); ++q) {
            double ph = 0.0;
            for (std::size_t j = 0; j < n; ++j) ph += shrink * x[j] * data->nodes[q * n + j];
            const Complex t = data->coef[q] * std::polar(1.0, -2.0 * ph);
            acc += std::complex<long double>(t.real(), t.imag());
        }
        return pref * std::exp(2.0 * r2) * Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    };
    return m;
}

// ---- Zhu's operator ----

namespace {

double max_abs_coordinate(const QuadratureGrid& g) {
    double m = 0.0;
    for (double c : g.nodes) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

Complex s_phi_apply(const SymbolSpec& phi, const SpectralVector& F, std::span<const Complex> z,
                    const QuadratureGrid& grid2n, std::vector<std::string>* warnings) {
    if (F.basis() != Basis::fock) throw std::invalid_argument("s_phi_apply: Fock vector required");
    if (F.dim() != phi.dim || static_cast<int>(z.size()) != phi.dim)
        throw std::invalid_argument("s_phi_apply: dimension mismatch");
    if (grid2n.dim != 2 * phi.dim || grid2n.kind != QuadratureGrid::Kind::gauss_hermite || grid2n.scale != 1.0)
        throw std::invalid_argument("s_phi_apply: needs a 2n-dim scale-1 Gauss-Hermite grid");
    const std::size_t n = z.size();
    const double norm = std::pow(pi, -static_cast<double>(n));
    // outermost nodes: some coordinate near the largest abscissa
    const double cmax = max_abs_coordinate(grid2n);
    Complex acc = 0.0;
    double big = 0.0, edge = 0.0;
    double unreliable = 0.0;
    std::vector<Complex> w(n), arg(n);
    for (std::size_t q = 0; q < grid2n.size(); ++q) {
        const auto p = grid2n.point(q);
        Complex zw = 0.0;
        double outer = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = {p[j], p[n + j]};
            zw += z[j] * std::conj(w[j]);
            arg[j] = z[j] - std::conj(w[j]);
            outer = std::max({outer, std::abs(p[j]), std::abs(p[n + j])});
        }
        const Complex term = grid2n.weights[q] * norm * synthesize(F, w) * std::exp(zw) * phi(arg);
        acc += term;
        const double mag = std::abs(term);
        big = std::max(big, mag);
        if (outer >= 0.9 * cmax) edge = std::max(edge, mag);
        if (!phi.reliable_at(arg)) unreliable = std::max(unreliable, mag);
    }
    if (warnings) {
        if (edge > 1e-12 * big)
            warnings->push_back("s_phi growth: outermost nodes carry " + sci(edge / big) +
                                " of the largest term; the Gaussian weight does not compensate");
        if (unreliable > 1e-14 * big)
            warnings->push_back("s_phi: symbol evaluated outside its reliable range on nodes carrying " +
                                sci(unreliable / big) + " of the largest term");
    }
    return acc;
}

OperatorMatrix s_phi_matrix(const SymbolSpec& phi, int truncation, const SPhiOptions& options) {
    const int dim = phi.dim;
    require_dim(dim);
    if (truncation < 0) throw std::invalid_argument("s_phi_matrix: negative truncation");
    const int M = options.samples > 0 ? options.samples : 2 * (truncation + 1);
    if (M <= truncation) throw std::invalid_argument("s_phi_matrix: need more Taylor samples than the truncation");
    const double r = options.radius;
    const QuadratureGrid grid = gauss_hermite(options.quad_order, 1.0, 2 * dim);
    const std::size_t n = static_cast<std::size_t>(dim);
    const std::size_t nq = grid.size();
    OperatorMatrix out(dim, truncation, Basis::fock);
    const IndexSet& set = out.indices();
    const std::size_t size = set.size();

    // e_beta at the nodes and node radii
    std::vector<Complex> nodes(nq * n);
    std::vector<Complex> ebeta(nq * size);
    const double cmax = max_abs_coordinate(grid);
    std::vector<double> outer(nq, 0.0);
    for (std::size_t q = 0; q < nq; ++q) {
        const auto p = grid.point(q);
        std::vector<std::vector<Complex>> mono;
        for (std::size_t j = 0; j < n; ++j) {
            nodes[q * n + j] = {p[j], p[n + j]};
            outer[q] = std::max({outer[q], std::abs(p[j]), std::abs(p[n + j])});
            mono.push_back(fock_monomials(truncation, nodes[q * n + j]));
        }
        for (std::size_t b = 0; b < size; ++b) {
            Complex e = 1.0;
            for (std::size_t j = 0; j < n; ++j) e *= mono[j][static_cast<std::size_t>(set[b][static_cast<int>(j)])];
            ebeta[q * size + b] = e;
        }
    }

    // torus samples
    std::size_t P = 1;
    for (int j = 0; j < dim; ++j) P *= static_cast<std::size_t>(M);
    std::vector<Complex> G(P * size);
    std::vector<double> big(P, 0.0), edge(P, 0.0);
    std::vector<double> unreliable(P, 0.0);
    const double norm = std::pow(pi, -static_cast<double>(dim));
    parallel_for(P, [&](std::size_t p) {
        std::vector<Complex> z(n), arg(n);
        std::size_t rem = p;
        for (std::size_t j = 0; j < n; ++j) {
            z[j] = std::polar(r, 2.0 * pi * static_cast<double>(rem % static_cast<std::size_t>(M)) / M);
            rem /= static_cast<std::size_t>(M);
        }
        std::vector<Complex> row(size, 0.0);
        for (std::size_t q = 0; q < nq; ++q) {
            Complex zw = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const Complex wbar = std::conj(nodes[q * n + j]);
                zw += z[j] * wbar;
                arg[j] = z[j] - wbar;
            }
            const Complex k = grid.weights[q] * norm * std::exp(zw) * phi(arg);
            const double mag = std::abs(k);
            big[p] = std::max(big[p], mag);
            if (outer[q] >= 0.9 * cmax) edge[p] = std::max(edge[p], mag);
            if (!phi.reliable_at(arg)) unreliable[p] = std::max(unreliable[p], mag);
            const Complex* e = ebeta.data() + q * size;
            for (std::size_t b = 0; b < size; ++b) row[b] += k * e[b];
        }
        std::copy(row.begin(), row.end(), G.begin() + static_cast<std::ptrdiff_t>(p * size));
    });

    // Taylor coefficients by DFT over the torus
    parallel_for(size, [&](std::size_t a) {
        const MultiIndex& al = set[a];
        double scale = std::sqrt(static_cast<double>(al.factorial())) / std::pow(r, al.order()) / static_cast<double>(P);
        for (std::size_t b = 0; b < size; ++b) {
            Complex acc = 0.0;
            for (std::size_t p = 0; p < P; ++p) {
                std::size_t rem = p;
                long phase = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    phase += static_cast<long>(rem % static_cast<std::size_t>(M)) * al[static_cast<int>(j)];
                    rem /= static_cast<std::size_t>(M);
                }
                acc += G[p * size + b] * std::polar(1.0, -2.0 * pi * static_cast<double>(phase % M) / M);
            }
            out(a, b) = scale * acc;
        }
    });

    double edge_ratio = 0.0, unreliable_ratio = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
        if (big[p] > 0.0) edge_ratio = std::max(edge_ratio, edge[p] / big[p]);
        if (big[p] > 0.0) unreliable_ratio = std::max(unreliable_ratio, unreliable[p] / big[p]);
    }
    if (edge_ratio > 1e-12)
        out.warnings.push_back("s_phi growth: outermost nodes carry " + sci(edge_ratio) +
                               " of the largest kernel term; the Gaussian weight does not compensate");
    if (unreliable_ratio > 1e-14)
        out.warnings.push_back("s_phi: symbol evaluated outside its reliable range on nodes carrying " +
                               sci(unreliable_ratio) + " of the largest kernel term");
    return out;
}

int default_multiplier_order(int dim, int truncation) {
    require_dim(dim);
    if (dim == 1) return std::max(4 * truncation + 64, 200);
    if (dim == 2) return 2 * truncation + 32;
    return 2 * truncation + 16;
}

OperatorMatrix multiplier_matrix(const MultiplierSpec& m, int dim, int truncation, int order) {
    require_dim(dim);
    m.require_dim(dim);
    if (order <= 0) order = default_multiplier_order(dim, truncation);
    if (order < 2 * truncation)
        throw std::invalid_argument("multiplier_matrix: quadrature order " + std::to_string(order) + " below 2N = " +
                                    std::to_string(2 * truncation));
    QuadratureGrid grid;
    if (dim == 1 && !m.smooth) {
        // Bargmann-Hermite functions of degree <= N are below 1e-20 past
        // sqrt(N + 1/2) + 6; 16-point panels of width 1/4 resolve them
        const double halfwidth = std::sqrt(truncation + 0.5) + 6.0;
        std::vector<double> cuts;
        for (double b : m.breakpoints)
            if (std::abs(b) < halfwidth) cuts.push_back(b);
        grid = piecewise_legendre(halfwidth, cuts, 0.25, 16, 2.0);
    } else {
        grid = gauss_hermite(order, 2.0, dim);
    }
    OperatorMatrix out(dim, truncation, Basis::bargmann_hermite);
    const std::vector<double> table = basis_table(out.indices(), grid, Basis::bargmann_hermite);
    const std::size_t nq = grid.size();
    std::vector<double> mre(nq), mim(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        const Complex v = grid.plain_weights[q] * m(grid.point(q));
        mre[q] = v.real();
        mim[q] = v.imag();
    }
    const bool real = std::all_of(mim.begin(), mim.end(), [](double v) { return v == 0.0; });
    const auto& k = kernels::active();
    const std::size_t size = out.size();
    parallel_for(size, [&](std::size_t i) {
        const std::span<const double> ri(table.data() + i * nq, nq);
        for (std::size_t j = i; j < size; ++j) {
            const std::span<const double> rj(table.data() + j * nq, nq);
            const Complex v(k.dot3(mre, ri, rj), real ? 0.0 : k.dot3(mim, ri, rj));
            out(i, j) = v;
        }
    });
    // the integrand is symmetric in (alpha, beta)
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    return out;
}

OperatorMatrix conjugated_multiplier_matrix(const MultiplierSpec& m, int dim, int truncation, int order) {
    OperatorMatrix a = multiplier_matrix(m, dim, truncation, order);
    const IndexSet& set = a.indices();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) a(i, j) *= i_power(set[i].order()) * i_power(-set[j].order());
    a.set_basis(Basis::fock);
    return a;
}

}  // namespace focklab
