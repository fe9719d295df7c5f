#include "focklab/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "focklab/error.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

SmoothnessOrder::SmoothnessOrder(double s) : s_(s) {
    if (!std::isfinite(s) || s < 0.0)
        throw std::invalid_argument("smoothness order must be a finite s >= 0 (got " + std::to_string(s) + ")");
}

namespace {

// (2k + n)^p for k = 0..N
std::vector<double> eigen_powers(int dim, int truncation, double p) {
    std::vector<double> out(static_cast<std::size_t>(truncation) + 1);
    for (int k = 0; k <= truncation; ++k) out[static_cast<std::size_t>(k)] = std::pow(2.0 * k + dim, p);
    return out;
}

double weighted_square_sum(const SpectralVector& v, double s) {
    const auto w = eigen_powers(v.dim(), v.truncation(), s);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += w[static_cast<std::size_t>(v.indices()[i].order())] * std::norm(v[i]);
    return acc;
}

}  // namespace

double sobolev_norm(const SpectralVector& v, SmoothnessOrder s) { return std::sqrt(weighted_square_sum(v, s)); }

SpectralVector fractional_H(const SpectralVector& v, double s) {
    const auto w = eigen_powers(v.dim(), v.truncation(), s);
    SpectralVector out = v;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[static_cast<std::size_t>(v.indices()[i].order())];
    return out;
}

double weighted_fock_norm(const SpectralVector& v, SmoothnessOrder s, const QuadratureGrid& grid2n) {
    if (v.basis() != Basis::fock) throw std::invalid_argument("weighted_fock_norm: Fock vector required");
    if (grid2n.dim != 2 * v.dim())
        throw std::invalid_argument("weighted_fock_norm: grid must have dimension 2n = " +
                                    std::to_string(2 * v.dim()) + ", got " + std::to_string(grid2n.dim));
    if (grid2n.kind != QuadratureGrid::Kind::gauss_hermite || grid2n.scale != 1.0)
        throw std::invalid_argument("weighted_fock_norm: grid must be a scale-1 Gauss-Hermite rule");
    const int n = v.dim();
    const int N = v.truncation();
    std::vector<double> num(grid2n.size());
    std::vector<double> den(grid2n.size());
    parallel_for(grid2n.size(), [&](std::size_t q) {
        const auto p = grid2n.point(q);
        double r2 = 0.0;
        std::vector<std::vector<Complex>> mono;
        for (int j = 0; j < n; ++j) {
            const Complex z(p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(j + n)]);
            r2 += std::norm(z);
            mono.push_back(fock_monomials(N, z));
        }
        Complex f = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0.0) continue;
            Complex term = v[i];
            for (int j = 0; j < n; ++j)
                term *= mono[static_cast<std::size_t>(j)][static_cast<std::size_t>(v.indices()[i][j])];
            f += term;
        }
        const double weight = std::pow(1.0 + std::sqrt(r2), 2.0 * s);
        num[q] = grid2n.weights[q] * weight * std::norm(f);
        den[q] = grid2n.weights[q] * weight;
    });
    double a = 0.0, b = 0.0;
    for (std::size_t q = 0; q < num.size(); ++q) {
        a += num[q];
        b += den[q];
    }
    return std::sqrt(a / b);
}

SpectralVector heat_semigroup(const SpectralVector& v, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat_semigroup: t must be >= 0");
    SpectralVector out = v;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= std::exp(-t * t * hermite_eigenvalue(v.indices()[i]));
    return out;
}

double heat_kernel_truncated(int truncation, double t, std::span<const double> x, std::span<const double> y,
                             Basis basis) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("heat_kernel: point dimension mismatch");
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<Complex>> hx, hy;
    for (int j = 0; j < n; ++j) {
        hx.push_back(eval_hermite_all(truncation, x[static_cast<std::size_t>(j)], basis));
        hy.push_back(eval_hermite_all(truncation, y[static_cast<std::size_t>(j)], basis));
    }
    double acc = 0.0;
    for (const MultiIndex& a : *IndexSet::get(n, truncation)) {
        double term = std::exp(-t * t * hermite_eigenvalue(a));
        for (int j = 0; j < n; ++j)
            term *= hx[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[j])].real() *
                    hy[static_cast<std::size_t>(j)][static_cast<std::size_t>(a[j])].real();
        acc += term;
    }
    return acc;
}

double heat_kernel_mehler(double t, std::span<const double> x, std::span<const double> y, Basis basis) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("heat_kernel: point dimension mismatch");
    if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_mehler: t must be > 0");
    const double n = static_cast<double>(x.size());
    const double c = basis == Basis::bargmann_hermite ? std::numbers::sqrt2 : 1.0;
    const double tau2 = 2.0 * t * t;
    double xx = 0.0, yy = 0.0, xy = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        xx += c * c * x[j] * x[j];
        yy += c * c * y[j] * y[j];
        xy += c * c * x[j] * y[j];
    }
    const double sh = std::sinh(tau2);
    const double value =
        std::pow(2.0 * std::numbers::pi * sh, -0.5 * n) * std::exp(-(std::cosh(tau2) * (xx + yy) / 2.0 - xy) / sh);
    return basis == Basis::bargmann_hermite ? std::pow(2.0, 0.5 * n) * value : value;
}

TIntegral square_function_integral(double s, int K) {
    if (K < 1) throw DivergenceError("square function: K must be >= 1");
    if (!(s > 0.0))
        throw DivergenceError("square function integral diverges at u -> infinity for s <= 0 (integrand ~ u^{-1-2s})");
    if (!(s < 2.0 * K))
        throw DivergenceError("square function integral diverges at u -> 0 for s >= 2K (integrand ~ u^{4K-1-2s})");
    // u = e^t: int (1 - e^{-e^{2t}})^{2K} e^{-2st} dt over the real line
    const auto g = [s, K](double t) { return std::pow(-std::expm1(-std::exp(2.0 * t)), 2 * K) * std::exp(-2.0 * s * t); };
    const double t_left = 0.5 * std::log(1e-8);
    const double t_right = 2.0;
    const AdaptiveResult left = integrate_adaptive(g, t_left, 0.0, 1e-300, 1e-13, 60);
    const AdaptiveResult right = integrate_adaptive(g, 0.0, t_right, 1e-300, 1e-13, 60);
    // below t_left: (1-e^{-x})^{2K} = x^{2K}(1 - K x + O(x^2)), x = e^{2t}
    const double a = 4.0 * K - 2.0 * s;
    const double left_tail = std::exp(a * t_left) / a - K * std::exp((a + 2.0) * t_left) / (a + 2.0);
    // above t_right the bracket is 1 to double precision (e^{-e^4} ~ 1e-24)
    const double right_tail = std::exp(-2.0 * s * t_right) / (2.0 * s);
    if (!left.converged || !right.converged)
        throw DivergenceError("square function integral: adaptive quadrature did not converge");
    return {left_tail + left.value + right.value + right_tail, left.error + right.error};
}

double square_function_constant(double s, int K) { return std::sqrt(square_function_integral(s, K).value); }

double square_function_norm(const SpectralVector& v, double s, int K) {
    return square_function_constant(s, K) * std::sqrt(weighted_square_sum(v, s));
}

double kappa_constant(double s, int K) {
    // psi(t) = t^{-s}(1-e^{-t^2})^K, |psi|^2 dt/t is the same integrand
    return std::sqrt(square_function_integral(s, K).value);
}

double kappa_inequality_ratio(const SpectralVector& v, double s, int K) {
    const SpectralVector g = fractional_H(v, -s / 2.0);
    return square_function_norm(g, s, K) / (kappa_constant(s, K) * v.norm());
}

// ---- partition bump ----

PartitionBump::PartitionBump(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("PartitionBump: dimension out of range");
}

double PartitionBump::c0() const { return std::pow(3.0, dim_); }

namespace {

// smooth step 0 -> 1 over [-1/2, 1/2], the CDF of the mollifier
double smooth_step(double u) {
    const double t = u + 0.5;
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

}  // namespace

double PartitionBump::profile(double x) { return smooth_step(x + 1.5) - smooth_step(x - 1.5); }

double PartitionBump::operator()(std::span<const double> x) const {
    double v = 1.0;
    for (double xi : x) v *= profile(xi);
    return v;
}

double PartitionBump::translate(std::span<const int> m, std::span<const double> x) const {
    double v = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) v *= profile(x[j] + m[j]);
    return v;
}

std::pair<double, double> PartitionBump::square_sum_range() const {
    // periodic in x with period 1; scan one period finely
    double lo = 1e300, hi = 0.0;
    const int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
        const double x = static_cast<double>(i) / samples;
        double acc = 0.0;
        for (int m = -4; m <= 4; ++m) acc += profile(x + m) * profile(x + m);
        lo = std::min(lo, acc);
        hi = std::max(hi, acc);
    }
    return {std::pow(lo, dim_), std::pow(hi, dim_)};
}

// ---- localization ----

int default_lattice_cutoff(int truncation, Basis basis) {
    const double turning = basis == Basis::paper_hermite ? std::sqrt(2.0 * truncation + 1.0)
                                                         : std::sqrt(truncation + 0.5);
    return static_cast<int>(std::ceil(turning)) + 5;
}

namespace {

// B[b * (N+1) + a] = int h_b(x) h_a(x) eta(x + m) dx, b <= Np, a <= N
std::vector<double> bump_matrix(int m, int N, int Np, Basis basis) {
    const LegendreRule gl = gauss_legendre(20);
    const double lo = -m - 2.0;
    const int panels = 16;
    const double h = 4.0 / panels;
    std::vector<double> x, w;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * h;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double xi = a + 0.5 * h * (gl.nodes[i] + 1.0);
            x.push_back(xi);
            w.push_back(0.5 * h * gl.weights[i] * PartitionBump::profile(xi + m));
        }
    }
    const std::size_t nq = x.size();
    const auto table = hermite_table(Np, x, basis);
    const std::size_t cols = static_cast<std::size_t>(N) + 1;
    std::vector<double> out((static_cast<std::size_t>(Np) + 1) * cols);
    for (int b = 0; b <= Np; ++b) {
        const double* rb = table.data() + static_cast<std::size_t>(b) * nq;
        for (int a = 0; a <= N; ++a) {
            const double* ra = table.data() + static_cast<std::size_t>(a) * nq;
            double acc = 0.0;
            for (std::size_t q = 0; q < nq; ++q) acc += w[q] * rb[q] * ra[q];
            out[static_cast<std::size_t>(b) * cols + static_cast<std::size_t>(a)] = acc;
        }
    }
    return out;
}

}  // namespace

LocalizationResult localization_norm(const SpectralVector& v, SmoothnessOrder s, const PartitionBump& bump,
                                     int lattice_cutoff, int projection_N) {
    if (!is_hermite(v.basis())) throw std::invalid_argument("localization_norm: Hermite vector required");
    if (bump.dim() != v.dim()) throw std::invalid_argument("localization_norm: bump dimension mismatch");
    const int n = v.dim();
    const int N = v.truncation();
    const int M = lattice_cutoff > 0 ? lattice_cutoff : default_lattice_cutoff(N, v.basis());
    const int Np = projection_N > 0 ? projection_N : 4 * N + 64;
    if (Np < N) throw std::invalid_argument("localization_norm: projection truncation below N");

    std::vector<std::vector<double>> mats(static_cast<std::size_t>(2 * M + 1));
    parallel_for(mats.size(), [&](std::size_t i) { mats[i] = bump_matrix(static_cast<int>(i) - M, N, Np, v.basis()); });

    // dense (N+1)^n box holding v
    const std::size_t in_side = static_cast<std::size_t>(N) + 1;
    const std::size_t out_side = static_cast<std::size_t>(Np) + 1;
    std::size_t box = 1;
    for (int j = 0; j < n; ++j) box *= in_side;
    std::vector<Complex> dense(box);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t idx = 0;
        for (int j = 0; j < n; ++j) idx = idx * in_side + static_cast<std::size_t>(v.indices()[i][j]);
        dense[idx] = v[i];
    }
    const auto weights = eigen_powers(n, Np * n, s);

    std::size_t cells = 1;
    for (int j = 0; j < n; ++j) cells *= static_cast<std::size_t>(2 * M + 1);
    std::vector<double> cell_norm2(cells);
    parallel_for(cells, [&](std::size_t c) {
        std::array<int, kMaxDim> m{};
        std::size_t rest = c;
        for (int j = n - 1; j >= 0; --j) {
            m[static_cast<std::size_t>(j)] = static_cast<int>(rest % static_cast<std::size_t>(2 * M + 1)) - M;
            rest /= static_cast<std::size_t>(2 * M + 1);
        }
        // contract one axis at a time: dims go from in_side to out_side
        std::vector<Complex> cur = dense;
        std::vector<std::size_t> dims(static_cast<std::size_t>(n), in_side);
        for (int j = 0; j < n; ++j) {
            const auto& B = mats[static_cast<std::size_t>(m[static_cast<std::size_t>(j)] + M)];
            std::size_t outer = 1, inner = 1;
            for (int k = 0; k < j; ++k) outer *= dims[static_cast<std::size_t>(k)];
            for (int k = j + 1; k < n; ++k) inner *= dims[static_cast<std::size_t>(k)];
            std::vector<Complex> next(outer * out_side * inner);
            for (std::size_t o = 0; o < outer; ++o)
                for (std::size_t b = 0; b < out_side; ++b) {
                    Complex* dst = next.data() + (o * out_side + b) * inner;
                    for (std::size_t a = 0; a < in_side; ++a) {
                        const double f = B[b * in_side + a];
                        const Complex* src = cur.data() + (o * in_side + a) * inner;
                        for (std::size_t r = 0; r < inner; ++r) dst[r] += f * src[r];
                    }
                }
            cur.swap(next);
            dims[static_cast<std::size_t>(j)] = out_side;
        }
        double acc = 0.0;
        for (std::size_t idx = 0; idx < cur.size(); ++idx) {
            std::size_t rest2 = idx;
            int order = 0;
            for (int j = 0; j < n; ++j) {
                order += static_cast<int>(rest2 % out_side);
                rest2 /= out_side;
            }
            if (order > Np) continue;  // graded truncation
            acc += weights[static_cast<std::size_t>(order)] * std::norm(cur[idx]);
        }
        cell_norm2[c] = acc;
    });

    double total = 0.0, boundary = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        total += cell_norm2[c];
        std::size_t rest = c;
        bool edge = false;
        for (int j = 0; j < n; ++j) {
            const int mj = static_cast<int>(rest % static_cast<std::size_t>(2 * M + 1)) - M;
            rest /= static_cast<std::size_t>(2 * M + 1);
            edge = edge || std::abs(mj) == M;
        }
        if (edge) boundary += cell_norm2[c];
    }
    LocalizationResult r;
    r.norm = std::sqrt(total);
    r.boundary_fraction = total > 0.0 ? boundary / total : 0.0;
    r.lattice_cutoff = M;
    r.projection_truncation = Np;
    r.boundary_warning = r.boundary_fraction > 1e-6;
    return r;
}

// ---- potential probe ----

double potential_bound_probe(const SpectralVector& v, SmoothnessOrder s) {
    if (!is_hermite(v.basis())) throw std::invalid_argument("potential_bound_probe: Hermite vector required");
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    if (s.value() == 0.0) return 1.0;
    const double two_s = 2.0 * s;
    const bool polynomial = std::abs(two_s - std::round(two_s)) < 1e-12;
    const double sigma = product_scale(v.basis());
    QuadratureGrid grid;
    if (polynomial) {
        grid = gauss_hermite(v.truncation() + static_cast<int>(std::ceil(two_s)) + 2, sigma, v.dim());
    } else if (v.dim() == 1) {
        // |x|^{4s} is only Holder at 0: Legendre panels graded toward it
        const double halfwidth = (std::sqrt(2.0 * v.truncation() + 1.0) + 9.0) / std::sqrt(sigma);
        std::vector<double> breaks{0.0};
        for (int j = 1; j <= 40; ++j) {
            breaks.push_back(std::ldexp(1.0, -j));
            breaks.push_back(-std::ldexp(1.0, -j));
        }
        grid = piecewise_legendre(halfwidth, breaks, 0.5, 16, sigma);
    } else {
        grid = gauss_hermite(v.truncation() + static_cast<int>(std::ceil(two_s)) + 48, sigma, v.dim());
    }
    const SpectralVector g = fractional_H(v, -s);
    const auto samples = synthesize_on_grid(g, grid);
    double acc = 0.0;
    for (std::size_t q = 0; q < grid.size(); ++q) {
        double r2 = 0.0;
        for (double xi : grid.point(q)) r2 += xi * xi;
        acc += grid.plain_weights[q] * std::pow(r2, two_s) * std::norm(samples[q]);
    }
    return std::sqrt(acc) / vn;
}

// ---- ladder norm ----

double ladder_norm(const SpectralVector& v, int k) {
    if (k < 0) throw std::invalid_argument("ladder_norm: negative order");
    const int n = v.dim();
    double total = v.norm();
    std::function<void(const SpectralVector&, int)> walk = [&](const SpectralVector& w, int depth) {
        if (depth == k) return;
        for (int j = 0; j < n; ++j) {
            for (LadderDirection d : {LadderDirection::lower, LadderDirection::raise}) {
                const SpectralVector next = ladder(w, d, j).vector;
                total += next.norm();
                walk(next, depth + 1);
            }
        }
    };
    walk(v.with_truncation(v.truncation() + k), 0);
    return total;
}

}  // namespace focklab
