#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "focklab/spaces.hpp"
#include "focklab/transforms.hpp"
#include "oracles.hpp"

using namespace focklab;
using std::numbers::pi;

namespace {

const Basis B = Basis::bargmann_hermite;
const Basis P = Basis::paper_hermite;

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("focklab_test_" + name);
}

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace

TEST_CASE("fourier on coefficients") {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 3; ++n) {
        const auto v = SpectralVector::random(n, 10, 10, B, rng);
        const auto f4 = fourier(fourier(fourier(fourier(v))));
        CHECK((f4 - v).norm() == 0.0);
        CHECK((inverse_fourier(fourier(v)) - v).norm() == 0.0);
        for (double s : {0.0, 1.0, 2.5})
            CHECK(sobolev_norm(fourier(v), SmoothnessOrder(s)) == doctest::Approx(sobolev_norm(v, SmoothnessOrder(s))).epsilon(1e-15));
    }
    CHECK_THROWS_AS(fourier(SpectralVector(1, 4, P)), std::invalid_argument);
}

TEST_CASE("fourier quadrature reproduces the eigenfunction relation") {
    const QuadratureGrid grid = gauss_hermite(160, 1.0, 1);
    std::vector<double> xs;
    for (int i = -6; i <= 6; ++i) xs.push_back(0.37 * i);
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k) {
        auto f = [k](std::span<const double> y) { return eval_hermite(k, y[0], B); };
        const auto got = fourier_quadrature(f, xs, grid);
        const Complex eig = std::pow(Complex(0.0, -1.0), k);
        for (std::size_t p = 0; p < xs.size(); ++p)
            worst = std::max(worst, std::abs(got[p] - eig * eval_hermite(k, xs[p], B)));
    }
    CHECK(worst <= 1e-8);

    // h^_0 is a fixed point
    auto g = [](std::span<const double> y) { return eval_hermite(0, y[0], B); };
    const std::vector<double> x0{0.0, 0.5, -1.3};
    const auto fixed = fourier_quadrature(g, x0, grid);
    for (std::size_t p = 0; p < x0.size(); ++p) CHECK(std::abs(fixed[p] - eval_hermite(0, x0[p], B)) <= 1e-8);
}

TEST_CASE("bargmann and its inverse") {
    std::mt19937_64 rng(12);
    const auto v = SpectralVector::random(2, 8, 8, B, rng);
    const auto fv = bargmann(v);
    CHECK(fv.basis() == Basis::fock);
    CHECK((inverse_bargmann(fv) - v).norm() == 0.0);
    for (double s : {0.0, 1.5}) CHECK(sobolev_norm(fv, SmoothnessOrder(s)) == sobolev_norm(v, SmoothnessOrder(s)));
    CHECK_THROWS_AS(bargmann(SpectralVector(1, 3, P)), std::invalid_argument);
    CHECK_THROWS_AS(inverse_bargmann(v), std::invalid_argument);

    // rotation conjugation: B F B^{-1} = diag((-i)^{|alpha|})
    const auto rot = rotation_matrix(2, 8);
    CHECK((rot.apply(fv) - bargmann(fourier(v))).norm() == 0.0);
}

TEST_CASE("bargmann quadrature matches e_alpha") {
    const QuadratureGrid grid = gauss_hermite(140, 2.0, 1);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> r(0.0, 2.0), th(0.0, 2.0 * pi);
    double worst = 0.0;
    for (int p = 0; p < 25; ++p) {
        const Complex z = std::polar(r(rng), th(rng));
        const auto mono = fock_monomials(10, z);
        for (int k = 0; k <= 10; ++k) {
            auto f = [k](std::span<const double> x) { return eval_hermite(k, x[0], B); };
            const Complex zs[1] = {z};
            worst = std::max(worst, std::abs(bargmann_quadrature(f, zs, grid) - mono[static_cast<std::size_t>(k)]));
        }
    }
    CHECK(worst <= 1e-8);
    const Complex z0[1] = {Complex(0.5, 0.3)};
    auto h0 = [](std::span<const double> x) { return eval_hermite(0, x[0], B); };
    CHECK(std::abs(bargmann_quadrature(h0, z0, grid) - 1.0) <= 1e-8);

    // 2D: e_(1,2)
    const QuadratureGrid g2 = gauss_hermite(60, 2.0, 2);
    const Complex z2[2] = {Complex(0.3, -0.4), Complex(-0.6, 0.2)};
    auto h12 = [](std::span<const double> x) { return eval_hermite(1, x[0], B) * eval_hermite(2, x[1], B); };
    const Complex expect = fock_monomials(1, z2[0])[1] * fock_monomials(2, z2[1])[2];
    CHECK(std::abs(bargmann_quadrature(h12, z2, g2) - expect) <= 1e-8);
}

TEST_CASE("translation matrix") {
    const double zero[1] = {0.0};
    const auto t0 = translation_matrix(zero, 12);
    CHECK(max_abs_diff(t0, OperatorMatrix::identity(1, 12, B)) <= 1e-14);

    for (double a : {0.3, -0.8, 1.5}) {
        const double av[1] = {a};
        CHECK(translation_matrix(av, 20)(0, 0).real() == doctest::Approx(std::exp(-a * a / 2.0)).epsilon(1e-13));
        // PaperH h_0 has weight e^{-x^2/2}: overlap e^{-a^2/4}
        CHECK(translation_matrix(av, 20, P)(0, 0).real() == doctest::Approx(std::exp(-a * a / 4.0)).epsilon(1e-13));
    }

    // entry oracle by direct integration
    const double a1[1] = {0.7};
    const auto t = translation_matrix(a1, 10);
    for (int al : {0, 3, 7})
        for (int be : {1, 4, 9}) {
            const double ref = oracle::integrate_line([&](double x) {
                return eval_hermite(be, x - 0.7, B).real() * eval_hermite(al, x, B).real();
            });
            CHECK(std::abs(t(static_cast<std::size_t>(al), static_cast<std::size_t>(be)).real() - ref) <= 1e-12);
        }

    // group law on the interior block
    for (int n = 1; n <= 2; ++n) {
        const std::vector<double> a(static_cast<std::size_t>(n), 0.4), b(static_cast<std::size_t>(n), -0.25),
            ab(static_cast<std::size_t>(n), 0.15);
        const int N = n == 1 ? 40 : 24;
        const auto prod = translation_matrix(a, N) * translation_matrix(b, N);
        CHECK(interior_distance(prod, translation_matrix(ab, N), N / 2) <= 1e-10);
    }

    // unitarity, improving in N until the roundoff floor
    const double a2[1] = {1.0};
    double prev = 1.0;
    for (int N : {8, 16, 32, 48}) {
        const auto m = translation_matrix(a2, N);
        const double d = unitarity_defect(m, N / 2);
        if (N >= 32) CHECK(d <= 1e-4);
        CHECK((d < prev || d <= 1e-13));
        prev = d;
    }

    // large shift at tiny N warns
    const double far[1] = {6.0};
    CHECK_FALSE(translation_matrix(far, 6).warnings.empty());
    CHECK(translation_matrix(a2, 32).warnings.empty());
}

TEST_CASE("weyl matrix") {
    const Complex zero[1] = {0.0};
    CHECK(max_abs_diff(weyl_matrix(zero, 10), OperatorMatrix::identity(1, 10, Basis::fock)) <= 1e-15);

    const Complex a[2] = {Complex(0.4, -0.3), Complex(-0.2, 0.5)};
    const auto w = weyl_matrix(a, 8);
    const double pref = std::exp(-0.5 * (std::norm(a[0]) + std::norm(a[1])));
    for (std::size_t i = 0; i < w.size(); ++i) {
        const MultiIndex& al = w.indices()[i];
        const Complex expect = pref * std::pow(std::conj(a[0]), al[0]) * std::pow(std::conj(a[1]), al[1]) /
                               std::sqrt(static_cast<double>(al.factorial()));
        CHECK(std::abs(w(i, 0) - expect) <= 1e-14);
    }

    // 1D entries against a 2-dim quadrature of the Fock inner product
    const Complex a1[1] = {Complex(0.5, 0.3)};
    const auto w1 = weyl_matrix(a1, 8);
    const QuadratureGrid g = gauss_hermite(80, 1.0, 2);
    auto e = [](int k, Complex z) { return fock_monomials(k, z)[static_cast<std::size_t>(k)]; };
    for (int m : {0, 2, 5})
        for (int be : {0, 3, 6}) {
            Complex acc = 0.0;
            for (std::size_t q = 0; q < g.size(); ++q) {
                const auto p = g.point(q);
                const Complex z(p[0], p[1]);
                const Complex img = e(be, z - a1[0]) * std::exp(-0.5 * std::norm(a1[0]) + z * std::conj(a1[0]));
                acc += g.weights[q] * img * std::conj(e(m, z));
            }
            CHECK(std::abs(w1(static_cast<std::size_t>(m), static_cast<std::size_t>(be)) - acc / pi) <= 1e-10);
        }

    // bounded growth in |a|
    std::mt19937_64 rng(14);
    const auto v = SpectralVector::random(1, 10, 10, Basis::fock, rng);
    for (double s : {0.0, 1.0, 2.0}) {
        double lo = 1e9, hi = 0.0;
        for (double r : {0.25, 0.5, 1.0, 2.0, 3.0}) {
            const Complex ar[1] = {Complex(r * 0.6, r * 0.8)};
            const double q = weyl_bound_ratio(ar, v, s);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        CHECK(hi / lo < 20.0);
        if (s == 0.0) CHECK(hi <= 1.0 + 1e-10);
    }
}

TEST_CASE("translation is the Weyl operator under the Bargmann transform") {
    const double zero[1] = {0.0};
    CHECK(conjugation_check(zero, 16).defect <= 1e-14);
    const double a[1] = {0.7};
    const auto r = conjugation_check(a, 32);
    CHECK(r.defect <= 1e-6);
    CHECK(r.interior_order == 16);
    const double a2[2] = {0.5, -0.3};
    CHECK(conjugation_check(a2, 16).defect <= 1e-6);

    // monotone over N until the roundoff floor
    const double big[1] = {2.0};
    double prev = 1.0;
    for (int N : {16, 32, 48}) {
        const double d = conjugation_check(big, N).defect;
        CHECK((d < prev || d <= 1e-12));
        prev = d;
    }
}

TEST_CASE("ladder factors commute with translation") {
    const double zero[1] = {0.0};
    const auto h2 = SpectralVector::unit(MultiIndex{2}, 32, P);
    CHECK(translation_ladder_check(zero, {1}, h2).defect <= 1e-13);
    const double a[1] = {0.5};
    CHECK(translation_ladder_check(a, {1}, h2).defect <= 1e-6);
    CHECK(translation_ladder_check(a, {-1}, h2).defect <= 1e-6);

    std::mt19937_64 rng(15);
    const auto v2 = SpectralVector::random(2, 20, 8, P, rng);
    const double a2[2] = {0.4, -0.6};
    for (int j : {1, -1, 2, -2}) CHECK(translation_ladder_check(a2, {j}, v2).defect <= 1e-6);
    for (int j1 : {1, -2})
        for (int j2 : {-1, 2}) CHECK(translation_ladder_check2(a2, {j1}, {j2}, v2).defect <= 1e-6);

    CHECK_THROWS_AS(translation_ladder_check(a, {1}, SpectralVector(1, 4, B)), std::invalid_argument);
    CHECK_THROWS_AS(translation_ladder_check(a, {2}, h2), std::invalid_argument);
}

TEST_CASE("leibniz rule") {
    std::mt19937_64 rng(16);
    const auto f = SpectralVector::random(1, 8, 8, P, rng);
    // constants are not in L^2; the linear degenerate case is g = 0
    CHECK(leibniz_check(f, SpectralVector(1, 8, P), {1}).defect <= 1e-10);

    const auto h0 = SpectralVector::unit(MultiIndex{0}, 8, P);
    CHECK(leibniz_check(h0, h0, {1}).defect <= 1e-8);
    CHECK(leibniz_check(h0, h0, {-1}).defect <= 1e-8);

    // products of Hermite functions carry an infinite tail; lowering pulls
    // in the first dropped coefficient, raising does not
    const auto g = SpectralVector::random(1, 8, 8, P, rng);
    double prev = 1e300;
    for (int K : {16, 32, 48, 64, 96}) {
        const double d = leibniz_check(f, g, {1}, K).defect;
        CHECK(d < prev);
        prev = d;
        CHECK(leibniz_check(f, g, {-1}, K).defect <= 1e-12);
    }
    CHECK(prev <= 1e-9);

    const auto f2 = SpectralVector::random(2, 6, 6, P, rng);
    const auto g2 = SpectralVector::random(2, 6, 6, P, rng);
    for (int j : {1, -1, 2, -2}) CHECK(leibniz_check(f2, g2, {j}, 96).defect <= 1e-10);
}

TEST_CASE("ladder eigenvalue shift") {
    std::mt19937_64 rng(17);
    for (int n = 1; n <= 3; ++n) {
        const auto v = SpectralVector::random(n, 10, 10, P, rng);
        for (int j : {1, -1, n, -n})
            for (double p : {0.5, 1.0, 2.0}) CHECK(ladder_shift_defect(v, {j}, p) <= 1e-10 * sobolev_norm(v, SmoothnessOrder(2.0 * p + 2.0)));
    }
}

TEST_CASE("operator matrix algebra and norms") {
    std::mt19937_64 rng(18);
    const auto id = OperatorMatrix::identity(2, 6, B);
    for (double s : {0.0, 1.0, 3.0}) CHECK(operator_norm(id, s).value == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<Complex> diag(id.size());
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = Complex(0.1 * static_cast<double>(i), 0.5);
    const auto dm = OperatorMatrix::diagonal(2, 6, B, diag);
    CHECK(operator_norm(dm, 2.0).value == doctest::Approx(std::abs(diag.back())).epsilon(1e-8));

    // random matrix against a dense SVD
    OperatorMatrix a(1, 14, B);
    std::normal_distribution<double> nd;
    for (auto& x : a.data()) x = Complex(nd(rng), nd(rng));
    for (double s : {0.0, 1.0}) {
        Eigen::MatrixXcd m(a.size(), a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) {
                const double di = 2.0 * a.indices()[i].order() + 1.0, dj = 2.0 * a.indices()[j].order() + 1.0;
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    a(i, j) * std::pow(di, s / 2.0) * std::pow(dj, -s / 2.0);
            }
        const double ref = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
        const auto r = operator_norm(a, s, {1e-13, 100000, 7});
        CHECK(r.value == doctest::Approx(ref).epsilon(1e-6));
        CHECK(r.upper >= r.value);
    }

    // adjoint consistency
    const auto v = SpectralVector::random(1, 14, 14, B, rng);
    const auto u = SpectralVector::random(1, 14, 14, B, rng);
    Complex lhs = 0.0, rhs = 0.0;
    const auto av = a.apply(v), ahu = a.apply_adjoint(u);
    for (std::size_t i = 0; i < v.size(); ++i) {
        lhs += av[i] * std::conj(u[i]);
        rhs += v[i] * std::conj(ahu[i]);
    }
    CHECK(std::abs(lhs - rhs) <= 1e-11);
    CHECK((a.adjoint().apply(u) - ahu).norm() <= 1e-12);

    // product against apply
    const auto prod = a * a.adjoint();
    CHECK((prod.apply(v) - a.apply(a.apply_adjoint(v))).norm() <= 1e-10);
}

TEST_CASE("matrix serialization round trips") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> nd;
    OperatorMatrix a(2, 5, Basis::fock, 1.5, 0.25);
    for (auto& x : a.data()) x = Complex(nd(rng), nd(rng)) * 1e-3;
    const auto bin = temp_file("m.bin");
    const auto csv = temp_file("m.csv");
    write_binary(a, bin);
    write_csv(a, csv);
    for (const auto& b : {read_binary(bin), read_csv(csv)}) {
        CHECK(b.dim() == 2);
        CHECK(b.truncation() == 5);
        CHECK(b.basis() == Basis::fock);
        CHECK(b.s_domain() == 1.5);
        CHECK(b.s_codomain() == 0.25);
        CHECK(max_abs_diff(a, b) == 0.0);
    }
    {
        std::ofstream out(bin, std::ios::binary | std::ios::app);
        out.put('x');
    }
    CHECK_THROWS(read_binary(bin));
    CHECK_THROWS(read_binary(temp_file("does_not_exist.bin")));
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}
