#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>

#include "focklab/error.hpp"
#include "focklab/hermite.hpp"
#include "focklab/multi_index.hpp"
#include "focklab/quadrature.hpp"
#include "focklab/spectral_vector.hpp"
#include "oracles.hpp"

using namespace focklab;
using std::numbers::pi;
using std::numbers::sqrt2;

TEST_CASE("multi-index enumeration is graded, total and duplicate-free") {
    for (int n = 1; n <= 3; ++n) {
        for (int N : {0, 1, 5, 12}) {
            const IndexSet set(n, N);
            CHECK(set.size() == graded_count(n, N));
            std::set<std::uint64_t> seen;
            int prev = 0;
            for (std::size_t i = 0; i < set.size(); ++i) {
                const MultiIndex& a = set[i];
                int sum = 0;
                for (int j = 0; j < n; ++j) sum += a[j];
                CHECK(sum == a.order());
                CHECK(a.order() >= prev);
                CHECK(a.order() <= N);
                prev = a.order();
                CHECK(seen.insert(a.key()).second);
                CHECK(set.position(a) == i);
            }
            for (int k = 0; k <= N; ++k) CHECK(set[set.prefix_size(k) - 1].order() == k);
        }
    }
    const MultiIndex a{3, 2};
    CHECK(a.factorial() == 12.0L);
    CHECK(a.log_factorial() == doctest::Approx(std::log(12.0)));
    CHECK(IndexSet(2, 4).position(MultiIndex{3, 2}) == IndexSet::npos);
}

TEST_CASE("gauss_hermite small rules") {
    const QuadratureGrid g1 = gauss_hermite(1, 1.0, 1);
    REQUIRE(g1.size() == 1);
    CHECK(g1.nodes[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(g1.weights[0] == doctest::Approx(std::sqrt(pi)).epsilon(1e-15));

    const QuadratureGrid g2 = gauss_hermite(2, 1.0, 1);
    REQUIRE(g2.size() == 2);
    CHECK(std::abs(std::abs(g2.nodes[0]) - 1.0 / sqrt2) <= 1e-15);
    CHECK(g2.nodes[0] == doctest::Approx(-g2.nodes[1]));
    for (double w : g2.weights) CHECK(w == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-15));

    double m2 = 0.0;
    for (std::size_t q = 0; q < 2; ++q) m2 += g2.weights[q] * g2.nodes[q] * g2.nodes[q];
    CHECK(m2 == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-15));
}

TEST_CASE("gauss_hermite exactness, weight sums and scaling") {
    for (double sigma : {1.0, 2.0, 0.5}) {
        for (int Q : {3, 10, 40, 128, 300}) {
            CAPTURE(sigma);
            CAPTURE(Q);
            const QuadratureGrid g = gauss_hermite(Q, sigma, 1);
            double total = 0.0;
            for (double w : g.weights) total += w;
            CHECK(std::abs(total - std::sqrt(pi / sigma)) <= 1e-12 * std::sqrt(pi / sigma));
            // monomials up to degree min(2Q-1, 30), relative to the moment scale
            for (int k = 0; k <= std::min(2 * Q - 1, 30); ++k) {
                double acc = 0.0;
                for (std::size_t q = 0; q < g.size(); ++q) acc += g.weights[q] * std::pow(g.nodes[q], k);
                const double ref = oracle::gaussian_moment(k, sigma);
                const double mag = oracle::gaussian_moment(k + (k % 2), sigma);
                CHECK(std::abs(acc - ref) <= 1e-12 * mag);
            }
        }
    }
    const QuadratureGrid unit = gauss_hermite(24, 1.0, 1);
    const QuadratureGrid scaled = gauss_hermite(24, 2.0, 1);
    for (std::size_t q = 0; q < unit.size(); ++q) {
        CHECK(scaled.nodes[q] == doctest::Approx(unit.nodes[q] / sqrt2).epsilon(1e-14));
        CHECK(scaled.weights[q] == doctest::Approx(unit.weights[q] / sqrt2).epsilon(1e-12));
    }
    for (int n = 2; n <= 3; ++n) {
        const QuadratureGrid g = gauss_hermite(6, 2.0, n);
        CHECK(g.size() == static_cast<std::size_t>(std::pow(6, n)));
        double total = 0.0;
        for (double w : g.weights) total += w;
        CHECK(total == doctest::Approx(std::pow(pi / 2.0, n / 2.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gauss_hermite(513, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gauss_hermite(0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(gauss_hermite(4, -1.0, 1), std::invalid_argument);
    CHECK_NOTHROW(gauss_hermite(512, 1.0, 1));
}

TEST_CASE("gauss_legendre and adaptive quadrature") {
    const LegendreRule r = gauss_legendre(12);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], 22);
    CHECK(acc == doctest::Approx(2.0 / 23.0).epsilon(1e-14));
    const AdaptiveResult res =
        integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-13, 1e-13);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("eval_hermite examples") {
    CHECK(eval_hermite(0, 0.0, Basis::paper_hermite).real() == doctest::Approx(std::pow(pi, -0.25)).epsilon(1e-15));
    CHECK(std::pow(pi, -0.25) == doctest::Approx(0.751126).epsilon(1e-6));
    CHECK(std::abs(eval_hermite(1, 0.0, Basis::paper_hermite)) == 0.0);
    CHECK(eval_hermite(2, 0.0, Basis::paper_hermite).real() ==
          doctest::Approx(-1.0 / (sqrt2 * std::pow(pi, 0.25))).epsilon(1e-15));
    CHECK(eval_hermite(2, 0.0, Basis::paper_hermite).real() == doctest::Approx(-0.531126).epsilon(1e-6));
    CHECK(eval_hermite(0, 0.0, Basis::bargmann_hermite).real() ==
          doctest::Approx(std::pow(2.0 / pi, 0.25)).epsilon(1e-15));
}

TEST_CASE("eval_hermite matches an extended-precision oracle") {
    // relative error against max(|h_k(x)|, local envelope); the envelope is
    // the root-mean-square of h_{k-1}, h_k, h_{k+1}, which stays meaningful
    // at zeros of h_k where a plain relative error is undefined
    double worst = 0.0;
    for (int k : {0, 1, 2, 5, 17, 50, 99, 150, 200}) {
        for (double x : {-20.0, -13.7, -7.25, -1.0, -0.3, 0.0, 0.4, 2.5, 9.1, 14.0, 19.5, 20.0}) {
            const auto vals = eval_hermite_all(k + 1, x, Basis::paper_hermite);
            const double ref = oracle::hermite_function(k, x).real();
            const double refm = k > 0 ? oracle::hermite_function(k - 1, x).real() : 0.0;
            const double refp = oracle::hermite_function(k + 1, x).real();
            const double env = std::max(std::abs(ref), std::sqrt((refm * refm + ref * ref + refp * refp) / 3.0));
            if (env < 1e-300) continue;
            const double rel = std::abs(vals[static_cast<std::size_t>(k)].real() - ref) / env;
            worst = std::max(worst, rel);
            CAPTURE(k);
            CAPTURE(x);
            CHECK(rel <= 1e-12);
        }
    }
    MESSAGE("worst relative error " << worst);
}

TEST_CASE("complex evaluation and overflow guard") {
    const std::complex<double> z(0.5, 0.3);
    for (int k : {0, 3, 10, 25}) {
        CHECK(std::abs(eval_hermite(k, z, Basis::paper_hermite) - oracle::hermite_function(k, z)) <= 1e-13);
        CHECK(std::abs(eval_hermite(k, z, Basis::bargmann_hermite) - oracle::bargmann_hermite_function(k, z)) <=
              1e-13);
    }
    CHECK_THROWS_AS(eval_hermite(4, std::complex<double>(0.0, 60.0), Basis::paper_hermite), RangeError);
    CHECK_NOTHROW(eval_hermite(4, std::complex<double>(0.0, 30.0), Basis::paper_hermite));
}

TEST_CASE("hermite_table agrees with the complex recurrence") {
    const std::vector<double> pts{-6.0, -1.5, 0.0, 0.2, 3.3, 8.0};
    for (Basis b : {Basis::paper_hermite, Basis::bargmann_hermite}) {
        const auto table = hermite_table(40, pts, b);
        for (std::size_t q = 0; q < pts.size(); ++q) {
            const auto ref = eval_hermite_all(40, pts[q], b);
            for (int k = 0; k <= 40; ++k)
                CHECK(table[static_cast<std::size_t>(k) * pts.size() + q] ==
                      doctest::Approx(ref[static_cast<std::size_t>(k)].real()).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("orthonormality under matched quadrature") {
    for (Basis b : {Basis::paper_hermite, Basis::bargmann_hermite}) {
        for (int n = 1; n <= 2; ++n) {
            const int N = n == 1 ? 60 : 14;
            const QuadratureGrid g = gauss_hermite(N + 1, product_scale(b), n);
            const auto set = IndexSet::get(n, N);
            const auto table = basis_table(*set, g, b);
            double worst = 0.0;
            for (std::size_t i = 0; i < set->size(); ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    double acc = 0.0;
                    for (std::size_t q = 0; q < g.size(); ++q)
                        acc += g.plain_weights[q] * table[i * g.size() + q] * table[j * g.size() + q];
                    worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
                }
            }
            CAPTURE(n);
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("project examples") {
    const Basis B = Basis::bargmann_hermite;
    const QuadratureGrid g = gauss_hermite(24, 2.0, 1);

    SUBCASE("unit vector") {
        const SpectralVector v =
            project([](std::span<const double> x) { return eval_hermite(3, x[0], Basis::bargmann_hermite); }, 8, g, B);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - (i == 3 ? 1.0 : 0.0)) <= 1e-10);
    }
    SUBCASE("linearity") {
        const SpectralVector v = project(
            [](std::span<const double> x) {
                return eval_hermite(0, x[0], Basis::bargmann_hermite) + 2.0 * eval_hermite(5, x[0], Basis::bargmann_hermite);
            },
            8, g, B);
        CHECK(std::abs(v[0] - 1.0) <= 1e-12);
        CHECK(std::abs(v[5] - 2.0) <= 1e-12);
        CHECK(std::abs(v[1]) + std::abs(v[4]) <= 1e-12);
    }
    SUBCASE("x times the ground state") {
        // <x hat h_0, hat h_1> = int x (2/pi)^{1/2} 2 x e^{-2x^2} dx = 1/2 in the
        // Bargmann convention; 1/sqrt 2 belongs to the paper convention
        const double bargmann_ref = oracle::integrate_line([](double x) {
            return x * oracle::bargmann_hermite_function(0, x).real() * oracle::bargmann_hermite_function(1, x).real();
        });
        const double paper_ref = oracle::integrate_line([](double x) {
            return x * oracle::hermite_function(0, x).real() * oracle::hermite_function(1, x).real();
        });
        CHECK(bargmann_ref == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(paper_ref == doctest::Approx(1.0 / sqrt2).epsilon(1e-12));

        const SpectralVector vb = project(
            [](std::span<const double> x) { return x[0] * eval_hermite(0, x[0], Basis::bargmann_hermite); }, 8, g, B);
        CHECK(vb[1].real() == doctest::Approx(bargmann_ref).epsilon(1e-12));
        const QuadratureGrid g1 = gauss_hermite(24, 1.0, 1);
        const SpectralVector vp = project(
            [](std::span<const double> x) { return x[0] * eval_hermite(0, x[0], Basis::paper_hermite); }, 8, g1,
            Basis::paper_hermite);
        CHECK(vp[1].real() == doctest::Approx(paper_ref).epsilon(1e-12));
    }
    SUBCASE("scale and order checks") {
        const auto f = [](std::span<const double>) { return Complex(1.0); };
        CHECK_THROWS_AS(project(f, 8, gauss_hermite(24, 1.0, 1), B), std::invalid_argument);
        CHECK_THROWS_AS(project(f, 8, gauss_hermite(8, 2.0, 1), B), std::invalid_argument);
        CHECK_THROWS_AS(project(f, 8, g, Basis::fock), std::invalid_argument);
    }
}

TEST_CASE("project and synthesize round trip") {
    std::mt19937_64 rng(11);
    for (Basis b : {Basis::paper_hermite, Basis::bargmann_hermite}) {
        for (int n = 1; n <= 2; ++n) {
            const int N = n == 1 ? 20 : 10;
            const SpectralVector v = SpectralVector::random(n, N, N, b, rng);
            const QuadratureGrid g = gauss_hermite(N + 4, product_scale(b), n);
            const auto samples = synthesize_on_grid(v, g);
            const SpectralVector w = project_samples(samples, N, g, b);
            CHECK((w - v).norm() <= 1e-10 * v.norm());
            // pointwise synthesis agrees with the grid path
            for (std::size_t q = 0; q < g.size(); q += 7) CHECK(std::abs(synthesize(v, g.point(q)) - samples[q]) <= 1e-12);
        }
    }
}

TEST_CASE("synthesize at a complex point vs extended precision") {
    std::mt19937_64 rng(5);
    const SpectralVector v = SpectralVector::random(1, 20, 20, Basis::bargmann_hermite, rng);
    const std::complex<double> z(0.5, 0.3);
    std::complex<double> ref{};
    for (int k = 0; k <= 20; ++k) ref += v[static_cast<std::size_t>(k)] * oracle::bargmann_hermite_function(k, z);
    const std::complex<double> pt[1] = {z};
    CHECK(std::abs(synthesize(v, pt) - ref) <= 1e-10);

    const SpectralVector u = SpectralVector::unit(MultiIndex{4}, 10, Basis::paper_hermite);
    const double x[1] = {0.7};
    CHECK(std::abs(synthesize(u, x) - eval_hermite(4, 0.7, Basis::paper_hermite)) <= 1e-15);
}

TEST_CASE("ladder operators") {
    const Basis P = Basis::paper_hermite;
    SUBCASE("lowering annihilates the ground state") {
        const auto r = ladder(SpectralVector::unit(MultiIndex{0}, 8, P), LadderDirection::lower, 0);
        CHECK(r.vector.norm() == 0.0);
    }
    SUBCASE("raise from k = 3") {
        const auto r = ladder(SpectralVector::unit(MultiIndex{3}, 8, P), LadderDirection::raise, 0);
        CHECK(r.vector[4].real() == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
        CHECK(r.truncation_loss == 0.0);
        // <(-d/dx + x) h_3, h_4> by quadrature of the explicit derivative
        const QuadratureGrid g = gauss_hermite(30, 1.0, 1);
        double acc = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double x = g.nodes[q];
            const auto h = eval_hermite_all(4, x, P);
            // h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}
            const double dh3 = std::sqrt(1.5) * h[2].real() - std::sqrt(2.0) * h[4].real();
            acc += g.plain_weights[q] * (-dh3 + x * h[3].real()) * h[4].real();
        }
        CHECK(acc == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    }
    SUBCASE("raise at the truncation edge records the loss") {
        const auto r = ladder(SpectralVector::unit(MultiIndex{8}, 8, P), LadderDirection::raise, 0);
        CHECK(r.vector.norm() == 0.0);
        CHECK(r.truncation_loss == doctest::Approx(std::sqrt(18.0)));
    }
    SUBCASE("symmetrized composition is 2k+1 per axis") {
        for (int n = 1; n <= 3; ++n) {
            const int N = 6;
            const auto set = IndexSet::get(n, N);
            for (const MultiIndex& a : *set) {
                if (a.order() >= N) continue;  // keep the raise inside the truncation
                const SpectralVector e = SpectralVector::unit(a, N, P);
                for (int j = 0; j < n; ++j) {
                    const auto lr = ladder(ladder(e, LadderDirection::raise, j).vector, LadderDirection::lower, j);
                    const auto rl = ladder(ladder(e, LadderDirection::lower, j).vector, LadderDirection::raise, j);
                    const SpectralVector sym = 0.5 * (lr.vector + rl.vector);
                    const SpectralVector expect = Complex(2.0 * a[j] + 1.0) * e;
                    CHECK((sym - expect).norm() <= 4e-15 * (2.0 * a[j] + 1.0));
                }
            }
        }
    }
    SUBCASE("squared factors are integers") {
        for (int k = 0; k < 50; ++k) {
            const double up = std::sqrt(2.0 * k + 2.0);
            CHECK(up * up == doctest::Approx(2.0 * k + 2.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("differential consistency") {
    // (d/dx + x) h_k paired with h_{k-1}; derivative by complex step so
    // nothing depends on the ladder formulas
    const QuadratureGrid g = gauss_hermite(48, 1.0, 1);
    for (int k = 1; k <= 20; ++k) {
        double acc = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q) {
            const double x = g.nodes[q];
            const double step = 1e-30;
            const double dh = eval_hermite(k, std::complex<double>(x, step), Basis::paper_hermite).imag() / step;
            const double hk = eval_hermite(k, x, Basis::paper_hermite).real();
            acc += g.plain_weights[q] * (dh + x * hk) * eval_hermite(k - 1, x, Basis::paper_hermite).real();
        }
        CAPTURE(k);
        CHECK(std::abs(acc - std::sqrt(2.0 * k)) <= 1e-8);
    }
}

TEST_CASE("convention conversion") {
    std::mt19937_64 rng(3);
    const SpectralVector v = SpectralVector::random(2, 6, 6, Basis::paper_hermite, rng);
    const SpectralVector w = convert_convention(convert_convention(v, Basis::bargmann_hermite), Basis::paper_hermite);
    CHECK(w.basis() == Basis::paper_hermite);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(w[i] == v[i]);
    CHECK(convert_convention(v, Basis::bargmann_hermite).norm() == v.norm());

    const SpectralVector e0 = SpectralVector::unit(MultiIndex{0}, 4, Basis::paper_hermite);
    const double origin[1] = {0.0};
    CHECK(synthesize(e0, origin).real() == doctest::Approx(std::pow(pi, -0.25)).epsilon(1e-15));
    CHECK(synthesize(convert_convention(e0, Basis::bargmann_hermite), origin).real() ==
          doctest::Approx(std::pow(2.0 / pi, 0.25)).epsilon(1e-15));
    CHECK_THROWS_AS(convert_convention(v, Basis::fock), std::invalid_argument);
}

TEST_CASE("basis names round trip") {
    for (Basis b : {Basis::paper_hermite, Basis::bargmann_hermite, Basis::fock}) CHECK(parse_basis(basis_name(b)) == b);
    CHECK_THROWS(parse_basis("legendre"));
}
