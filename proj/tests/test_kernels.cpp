#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "focklab/kernels.hpp"

using namespace focklab;

namespace {

std::vector<double> uniform(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

std::vector<std::complex<double>> complex_uniform(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::vector<std::complex<double>> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

}  // namespace

TEST_CASE("active kernel table is usable") {
    const auto& k = kernels::active();
    CHECK(kernels::isa_supported(k.isa));
    CHECK(kernels::isa_supported(kernels::Isa::scalar));
    CHECK(k.dot3 != nullptr);
}

#if FOCKLAB_HAVE_AVX2_KERNELS
TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!kernels::isa_supported(kernels::Isa::avx2)) {
        MESSAGE("AVX2 not supported on this CPU, skipping");
        return;
    }
    const auto& s = kernels::table(kernels::Isa::scalar);
    const auto& v = kernels::table(kernels::Isa::avx2);
    std::mt19937_64 rng(20240611);

    // odd sizes exercise the remainder loops
    for (std::size_t nq : {1u, 3u, 4u, 7u, 16u, 33u, 101u}) {
        CAPTURE(nq);
        SUBCASE("hermite_table") {
            const int kmax = 60;
            const auto y = uniform(nq, -12.0, 12.0, rng);
            std::vector<double> a((kmax + 1) * nq), b((kmax + 1) * nq);
            s.hermite_table(kmax, y, a.data(), nq);
            v.hermite_table(kmax, y, b.data(), nq);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-13).scale(1.0));
        }
        SUBCASE("dot3") {
            const auto w = uniform(nq, 0.0, 2.0, rng);
            const auto a = uniform(nq, -1.0, 1.0, rng);
            const auto b = uniform(nq, -1.0, 1.0, rng);
            CHECK(v.dot3(w, a, b) == doctest::Approx(s.dot3(w, a, b)).epsilon(1e-15).scale(1.0));
        }
        SUBCASE("gram") {
            const std::size_t nb = 9;
            const auto basis = uniform(nb * nq, -1.0, 1.0, rng);
            const auto w = uniform(nq, 0.0, 1.0, rng);
            std::vector<double> a(nb * nb), b(nb * nb);
            s.gram(basis.data(), nb, nq, nq, w.data(), a.data());
            v.gram(basis.data(), nb, nq, nq, w.data(), b.data());
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-13).scale(1.0));
        }
        SUBCASE("cmatvec and adjoint") {
            const std::size_t rows = nq, cols = nq + 2;
            const auto a = complex_uniform(rows * cols, rng);
            const auto x = complex_uniform(cols, rng);
            const auto xr = complex_uniform(rows, rng);
            std::vector<std::complex<double>> y1(rows), y2(rows), z1(cols), z2(cols);
            s.cmatvec(a.data(), rows, cols, x.data(), y1.data());
            v.cmatvec(a.data(), rows, cols, x.data(), y2.data());
            for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13);
            s.cmatvec_adjoint(a.data(), rows, cols, xr.data(), z1.data());
            v.cmatvec_adjoint(a.data(), rows, cols, xr.data(), z2.data());
            for (std::size_t i = 0; i < cols; ++i) CHECK(std::abs(z1[i] - z2[i]) <= 1e-13);
        }
    }
}
#endif

TEST_CASE("dot3 compensation survives cancellation") {
    // 1e16 + 1 - 1e16 loses the 1 in naive summation
    std::vector<double> w{1.0, 1.0, 1.0};
    std::vector<double> a{1e16, 1.0, -1e16};
    std::vector<double> b{1.0, 1.0, 1.0};
    CHECK(kernels::scalar::dot3(w, a, b) == 1.0);
#if FOCKLAB_HAVE_AVX2_KERNELS
    if (kernels::isa_supported(kernels::Isa::avx2)) CHECK(kernels::avx2::dot3(w, a, b) == 1.0);
#endif
}

TEST_CASE("adjoint is the conjugate transpose") {
    std::mt19937_64 rng(7);
    const std::size_t rows = 5, cols = 3;
    const auto a = complex_uniform(rows * cols, rng);
    const auto x = complex_uniform(rows, rng);
    std::vector<std::complex<double>> y(cols);
    kernels::active().cmatvec_adjoint(a.data(), rows, cols, x.data(), y.data());
    for (std::size_t j = 0; j < cols; ++j) {
        std::complex<double> ref{};
        for (std::size_t i = 0; i < rows; ++i) ref += std::conj(a[i * cols + j]) * x[i];
        CHECK(std::abs(ref - y[j]) <= 1e-14);
    }
}
