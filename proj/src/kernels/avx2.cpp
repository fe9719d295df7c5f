// Compiled with -mavx2 -mfma; only entered after a CPUID check.

#include "focklab/kernels.hpp"

#if FOCKLAB_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cmath>
#include <numbers>

namespace focklab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void hermite_table(int kmax, std::span<const double> y, double* out, std::size_t ld) {
    const double h0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    const std::size_t nq = y.size();
    for (std::size_t q = 0; q < nq; ++q) out[q] = h0 * std::exp(-0.5 * y[q] * y[q]);
    if (kmax < 1) return;
    const std::size_t vec_end = nq & ~std::size_t{3};
    const __m256d s2 = _mm256_set1_pd(std::numbers::sqrt2);
    {
        double* h1 = out + ld;
        std::size_t q = 0;
        for (; q < vec_end; q += 4) {
            const __m256d yv = _mm256_loadu_pd(y.data() + q);
            const __m256d h0v = _mm256_loadu_pd(out + q);
            _mm256_storeu_pd(h1 + q, _mm256_mul_pd(_mm256_mul_pd(s2, yv), h0v));
        }
        for (; q < nq; ++q) h1[q] = std::numbers::sqrt2 * y[q] * out[q];
    }
    for (int k = 1; k < kmax; ++k) {
        const double a = std::sqrt(2.0 / (k + 1));
        const double b = std::sqrt(static_cast<double>(k) / (k + 1));
        const __m256d av = _mm256_set1_pd(a);
        const __m256d bv = _mm256_set1_pd(b);
        const double* hk = out + static_cast<std::size_t>(k) * ld;
        const double* hkm = hk - ld;
        double* hkp = out + static_cast<std::size_t>(k + 1) * ld;
        std::size_t q = 0;
        for (; q < vec_end; q += 4) {
            const __m256d yv = _mm256_loadu_pd(y.data() + q);
            const __m256d cur = _mm256_loadu_pd(hk + q);
            const __m256d prev = _mm256_loadu_pd(hkm + q);
            // a*y*h_k - b*h_{k-1}, same operation order as the scalar path
            const __m256d t = _mm256_mul_pd(_mm256_mul_pd(av, yv), cur);
            _mm256_storeu_pd(hkp + q, _mm256_sub_pd(t, _mm256_mul_pd(bv, prev)));
        }
        for (; q < nq; ++q) hkp[q] = a * y[q] * hk[q] - b * hkm[q];
    }
}

double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
    const std::size_t n = w.size();
    const std::size_t vec_end = n & ~std::size_t{3};
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    for (std::size_t i = 0; i < vec_end; i += 4) {
        const __m256d term = _mm256_mul_pd(
            _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_loadu_pd(a.data() + i)),
            _mm256_loadu_pd(b.data() + i));
        const __m256d t = _mm256_add_pd(sum, term);
        const __m256d big_sum = _mm256_cmp_pd(_mm256_and_pd(sum, abs_mask),
                                              _mm256_and_pd(term, abs_mask), _CMP_GE_OQ);
        const __m256d c1 = _mm256_add_pd(_mm256_sub_pd(sum, t), term);
        const __m256d c2 = _mm256_add_pd(_mm256_sub_pd(term, t), sum);
        comp = _mm256_add_pd(comp, _mm256_blendv_pd(c2, c1, big_sum));
        sum = t;
    }
    alignas(32) double lanes[4];
    alignas(32) double comps[4];
    _mm256_store_pd(lanes, sum);
    _mm256_store_pd(comps, comp);
    double s = 0.0;
    double c = comps[0] + comps[1] + comps[2] + comps[3];
    auto add = [&](double term) {
        const double t = s + term;
        if (std::abs(s) >= std::abs(term))
            c += (s - t) + term;
        else
            c += (term - t) + s;
        s = t;
    };
    for (double lane : lanes) add(lane);
    for (std::size_t i = vec_end; i < n; ++i) add(w[i] * a[i] * b[i]);
    return s + c;
}

void gram(const double* basis, std::size_t nb, std::size_t nq, std::size_t ld, const double* w,
          double* out) {
    const std::size_t vec_end = nq & ~std::size_t{7};
    for (std::size_t a = 0; a < nb; ++a) {
        const double* ra = basis + a * ld;
        for (std::size_t b = a; b < nb; ++b) {
            const double* rb = basis + b * ld;
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            std::size_t q = 0;
            for (; q < vec_end; q += 8) {
                const __m256d wa0 = _mm256_mul_pd(_mm256_loadu_pd(w + q), _mm256_loadu_pd(ra + q));
                const __m256d wa1 =
                    _mm256_mul_pd(_mm256_loadu_pd(w + q + 4), _mm256_loadu_pd(ra + q + 4));
                acc0 = _mm256_fmadd_pd(wa0, _mm256_loadu_pd(rb + q), acc0);
                acc1 = _mm256_fmadd_pd(wa1, _mm256_loadu_pd(rb + q + 4), acc1);
            }
            double acc = hsum(_mm256_add_pd(acc0, acc1));
            for (; q < nq; ++q) acc += w[q] * ra[q] * rb[q];
            out[a * nb + b] = acc;
            out[b * nb + a] = acc;
        }
    }
}

void cmatvec(const std::complex<double>* a, std::size_t rows, std::size_t cols,
             const std::complex<double>* x, std::complex<double>* y) {
    const std::size_t vec_end = cols & ~std::size_t{1};
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * cols);
        __m256d direct = _mm256_setzero_pd();   // (ar*xr, ai*xi, ...)
        __m256d crossed = _mm256_setzero_pd();  // (ar*xi, ai*xr, ...)
        for (std::size_t j = 0; j < vec_end; j += 2) {
            const __m256d av = _mm256_loadu_pd(row + 2 * j);
            const __m256d xv = _mm256_loadu_pd(xd + 2 * j);
            direct = _mm256_fmadd_pd(av, xv, direct);
            crossed = _mm256_fmadd_pd(av, _mm256_permute_pd(xv, 0b0101), crossed);
        }
        alignas(32) double d[4];
        alignas(32) double c[4];
        _mm256_store_pd(d, direct);
        _mm256_store_pd(c, crossed);
        double re = (d[0] + d[2]) - (d[1] + d[3]);
        double im = (c[0] + c[2]) + (c[1] + c[3]);
        for (std::size_t j = vec_end; j < cols; ++j) {
            const std::complex<double> av = a[i * cols + j];
            re += av.real() * x[j].real() - av.imag() * x[j].imag();
            im += av.real() * x[j].imag() + av.imag() * x[j].real();
        }
        y[i] = {re, im};
    }
}

void cmatvec_adjoint(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                     const std::complex<double>* x, std::complex<double>* y) {
    const std::size_t vec_end = cols & ~std::size_t{1};
    double* yd = reinterpret_cast<double*>(y);
    for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
    const __m256d odd_neg = _mm256_castsi256_pd(
        _mm256_set_epi64x(static_cast<long long>(0x8000000000000000ULL), 0,
                          static_cast<long long>(0x8000000000000000ULL), 0));
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * cols);
        const __m256d xr = _mm256_set1_pd(x[i].real());
        const __m256d xi = _mm256_set1_pd(x[i].imag());
        std::size_t j = 0;
        for (; j < vec_end; j += 2) {
            const __m256d av = _mm256_loadu_pd(row + 2 * j);
            // p = (ar xr, ai xr), q swapped = (ai xi, ar xi)
            const __m256d p = _mm256_xor_pd(_mm256_mul_pd(av, xr), odd_neg);
            const __m256d qs = _mm256_permute_pd(_mm256_mul_pd(av, xi), 0b0101);
            const __m256d yv = _mm256_loadu_pd(yd + 2 * j);
            _mm256_storeu_pd(yd + 2 * j, _mm256_add_pd(yv, _mm256_add_pd(p, qs)));
        }
        for (; j < cols; ++j) {
            const std::complex<double> av = a[i * cols + j];
            const double re = av.real() * x[i].real() + av.imag() * x[i].imag();
            const double im = av.real() * x[i].imag() - av.imag() * x[i].real();
            y[j] += std::complex<double>(re, im);
        }
    }
}

}  // namespace focklab::kernels::avx2

#endif
