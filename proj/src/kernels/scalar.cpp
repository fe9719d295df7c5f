#include "focklab/kernels.hpp"

#include <cmath>
#include <numbers>

namespace focklab::kernels::scalar {

void hermite_table(int kmax, std::span<const double> y, double* out, std::size_t ld) {
    const double h0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    const std::size_t nq = y.size();
    for (std::size_t q = 0; q < nq; ++q) out[q] = h0 * std::exp(-0.5 * y[q] * y[q]);
    if (kmax < 1) return;
    for (std::size_t q = 0; q < nq; ++q) out[ld + q] = std::numbers::sqrt2 * y[q] * out[q];
    for (int k = 1; k < kmax; ++k) {
        const double a = std::sqrt(2.0 / (k + 1));
        const double b = std::sqrt(static_cast<double>(k) / (k + 1));
        const double* hk = out + static_cast<std::size_t>(k) * ld;
        const double* hkm = hk - ld;
        double* hkp = out + static_cast<std::size_t>(k + 1) * ld;
        for (std::size_t q = 0; q < nq; ++q) hkp[q] = a * y[q] * hk[q] - b * hkm[q];
    }
}

double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double term = w[i] * a[i] * b[i];
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

void gram(const double* basis, std::size_t nb, std::size_t nq, std::size_t ld, const double* w,
          double* out) {
    for (std::size_t a = 0; a < nb; ++a) {
        const double* ra = basis + a * ld;
        for (std::size_t b = a; b < nb; ++b) {
            const double* rb = basis + b * ld;
            double acc = 0.0;
            for (std::size_t q = 0; q < nq; ++q) acc += w[q] * ra[q] * rb[q];
            out[a * nb + b] = acc;
            out[b * nb + a] = acc;
        }
    }
}

void cmatvec(const std::complex<double>* a, std::size_t rows, std::size_t cols,
             const std::complex<double>* x, std::complex<double>* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const std::complex<double>* row = a + i * cols;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            re += row[j].real() * x[j].real() - row[j].imag() * x[j].imag();
            im += row[j].real() * x[j].imag() + row[j].imag() * x[j].real();
        }
        y[i] = {re, im};
    }
}

void cmatvec_adjoint(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                     const std::complex<double>* x, std::complex<double>* y) {
    for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::complex<double>* row = a + i * cols;
        const double xr = x[i].real();
        const double xi = x[i].imag();
        for (std::size_t j = 0; j < cols; ++j) {
            // conj(a_ij) * x_i
            const double re = row[j].real() * xr + row[j].imag() * xi;
            const double im = row[j].real() * xi - row[j].imag() * xr;
            y[j] += std::complex<double>(re, im);
        }
    }
}

}  // namespace focklab::kernels::scalar
