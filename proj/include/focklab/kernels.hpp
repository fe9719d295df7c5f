#pragma once

// Data-parallel inner loops. Every kernel has a portable scalar reference
// and, on x86-64, an AVX2/FMA variant. The active table is chosen once at
// startup from CPUID; FOCKLAB_ISA=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace focklab::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Normalized Hermite functions h_0..h_kmax (weight e^{-y^2/2}) at real
/// points y, written row-major: out[k * ld + q]. Plain three-term
/// recurrence; valid for |y| below ~37 where e^{-y^2/2} stays normal.
using HermiteTableFn = void (*)(int kmax, std::span<const double> y, double* out, std::size_t ld);

/// Sum_i w_i a_i b_i with compensated (Neumaier) accumulation.
using Dot3Fn = double (*)(std::span<const double> w, std::span<const double> a,
                          std::span<const double> b);

/// Symmetric Gram matrix G[a*nb + b] = Sum_q w_q B[a][q] B[b][q] for a
/// row-major basis table B of nb rows and nq columns (leading dimension ld).
using GramFn = void (*)(const double* basis, std::size_t nb, std::size_t nq, std::size_t ld,
                        const double* w, double* out);

/// y = A x for a dense row-major complex matrix.
using CMatVecFn = void (*)(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                           const std::complex<double>* x, std::complex<double>* y);

struct KernelTable {
    Isa isa;
    HermiteTableFn hermite_table;
    Dot3Fn dot3;
    GramFn gram;
    CMatVecFn cmatvec;
    /// y = A^H x
    CMatVecFn cmatvec_adjoint;
};

bool isa_supported(Isa isa);

/// Kernel table for a specific ISA; throws std::runtime_error if the CPU
/// cannot run it.
const KernelTable& table(Isa isa);

/// Table picked at first use: best supported ISA unless overridden by the
/// FOCKLAB_ISA environment variable.
const KernelTable& active();

namespace scalar {
void hermite_table(int kmax, std::span<const double> y, double* out, std::size_t ld);
double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b);
void gram(const double* basis, std::size_t nb, std::size_t nq, std::size_t ld, const double* w,
          double* out);
void cmatvec(const std::complex<double>* a, std::size_t rows, std::size_t cols,
             const std::complex<double>* x, std::complex<double>* y);
void cmatvec_adjoint(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                     const std::complex<double>* x, std::complex<double>* y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define FOCKLAB_HAVE_AVX2_KERNELS 1
namespace avx2 {
void hermite_table(int kmax, std::span<const double> y, double* out, std::size_t ld);
double dot3(std::span<const double> w, std::span<const double> a, std::span<const double> b);
void gram(const double* basis, std::size_t nb, std::size_t nq, std::size_t ld, const double* w,
          double* out);
void cmatvec(const std::complex<double>* a, std::size_t rows, std::size_t cols,
             const std::complex<double>* x, std::complex<double>* y);
void cmatvec_adjoint(const std::complex<double>* a, std::size_t rows, std::size_t cols,
                     const std::complex<double>* x, std::complex<double>* y);
}  // namespace avx2
#else
#define FOCKLAB_HAVE_AVX2_KERNELS 0
#endif

}  // namespace focklab::kernels
