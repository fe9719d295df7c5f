#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "focklab/spectral_vector.hpp"

namespace focklab {

/// Dense finite section of an operator in the graded basis {|alpha| <= N}.
/// Entry (i, j) is <A basis_j, basis_i>, i.e. column j is the image of the
/// j-th basis element.
class OperatorMatrix {
public:
    OperatorMatrix(int dim, int truncation, Basis basis, double s_domain = 0.0, double s_codomain = 0.0);

    static OperatorMatrix identity(int dim, int truncation, Basis basis);
    static OperatorMatrix diagonal(int dim, int truncation, Basis basis, std::span<const Complex> entries);

    int dim() const { return indices_->dim(); }
    int truncation() const { return indices_->truncation(); }
    std::size_t size() const { return indices_->size(); }
    const IndexSet& indices() const { return *indices_; }
    Basis basis() const { return basis_; }
    void set_basis(Basis b) { basis_ = b; }
    double s_domain() const { return s_domain_; }
    double s_codomain() const { return s_codomain_; }
    void set_smoothness(double s_domain, double s_codomain) {
        s_domain_ = s_domain;
        s_codomain_ = s_codomain;
    }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * size() + j]; }
    Complex operator()(std::size_t i, std::size_t j) const { return data_[i * size() + j]; }
    std::span<const Complex> data() const { return data_; }
    std::span<Complex> data() { return data_; }

    /// Leading block over |alpha| <= order (a graded prefix).
    OperatorMatrix interior(int order) const;

    SpectralVector apply(const SpectralVector& v) const;
    SpectralVector apply_adjoint(const SpectralVector& v) const;
    OperatorMatrix adjoint() const;

    double frobenius_norm() const;

    OperatorMatrix& operator+=(const OperatorMatrix& other);
    OperatorMatrix& operator-=(const OperatorMatrix& other);
    OperatorMatrix& operator*=(Complex factor);
    friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
    friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

    /// Diagnostics raised while assembling (e.g. unitarity warnings).
    std::vector<std::string> warnings;

private:
    void require_compatible(const OperatorMatrix& other) const;

    std::shared_ptr<const IndexSet> indices_;
    std::vector<Complex> data_;
    Basis basis_;
    double s_domain_;
    double s_codomain_;
};

/// Frobenius norm of (a - b) restricted to the block |alpha|, |beta| <= order.
double interior_distance(const OperatorMatrix& a, const OperatorMatrix& b, int order);

/// Frobenius norm of (A_I^* A_I - I) where A_I holds the columns with
/// |beta| <= order (all rows kept, so mass leaving through the top of the
/// truncation shows up as a defect).
double unitarity_defect(const OperatorMatrix& a, int order);

struct OperatorNormResult {
    double value = 0.0;   ///< sqrt of the final Rayleigh quotient
    double lower = 0.0;   ///< same as value: a Rayleigh quotient never overshoots
    double upper = 0.0;   ///< Frobenius norm of the weighted matrix
    int iterations = 0;
    bool converged = false;
};

struct PowerIterationOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Spectral norm of D^{s/2} A D^{-s/2}, D = diag(2|alpha| + n), by power
/// iteration on B^* B from a seeded random start. Stops when the Rayleigh
/// quotient changes by less than tolerance (relative).
OperatorNormResult operator_norm(const OperatorMatrix& a, double s, const PowerIterationOptions& options = {});

/// Largest singular value of a dense row-major rows x cols matrix, same
/// iteration and stopping rule as operator_norm.
OperatorNormResult spectral_norm(std::span<const Complex> b, std::size_t rows, std::size_t cols,
                                 const PowerIterationOptions& options = {});

// ---- serialization ----
//
// Binary: 16-byte magic "FOCKLAB-MAT\0\0\0\0\0", u32 version (1), u32 n,
// u32 N, f64 s_domain, f64 s_codomain, u8 convention (0 paper-hermite,
// 1 bargmann-hermite, 2 fock), then rows*cols (re, im) f64 pairs,
// row-major in graded index order. Everything little-endian.
//
// CSV: '#'-prefixed header lines "# key=value" for the same fields, then
// one line per row with 2*cols numbers re_0,im_0,re_1,im_1,... printed with
// 17 significant digits.

inline constexpr std::uint32_t kMatrixFormatVersion = 1;

void write_binary(const OperatorMatrix& m, const std::filesystem::path& path);
OperatorMatrix read_binary(const std::filesystem::path& path);
void write_csv(const OperatorMatrix& m, const std::filesystem::path& path);
OperatorMatrix read_csv(const std::filesystem::path& path);

}  // namespace focklab
