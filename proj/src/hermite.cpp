#include "focklab/hermite.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "focklab/error.hpp"
#include "focklab/kernels.hpp"

namespace focklab {

std::string_view basis_name(Basis basis) {
    switch (basis) {
        case Basis::paper_hermite:
            return "paper-hermite";
        case Basis::bargmann_hermite:
            return "bargmann-hermite";
        case Basis::fock:
            return "fock";
    }
    return "unknown";
}

Basis parse_basis(std::string_view name) {
    if (name == "paper-hermite") return Basis::paper_hermite;
    if (name == "bargmann-hermite") return Basis::bargmann_hermite;
    if (name == "fock") return Basis::fock;
    throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

double product_scale(Basis basis) {
    switch (basis) {
        case Basis::paper_hermite:
            return 1.0;
        case Basis::bargmann_hermite:
            return 2.0;
        case Basis::fock:
            break;
    }
    throw std::invalid_argument("product_scale: Fock basis has no real-line Gaussian weight");
}

std::vector<std::complex<double>> eval_hermite_all(int kmax, std::complex<double> x, Basis basis) {
    if (kmax < 0) throw std::invalid_argument("eval_hermite: negative order");
    if (basis == Basis::fock) throw std::invalid_argument("eval_hermite: Fock basis is not Hermite");

    const bool bargmann = basis == Basis::bargmann_hermite;
    const std::complex<double> y = bargmann ? std::numbers::sqrt2 * x : x;
    // h_k = v_k * exp(log_pref + shift)
    const std::complex<double> log_pref =
        -0.5 * y * y + (bargmann ? 0.25 * std::numbers::ln2 : 0.0) - 0.25 * std::log(std::numbers::pi);
    constexpr double kBig = 1e150;
    const double log_big = std::log(kBig);
    constexpr double kMaxLog = 709.0;

    std::vector<std::complex<double>> out(static_cast<std::size_t>(kmax) + 1);
    std::complex<double> prev = 0.0;
    std::complex<double> cur = 1.0;
    double shift = 0.0;
    auto emit = [&](int k, std::complex<double> v) {
        if (v == 0.0) {
            out[static_cast<std::size_t>(k)] = 0.0;
            return;
        }
        // magnitude check in logs, value by direct product so tiny
        // imaginary parts (complex-step derivatives) survive
        const double log_mag = log_pref.real() + shift + std::log(std::abs(v));
        if (log_mag > kMaxLog)
            throw RangeError("eval_hermite: |h_" + std::to_string(k) + "(" + std::to_string(x.real()) +
                             (x.imag() < 0 ? "" : "+") + std::to_string(x.imag()) +
                             "i)| overflows double range");
        if (log_mag < -745.0) {
            out[static_cast<std::size_t>(k)] = 0.0;
            return;
        }
        const double half = 0.5 * (log_pref.real() + shift);
        out[static_cast<std::size_t>(k)] = (v * std::exp(half)) * std::polar(std::exp(half), log_pref.imag());
    };
    emit(0, cur);
    for (int k = 0; k < kmax; ++k) {
        const std::complex<double> next =
            y * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            shift += log_big;
        }
        emit(k + 1, cur);
    }
    return out;
}

std::complex<double> eval_hermite(int k, std::complex<double> x, Basis basis) {
    return eval_hermite_all(k, x, basis).back();
}

std::vector<double> hermite_table(int kmax, std::span<const double> points, Basis basis) {
    if (kmax < 0) throw std::invalid_argument("hermite_table: negative order");
    const std::size_t nq = points.size();
    std::vector<double> out((static_cast<std::size_t>(kmax) + 1) * nq);
    if (nq == 0) return out;
    if (basis == Basis::paper_hermite) {
        kernels::active().hermite_table(kmax, points, out.data(), nq);
        return out;
    }
    if (basis != Basis::bargmann_hermite)
        throw std::invalid_argument("hermite_table: Fock basis is not Hermite");
    std::vector<double> y(points.begin(), points.end());
    for (double& v : y) v *= std::numbers::sqrt2;
    kernels::active().hermite_table(kmax, y, out.data(), nq);
    const double pref = std::pow(2.0, 0.25);
    for (double& v : out) v *= pref;
    return out;
}

std::vector<std::complex<double>> fock_monomials(int kmax, std::complex<double> z) {
    std::vector<std::complex<double>> out(static_cast<std::size_t>(kmax) + 1);
    out[0] = 1.0;
    for (int k = 1; k <= kmax; ++k)
        out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k - 1)] * z / std::sqrt(static_cast<double>(k));
    return out;
}

}  // namespace focklab
