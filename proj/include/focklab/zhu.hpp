#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "focklab/operator_matrix.hpp"
#include "focklab/quadrature.hpp"
#include "focklab/spectral_vector.hpp"

namespace focklab {

// ---- multipliers ----

/// A bounded function m on R^n, evaluable at any real point.
struct MultiplierSpec {
    std::string kind;   ///< registry id
    std::string label;  ///< canonical text form, parseable by parse_multiplier
    int dim = 0;        ///< required dimension, 0 when any n works
    std::vector<double> parameters;  ///< constant: (re, im); modulation: c
    std::function<Complex(std::span<const double>)> eval;
    std::optional<double> sup_norm;
    bool smooth = false;  ///< bounded and smooth (eligible for symbol round trips)
    std::vector<double> breakpoints;  ///< 1D jump or kink locations of non-smooth kinds
    std::vector<std::string> warnings;

    Complex operator()(std::span<const double> x) const { return eval(x); }
    /// Throws std::invalid_argument when this multiplier cannot act in dimension n.
    void require_dim(int n) const;
};

MultiplierSpec constant_multiplier(Complex c);
/// m(x) = e^{-2i c.x}
MultiplierSpec modulation_multiplier(std::vector<double> c);
/// sign(x_1), 0 at the origin
MultiplierSpec signum_multiplier();
/// e^{i |x|^{4/3}}
MultiplierSpec chirp43_multiplier();
/// e^{-|x|^2}
MultiplierSpec bump_multiplier();
/// prod_j (2 + sin 2x_j) / 3, sup 1
MultiplierSpec ripple_multiplier();
/// 1D piecewise-linear interpolation of samples at increasing abscissae,
/// constant extension outside the sampled range.
MultiplierSpec grid_multiplier(std::vector<double> x, std::vector<Complex> values);
/// Reads "x,re,im" lines ('#' comments allowed) and builds grid_multiplier.
MultiplierSpec grid_multiplier_from_file(const std::string& path);

/// Parses "constant(c)", "constant(re,im)", "modulation(c1[,c2,c3])",
/// "signum", "chirp43", "bump", "ripple", "grid(path)" and
/// "from_symbol(<spec>)". Throws std::invalid_argument naming the id.
MultiplierSpec parse_multiplier(std::string_view text);
std::vector<std::string> multiplier_registry();

// ---- symbols ----

enum class SymbolProvenance { from_multiplier, direct };

struct SymbolSpec {
    int dim = 1;
    std::string label;
    SymbolProvenance provenance = SymbolProvenance::direct;
    std::function<Complex(std::span<const Complex>)> eval;
    /// |Re z_j| and |Im z_j| beyond which the quadrature evaluation is
    /// under-resolved (oscillation and shifted-Gaussian limits).
    double reliable_real = 1e300;
    double reliable_imag = 1e300;
    std::optional<SpectralVector> fock;
    std::vector<std::string> warnings;

    Complex operator()(std::span<const Complex> z) const { return eval(z); }
    bool reliable_at(std::span<const Complex> z) const;
};

inline constexpr int kDefaultSymbolOrder = 120;

/// phi(z) = (2/pi)^{n/2} int m(x) e^{-2(x - iz/2)^2} dx, evaluated as
/// (2/pi)^{n/2} e^{z.z/2} sum_q w_q m(x_q) e^{2i x_q.z} on the scale-2
/// Gauss-Hermite rule; m is only ever sampled at real nodes.
SymbolSpec symbol_from_multiplier(const MultiplierSpec& m, int dim, int order = kDefaultSymbolOrder);

/// Closed forms: constant c gives phi = c, modulation(c) gives
/// e^{c.z - |c|^2/2}. Throws for kinds without a closed form.
SymbolSpec closed_form_symbol(const MultiplierSpec& m, int dim);

/// Fock coefficients <phi, e_alpha> by quadrature on a 2n-dim scale-1 grid.
SpectralVector project_symbol(const SymbolSpec& phi, int truncation, const QuadratureGrid& grid2n);

struct InverseSymbolOptions {
    int order = 160;           ///< scale-1/2 Gauss-Hermite points per axis
    double tolerance = 1e-6;   ///< target absolute error used for the valid range
};

/// m(x) = C' e^{2|x|^2} F[u -> phi(u) e^{-|u|^2/2}](x) on real arguments,
/// C' = 2^{-n/2} (fixed by m = 1 <-> phi = 1). Nodes outside the symbol's
/// reliable real range are dropped (their weight is below e^{-r^2/2}).
/// The e^{2|x|^2} factor
/// amplifies quadrature noise; the result carries the validated |x| range
/// in its label and an amplification warning.
MultiplierSpec multiplier_from_symbol(const SymbolSpec& phi, InverseSymbolOptions options = {});
double inverse_symbol_constant(int dim);
/// Largest |x| where the amplified roundoff stays below the tolerance.
double inverse_symbol_valid_range(const SymbolSpec& phi, const InverseSymbolOptions& options = {});

// ---- Zhu's operator ----

struct SPhiOptions {
    int quad_order = 80;  ///< scale-1 Gauss-Hermite points per real axis
    int samples = 0;      ///< Taylor samples per complex axis, 0 = 2(N+1)
    double radius = 1.0;  ///< sampling torus radius
};

/// S_phi F(z) = int F(w) e^{z.conj(w)} phi(z - conj(w)) dlambda(w) on a
/// 2n-dim scale-1 grid (layout Re w..., Im w...). Growth and symbol
/// reliability warnings are appended to `warnings` when given.
Complex s_phi_apply(const SymbolSpec& phi, const SpectralVector& F, std::span<const Complex> z,
                    const QuadratureGrid& grid2n, std::vector<std::string>* warnings = nullptr);

/// <S_phi e_beta, e_alpha> by the direct route: S_phi e_beta sampled on a
/// torus and Taylor coefficients read off by a DFT.
OperatorMatrix s_phi_matrix(const SymbolSpec& phi, int truncation, const SPhiOptions& options = {});

/// Default scale-2 order for multiplier matrices.
int default_multiplier_order(int dim, int truncation);

/// int m(x) h^_beta(x) h^_alpha(x) dx, Bargmann-Hermite tag. Smooth or nD
/// multipliers use the scale-2 Gauss-Hermite rule of the given order; 1D
/// non-smooth ones use composite Gauss-Legendre panels split at their
/// breakpoints, since Gauss-Hermite converges slowly across a jump.
OperatorMatrix multiplier_matrix(const MultiplierSpec& m, int dim, int truncation, int order = 0);

/// B F^{-1} M_m F B^{-1}: entries i^{|alpha|} M_{alpha beta} (-i)^{|beta|}, Fock tag.
OperatorMatrix conjugated_multiplier_matrix(const MultiplierSpec& m, int dim, int truncation, int order = 0);

// ---- probes ----

enum class GrowthClass { stable, growing, inconclusive };
std::string_view growth_class_name(GrowthClass c);

struct GrowthThresholds {
    double G = 0.0;  ///< growing: last/first > G
    double S = 0.0;  ///< stable: max/min < S
};

GrowthClass classify_growth(std::span<const double> norms, const GrowthThresholds& t);

struct GrowthReport {
    std::string multiplier;
    std::string side;  ///< "hermite" or "classical"
    int dim = 1;
    double s = 0.0;
    std::vector<int> truncations;
    std::vector<double> norms;
    std::vector<bool> converged;
    double last_over_first = 0.0;
    double max_over_min = 0.0;
    GrowthClass classification = GrowthClass::inconclusive;
    GrowthThresholds thresholds;
    std::vector<std::string> warnings;
};

/// operator_norm(conjugated_multiplier_matrix(m, N, order), s) for each N.
GrowthReport boundedness_probe(const MultiplierSpec& m, int dim, double s, std::span<const int> truncations,
                               const GrowthThresholds& thresholds, int order = 0);

/// Periodic box paired with Hermite truncation N: half-width about
/// sqrt(2N+1) (the classical turning point), spacing 0.25.
struct ClassicalBox {
    double halfwidth = 0.0;
    double spacing = 0.25;
    int points = 0;
};
ClassicalBox classical_box(int truncation);

/// Norm of multiplication by m on the discretized periodic W^{s,2} (Fourier
/// weights (1 + xi^2)^{s/2}) for each box; 1D only.
GrowthReport classical_sobolev_probe(const MultiplierSpec& m, double s, std::span<const int> truncations,
                                     const GrowthThresholds& thresholds);

}  // namespace focklab
