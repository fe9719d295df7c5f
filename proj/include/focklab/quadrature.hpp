#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace focklab {

inline constexpr int kDefaultMaxQuadratureOrder = 512;

/// Tensorized quadrature for integrals of the form
///   int_{R^n} g(x) e^{-scale |x|^2} dx  ~=  sum_q weights[q] g(x_q)
/// and, equivalently, int F(x) dx ~= sum_q plain_weights[q] F(x_q) with
/// plain_weights[q] = weights[q] e^{scale |x_q|^2}. The plain form never
/// underflows and is what Hermite-function products want.
struct QuadratureGrid {
    enum class Kind { gauss_hermite, piecewise_legendre };

    Kind kind = Kind::gauss_hermite;
    int order = 0;     ///< points per axis
    int dim = 1;
    double scale = 1.0;
    std::vector<double> nodes;  ///< size() * dim, point-major
    std::vector<double> weights;
    std::vector<double> plain_weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> point(std::size_t q) const {
        return {nodes.data() + q * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
    /// Coordinates of every point along one axis (strided copy).
    std::vector<double> axis_coordinates(int axis) const;
};

/// Gauss-Hermite rule for weight e^{-scale x^2} in `dim` dimensions.
/// Nodes come from Sturm bisection on the Jacobi matrix (Golub-Welsch
/// eigenvalues) polished by Newton on the normalized Hermite recurrence;
/// weights from the Christoffel function. Rejects order > max_order.
QuadratureGrid gauss_hermite(int order, double scale, int dim,
                             int max_order = kDefaultMaxQuadratureOrder);

/// One-dimensional Gauss-Legendre rule on [-1, 1].
struct LegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
LegendreRule gauss_legendre(int order);

/// Composite Gauss-Legendre rule on [-halfwidth, halfwidth] with panel edges
/// forced at `breakpoints`, packaged as a 1D QuadratureGrid for weight
/// e^{-scale x^2}. Used for integrands with kinks or jumps.
QuadratureGrid piecewise_legendre(double halfwidth, std::span<const double> breakpoints,
                                  double panel_width, int points_per_panel, double scale);

/// Tensor product of identical 1D rules.
QuadratureGrid tensorize(const QuadratureGrid& rule1d, int dim);

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Adaptive 15-point Gauss-Kronrod on a finite interval.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_depth = 40);

}  // namespace focklab
