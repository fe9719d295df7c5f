#include "focklab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace focklab {

std::vector<double> QuadratureGrid::axis_coordinates(int axis) const {
    std::vector<double> out(size());
    for (std::size_t q = 0; q < size(); ++q) out[q] = nodes[q * static_cast<std::size_t>(dim) + static_cast<std::size_t>(axis)];
    return out;
}

namespace {

// Number of eigenvalues below lambda of the Hermite Jacobi matrix
// (zero diagonal, off-diagonal sqrt(k/2)).
int sturm_count(int order, double lambda) {
    int count = 0;
    double q = -lambda;
    if (q < 0.0) ++count;
    for (int k = 1; k < order; ++k) {
        if (q == 0.0) q = 1e-300;
        q = -lambda - (0.5 * k) / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// h_order(x) and h_{order-1}(x), normalized Hermite functions.
std::pair<double, double> hermite_pair(int order, double x) {
    double prev = 0.0;
    double cur = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    for (int k = 0; k < order; ++k) {
        const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

double christoffel_plain_weight(int order, double x) {
    double prev = 0.0;
    double cur = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    double sum = cur * cur;
    for (int k = 0; k + 1 < order; ++k) {
        const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        sum += cur * cur;
    }
    return 1.0 / sum;
}

// Unit-weight (e^{-x^2}) rule, ascending nodes.
void unit_gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& plain) {
    nodes.assign(static_cast<std::size_t>(order), 0.0);
    plain.assign(static_cast<std::size_t>(order), 0.0);
    const double bound = std::sqrt(2.0 * order) + 1.0;
    const int half = order / 2;
    // positive roots are eigenvalues order-half .. order-1 (0-based ascending)
    for (int i = order - half; i < order; ++i) {
        double lo = 0.0;
        double hi = bound;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count(order, mid) > i)
                hi = mid;
            else
                lo = mid;
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 3; ++it) {
            const auto [h, hm1] = hermite_pair(order, x);
            const double dh = std::sqrt(2.0 * order) * hm1 - x * h;
            if (dh == 0.0) break;
            const double step = h / dh;
            x -= step;
            if (std::abs(step) < 1e-16 * std::abs(x)) break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        nodes[static_cast<std::size_t>(order - 1 - i)] = -x;
    }
    if (order % 2 == 1) nodes[static_cast<std::size_t>(half)] = 0.0;
    for (int i = order - half - (order % 2); i < order; ++i) {
        const double w = christoffel_plain_weight(order, nodes[static_cast<std::size_t>(i)]);
        plain[static_cast<std::size_t>(i)] = w;
        plain[static_cast<std::size_t>(order - 1 - i)] = w;
    }
}

}  // namespace

QuadratureGrid tensorize(const QuadratureGrid& rule1d, int dim) {
    if (rule1d.dim != 1) throw std::invalid_argument("tensorize: input rule must be one-dimensional");
    if (dim < 1) throw std::invalid_argument("tensorize: dimension must be positive");
    QuadratureGrid out;
    out.kind = rule1d.kind;
    out.order = rule1d.order;
    out.dim = dim;
    out.scale = rule1d.scale;
    const std::size_t m = rule1d.size();
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= m;
    out.nodes.resize(total * static_cast<std::size_t>(dim));
    out.weights.resize(total);
    out.plain_weights.resize(total);
    for (std::size_t q = 0; q < total; ++q) {
        std::size_t rem = q;
        double w = 1.0;
        double pw = 1.0;
        for (int d = dim - 1; d >= 0; --d) {
            const std::size_t i = rem % m;
            rem /= m;
            out.nodes[q * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = rule1d.nodes[i];
            w *= rule1d.weights[i];
            pw *= rule1d.plain_weights[i];
        }
        out.weights[q] = w;
        out.plain_weights[q] = pw;
    }
    return out;
}

QuadratureGrid gauss_hermite(int order, double scale, int dim, int max_order) {
    if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("gauss_hermite: scale must be positive");
    if (dim < 1) throw std::invalid_argument("gauss_hermite: dimension must be >= 1");
    if (order > max_order)
        throw std::invalid_argument("gauss_hermite: order " + std::to_string(order) +
                                    " exceeds the supported maximum " + std::to_string(max_order));
    std::vector<double> unit_nodes;
    std::vector<double> unit_plain;
    unit_gauss_hermite(order, unit_nodes, unit_plain);

    QuadratureGrid rule;
    rule.kind = QuadratureGrid::Kind::gauss_hermite;
    rule.order = order;
    rule.dim = 1;
    rule.scale = scale;
    const double root = std::sqrt(scale);
    rule.nodes.resize(unit_nodes.size());
    rule.weights.resize(unit_nodes.size());
    rule.plain_weights.resize(unit_nodes.size());
    for (std::size_t i = 0; i < unit_nodes.size(); ++i) {
        const double t = unit_nodes[i];
        rule.nodes[i] = t / root;
        rule.plain_weights[i] = unit_plain[i] / root;
        rule.weights[i] = unit_plain[i] * std::exp(-t * t) / root;
    }
    return dim == 1 ? rule : tensorize(rule, dim);
}

LegendreRule gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    LegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
    if (order % 2 == 1) rule.nodes[static_cast<std::size_t>(order / 2)] = 0.0;
    return rule;
}

QuadratureGrid piecewise_legendre(double halfwidth, std::span<const double> breakpoints,
                                  double panel_width, int points_per_panel, double scale) {
    if (!(halfwidth > 0.0) || !(panel_width > 0.0) || points_per_panel < 1 || scale < 0.0)
        throw std::invalid_argument("piecewise_legendre: invalid parameters");
    std::vector<double> edges{-halfwidth, halfwidth};
    for (double b : breakpoints)
        if (b > -halfwidth && b < halfwidth) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const LegendreRule base = gauss_legendre(points_per_panel);
    QuadratureGrid rule;
    rule.kind = QuadratureGrid::Kind::piecewise_legendre;
    rule.order = points_per_panel;
    rule.dim = 1;
    rule.scale = scale;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double len = edges[s + 1] - edges[s];
        const int panels = std::max(1, static_cast<int>(std::ceil(len / panel_width - 1e-12)));
        const double h = len / panels;
        for (int p = 0; p < panels; ++p) {
            const double a = edges[s] + p * h;
            for (std::size_t i = 0; i < base.nodes.size(); ++i) {
                const double x = a + 0.5 * h * (base.nodes[i] + 1.0);
                const double pw = 0.5 * h * base.weights[i];
                rule.nodes.push_back(x);
                rule.plain_weights.push_back(pw);
                rule.weights.push_back(pw * std::exp(-scale * x * x));
            }
        }
    }
    return rule;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[static_cast<std::size_t>(i)];
        const double s = f(c - dx) + f(c + dx);
        kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * s;
        if (i % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * s;
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, double rel_tol, int max_depth) {
    AdaptiveResult result;
    if (a == b) {
        result.converged = true;
        return result;
    }
    // Global subdivision: always split the panel with the largest error
    // estimate (ties broken by position), then sum in left-to-right order.
    // Both choices are independent of evaluation timing, so results repeat.
    struct Node {
        Panel panel;
        int depth;
    };
    auto worse = [](const Node& x, const Node& y) {
        if (x.panel.error != y.panel.error) return x.panel.error < y.panel.error;
        return x.panel.a > y.panel.a;
    };
    std::vector<Node> heap{{gk15(f, a, b), 0}};
    std::vector<Node> done;
    result.evaluations = 15;
    double total_error = heap.front().panel.error;
    double total_value = heap.front().panel.value;
    const int max_evaluations = 15 * 4000;
    while (!heap.empty()) {
        const double budget = std::max(abs_tol, rel_tol * std::abs(total_value));
        if (total_error <= budget || result.evaluations >= max_evaluations) break;
        std::pop_heap(heap.begin(), heap.end(), worse);
        const Node node = heap.back();
        heap.pop_back();
        if (node.depth >= max_depth) {
            done.push_back(node);
            continue;
        }
        const double mid = 0.5 * (node.panel.a + node.panel.b);
        const Node left{gk15(f, node.panel.a, mid), node.depth + 1};
        const Node right{gk15(f, mid, node.panel.b), node.depth + 1};
        result.evaluations += 30;
        total_error += left.panel.error + right.panel.error - node.panel.error;
        total_value += left.panel.value + right.panel.value - node.panel.value;
        for (const Node& child : {left, right}) {
            heap.push_back(child);
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    }
    done.insert(done.end(), heap.begin(), heap.end());
    std::sort(done.begin(), done.end(), [](const Node& x, const Node& y) { return x.panel.a < y.panel.a; });
    double sum = 0.0, comp = 0.0;
    for (const Node& node : done) {
        const double v = node.panel.value;
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
        result.error += node.panel.error;
    }
    result.value = sum + comp;
    result.converged = result.error <= std::max(abs_tol, rel_tol * std::abs(result.value));
    return result;
}

}  // namespace focklab
