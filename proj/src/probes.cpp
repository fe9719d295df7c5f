#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "focklab/zhu.hpp"

namespace focklab {

namespace {

void require_increasing(std::span<const int> truncations) {
    if (truncations.empty()) throw std::invalid_argument("probe: empty N-list");
    for (std::size_t i = 1; i < truncations.size(); ++i)
        if (truncations[i] <= truncations[i - 1]) throw std::invalid_argument("probe: N-list must be increasing");
}

void finish(GrowthReport& r) {
    const auto [lo, hi] = std::minmax_element(r.norms.begin(), r.norms.end());
    r.last_over_first = r.norms.front() > 0.0 ? r.norms.back() / r.norms.front() : 0.0;
    r.max_over_min = *lo > 0.0 ? *hi / *lo : 0.0;
    r.classification = classify_growth(r.norms, r.thresholds);
}

}  // namespace

std::string_view growth_class_name(GrowthClass c) {
    switch (c) {
        case GrowthClass::stable:
            return "stable";
        case GrowthClass::growing:
            return "growing";
        default:
            return "inconclusive";
    }
}

GrowthClass classify_growth(std::span<const double> norms, const GrowthThresholds& t) {
    if (norms.empty()) return GrowthClass::inconclusive;
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    if (!(*lo > 0.0)) return GrowthClass::inconclusive;
    if (norms.back() / norms.front() > t.G) return GrowthClass::growing;
    if (*hi / *lo < t.S) return GrowthClass::stable;
    return GrowthClass::inconclusive;
}

GrowthReport boundedness_probe(const MultiplierSpec& m, int dim, double s, std::span<const int> truncations,
                               const GrowthThresholds& thresholds, int order) {
    require_increasing(truncations);
    if (!(s >= 0.0)) throw std::invalid_argument("probe: s must be non-negative");
    GrowthReport r;
    r.multiplier = m.label;
    r.side = "hermite";
    r.dim = dim;
    r.s = s;
    r.thresholds = thresholds;
    r.truncations.assign(truncations.begin(), truncations.end());
    for (int N : truncations) {
        const OperatorMatrix a = conjugated_multiplier_matrix(m, dim, N, order);
        const OperatorNormResult nr = operator_norm(a, s);
        r.norms.push_back(nr.value);
        r.converged.push_back(nr.converged);
        if (!nr.converged) {
            std::ostringstream os;
            os << "power iteration did not converge at N=" << N << "; bracket [" << nr.lower << ", " << nr.upper << "]";
            r.warnings.push_back(os.str());
        }
    }
    finish(r);
    return r;
}

ClassicalBox classical_box(int truncation) {
    ClassicalBox b;
    const double turning = std::sqrt(2.0 * truncation + 1.0);
    b.points = 2 * static_cast<int>(std::ceil(turning / b.spacing));
    b.halfwidth = 0.5 * b.points * b.spacing;
    return b;
}

GrowthReport classical_sobolev_probe(const MultiplierSpec& m, double s, std::span<const int> truncations,
                                     const GrowthThresholds& thresholds) {
    require_increasing(truncations);
    m.require_dim(1);
    if (!(s >= 0.0)) throw std::invalid_argument("probe: s must be non-negative");
    using std::numbers::pi;
    GrowthReport r;
    r.multiplier = m.label;
    r.side = "classical";
    r.dim = 1;
    r.s = s;
    r.thresholds = thresholds;
    r.truncations.assign(truncations.begin(), truncations.end());
    for (int N : truncations) {
        const ClassicalBox box = classical_box(N);
        const std::size_t M = static_cast<std::size_t>(box.points);
        std::vector<Complex> samples(M);
        for (std::size_t j = 0; j < M; ++j) {
            const double x = -box.halfwidth + static_cast<double>(j) * box.spacing;
            samples[j] = m(std::span<const double>(&x, 1));
        }
        // F diag(m) F^* is circulant in frequency: entry (k, l) = mhat[k - l]
        std::vector<Complex> mhat(M);
        for (std::size_t d = 0; d < M; ++d) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < M; ++j)
                acc += samples[j] * std::polar(1.0, -2.0 * pi * static_cast<double>((d * j) % M) / static_cast<double>(M));
            mhat[d] = acc / static_cast<double>(M);
        }
        std::vector<double> weight(M);
        double total = 0.0, high = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const long signed_k = k <= M / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(M);
            const double xi = 2.0 * pi * static_cast<double>(signed_k) / (static_cast<double>(M) * box.spacing);
            weight[k] = std::pow(1.0 + xi * xi, s / 2.0);
            total += std::norm(mhat[k]);
            if (std::abs(signed_k) >= static_cast<long>(3 * M / 8)) high += std::norm(mhat[k]);
        }
        if (total > 0.0 && high > 1e-3 * total) {
            std::ostringstream os;
            os << "aliasing: " << high / total << " of the energy of m lies near the Nyquist limit at N=" << N;
            r.warnings.push_back(os.str());
        }
        std::vector<Complex> b(M * M);
        for (std::size_t k = 0; k < M; ++k)
            for (std::size_t l = 0; l < M; ++l) b[k * M + l] = weight[k] * mhat[(k + M - l) % M] / weight[l];
        const OperatorNormResult nr = spectral_norm(b, M, M);
        r.norms.push_back(nr.value);
        r.converged.push_back(nr.converged);
        if (!nr.converged) {
            std::ostringstream os;
            os << "power iteration did not converge at N=" << N << "; bracket [" << nr.lower << ", " << nr.upper << "]";
            r.warnings.push_back(os.str());
        }
    }
    finish(r);
    return r;
}

}  // namespace focklab
