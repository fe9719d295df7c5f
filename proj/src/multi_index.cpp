#include "focklab/multi_index.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace focklab {

MultiIndex::MultiIndex(std::initializer_list<int> components)
    : MultiIndex(std::span<const int>(components.begin(), components.size())) {}

MultiIndex::MultiIndex(std::span<const int> components) {
    if (components.empty() || components.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("MultiIndex: dimension must be in 1.." +
                                    std::to_string(kMaxDim));
    dim_ = static_cast<int>(components.size());
    for (std::size_t j = 0; j < components.size(); ++j) {
        if (components[j] < 0) throw std::invalid_argument("MultiIndex: negative component");
        comps_[j] = components[j];
        order_ += components[j];
    }
}

double MultiIndex::log_factorial() const {
    double acc = 0.0;
    for (int j = 0; j < dim_; ++j) acc += std::lgamma(comps_[static_cast<std::size_t>(j)] + 1.0);
    return acc;
}

long double MultiIndex::factorial() const {
    long double acc = 1.0L;
    for (int j = 0; j < dim_; ++j)
        for (int k = 2; k <= comps_[static_cast<std::size_t>(j)]; ++k) acc *= k;
    return acc;
}

MultiIndex MultiIndex::shifted(int axis, int delta) const {
    MultiIndex out = *this;
    out.comps_[static_cast<std::size_t>(axis)] += delta;
    out.order_ += delta;
    return out;
}

std::uint64_t MultiIndex::key() const {
    std::uint64_t k = static_cast<std::uint64_t>(dim_);
    for (int j = 0; j < kMaxDim; ++j) k = (k << 20) | static_cast<std::uint64_t>(comps_[static_cast<std::size_t>(j)]);
    return k;
}

namespace {

void enumerate_order(int dim, int order, int axis, std::array<int, kMaxDim>& comps,
                     std::vector<MultiIndex>& out) {
    if (axis == dim - 1) {
        comps[static_cast<std::size_t>(axis)] = order;
        out.emplace_back(std::span<const int>(comps.data(), static_cast<std::size_t>(dim)));
        return;
    }
    for (int c = order; c >= 0; --c) {
        comps[static_cast<std::size_t>(axis)] = c;
        enumerate_order(dim, order - c, axis + 1, comps, out);
    }
}

}  // namespace

IndexSet::IndexSet(int dim, int truncation) : dim_(dim), truncation_(truncation) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("IndexSet: dimension must be in 1.." + std::to_string(kMaxDim));
    if (truncation < 0) throw std::invalid_argument("IndexSet: negative truncation");
    indices_.reserve(graded_count(dim, truncation));
    std::array<int, kMaxDim> comps{};
    for (int order = 0; order <= truncation; ++order) enumerate_order(dim, order, 0, comps, indices_);
    lookup_.reserve(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) lookup_.emplace(indices_[i].key(), i);
}

std::shared_ptr<const IndexSet> IndexSet::get(int dim, int truncation) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const IndexSet>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, truncation}];
    if (!slot) slot = std::make_shared<const IndexSet>(dim, truncation);
    return slot;
}

std::size_t IndexSet::position(const MultiIndex& alpha) const {
    if (alpha.dim() != dim_ || alpha.order() > truncation_) return npos;
    auto it = lookup_.find(alpha.key());
    return it == lookup_.end() ? npos : it->second;
}

std::size_t IndexSet::prefix_size(int order) const {
    if (order < 0) return 0;
    if (order >= truncation_) return indices_.size();
    return graded_count(dim_, order);
}

std::size_t graded_count(int dim, int order) {
    if (order < 0) return 0;
    // C(order + dim, dim)
    std::size_t num = 1;
    std::size_t den = 1;
    for (int j = 1; j <= dim; ++j) {
        num *= static_cast<std::size_t>(order + j);
        den *= static_cast<std::size_t>(j);
    }
    return num / den;
}

}  // namespace focklab
