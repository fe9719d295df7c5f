#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

namespace focklab {

inline constexpr int kMaxDim = 3;

/// alpha in N_0^n, n <= kMaxDim.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<int> components);
    explicit MultiIndex(std::span<const int> components);

    int dim() const { return dim_; }
    int operator[](int axis) const { return comps_[static_cast<std::size_t>(axis)]; }
    int order() const { return order_; }

    /// log(alpha!) = sum_j lgamma(alpha_j + 1).
    double log_factorial() const;
    /// alpha! in long double; overflows to inf beyond ~1750 total.
    long double factorial() const;

    /// Copy with component `axis` moved by `delta`; caller keeps it >= 0.
    MultiIndex shifted(int axis, int delta) const;

    std::uint64_t key() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.dim_ == b.dim_ && a.comps_ == b.comps_;
    }

private:
    std::array<int, kMaxDim> comps_{};
    int dim_ = 0;
    int order_ = 0;
};

/// Graded enumeration of {alpha : |alpha| <= N} in dimension n. Within one
/// order the indices run in descending lexicographic order, so (N,0) comes
/// before (N-1,1). Interior blocks are graded prefixes.
class IndexSet {
public:
    IndexSet(int dim, int truncation);

    /// Shared, cached instance; index sets are immutable.
    static std::shared_ptr<const IndexSet> get(int dim, int truncation);

    int dim() const { return dim_; }
    int truncation() const { return truncation_; }
    std::size_t size() const { return indices_.size(); }
    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    /// Position of alpha, or npos if |alpha| > N or dims differ.
    std::size_t position(const MultiIndex& alpha) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Number of indices with |alpha| <= order, i.e. C(order + n, n).
    std::size_t prefix_size(int order) const;

private:
    int dim_;
    int truncation_;
    std::vector<MultiIndex> indices_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

/// C(order + n, n) without building the set.
std::size_t graded_count(int dim, int order);

}  // namespace focklab
