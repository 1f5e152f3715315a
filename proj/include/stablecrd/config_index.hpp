#pragma once

// An antichain of configurations representing an upward-closed set through its
// minimal elements, with "is some stored u <= c" dominance queries.
//
// Two interchangeable backends answer the same queries:
//   naive  linear scan over the elements (the reference)
//   tree   a forest of static k-d trees kept in logarithmic-method form; every
//          node stores the componentwise minimum of its subtree so whole
//          subtrees are skipped when that minimum is not below the query.
//
// Every vector comparison performed by a query (element or subtree minimum)
// is counted as one configuration comparison.

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "stablecrd/model.hpp"

namespace stablecrd {

enum class IndexBackend { Naive, Tree };

std::string_view to_string(IndexBackend b);
IndexBackend parse_backend(std::string_view name);

struct QueryStats {
    std::uint64_t comparisons = 0;
};

namespace detail {
class KdForest;
}

class Antichain {
public:
    /// Sets smaller than this are scanned linearly by the tree backend too.
    static constexpr std::size_t kTreeThreshold = 64;

    explicit Antichain(std::size_t dim, IndexBackend backend = IndexBackend::Tree);
    ~Antichain();
    Antichain(const Antichain& other);
    Antichain& operator=(const Antichain& other);
    Antichain(Antichain&& other) noexcept;
    Antichain& operator=(Antichain&& other) noexcept;

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    IndexBackend backend() const { return backend_; }

    /// Turns on the full minimality check in insert() (element dominated by or
    /// dominating a stored one). Off by default in release builds.
    void set_checked(bool on) { checked_ = on; }
    bool checked() const { return checked_; }

    /// True iff some stored u satisfies u <= c (equality included).
    /// Safe to call concurrently with other const queries.
    bool dominates(const Configuration& c) const;

    /// Adds c. Throws PreconditionError if c is already stored, and, in checked
    /// mode, if c is comparable with any stored element.
    void insert(Configuration c);

    bool contains(const Configuration& c) const { return members_.count(c) != 0; }

    /// Elements in insertion order.
    const std::vector<Configuration>& elements() const { return elements_; }
    std::vector<Configuration> canonical_list() const;

    QueryStats stats() const { return {comparisons_.load(std::memory_order_relaxed)}; }

private:
    std::size_t dim_;
    IndexBackend backend_;
    bool checked_;
    std::vector<Configuration> elements_;
    std::unordered_set<Configuration, ConfigurationHash> members_;
    std::unique_ptr<detail::KdForest> forest_;
    mutable std::atomic<std::uint64_t> comparisons_{0};
};

/// The <=-minimal elements of `configs` (duplicates collapse).
Antichain prune_to_antichain(std::span<const Configuration> configs, std::size_t dim,
                             IndexBackend backend = IndexBackend::Naive);

bool is_antichain(std::span<const Configuration> configs);

}  // namespace stablecrd
