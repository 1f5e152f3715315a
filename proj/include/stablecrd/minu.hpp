#pragma once

// Generation of min(U), the minimal output-unstable configurations, for CRDs
// whose reactions all consume exactly two molecules and produce at most two.
//
// The search starts from the size-2 seeds (mixed-vote pairs and the reactant
// vectors of vote-changing reactions) and walks backwards through reactions:
// for every newly found minimal element c it proposes the predecessor of c
// under each reaction, and the predecessor of c + B for each species B.
// Candidates are finalised in nondecreasing size order, so when a candidate of
// size k is tested every minimal element of size < k is already known and a
// single dominance query decides minimality.
//
// The result is complete only for output-stable CRDs; that property is a
// precondition and is not verified here.

#include <chrono>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "stablecrd/config_index.hpp"
#include "stablecrd/model.hpp"

namespace stablecrd {

inline constexpr std::size_t kDefaultElementCap = 1'000'000;

struct SeedSets {
    std::vector<Configuration> mixed_pairs;       // M1, canonical order
    std::vector<Configuration> flipping_reactants;  // T, canonical order
};

SeedSets compute_seeds(const Crd& crd);

struct GenOptions {
    std::optional<Count> size_cap;
    std::size_t element_cap = kDefaultElementCap;
    IndexBackend backend = IndexBackend::Tree;
    /// Worker threads for candidate filtering and generation; 0 picks
    /// std::thread::hardware_concurrency().
    unsigned threads = 1;
};

struct GenStats {
    std::uint64_t comparisons = 0;
    std::uint64_t predecessor_computations = 0;
    std::vector<std::pair<Count, std::size_t>> layers;  // (size, elements of that size)
    std::chrono::duration<double> wall_time{0};
};

struct GenResult {
    Antichain min_unstable;
    GenStats stats;
    bool truncated = false;
    /// For truncated results, the largest size up to which min_unstable is
    /// known to contain every minimal element.
    std::optional<Count> complete_up_to;
};

GenResult gen_min_unstable(const Crd& crd, const GenOptions& options = {});

/// True iff c is o-stable according to `result`. Throws ZeroConfigurationError
/// for the zero vector, UncertifiableError when a truncated result cannot
/// decide c.
bool check_o_stable(const GenResult& result, const Configuration& c);

}  // namespace stablecrd
