#pragma once

// Exhaustive ground truth for mass-bounded CRDs. Everything here enumerates
// reachable sets explicitly and is meant to cross-check the fast path.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stablecrd/config_index.hpp"
#include "stablecrd/model.hpp"

namespace stablecrd {

inline constexpr std::size_t kDefaultReachCap = 2'000'000;

enum class StabilityKind { Output, Total };

struct WitnessStep {
    std::size_t reaction = 0;
    Configuration config;

    friend bool operator==(const WitnessStep&, const WitnessStep&) = default;
};

struct StabilityVerdict {
    bool stable = false;
    StabilityKind kind = StabilityKind::Output;
    /// Present only for unstable configurations with a defined output: a path
    /// from the start ending in the first configuration that shows the
    /// instability.
    std::optional<std::vector<WitnessStep>> witness;
};

struct ReachReport {
    std::size_t visited = 0;
    bool capped = false;
};

struct ReachableSet {
    std::vector<Configuration> configs;  // breadth-first discovery order
    ReachReport report;
};

/// Breadth-first closure of {c}. Throws CapExceededError once more than `cap`
/// configurations would be visited, UnsupportedClassError for increasing CRDs.
ReachableSet reachable_set(const Crd& crd, const Configuration& c,
                           std::size_t cap = kDefaultReachCap);

StabilityVerdict oracle_is_o_stable(const Crd& crd, const Configuration& c,
                                    std::size_t cap = kDefaultReachCap);

/// Local check: defined output and no applicable non-mute reaction.
StabilityVerdict is_t_stable(const Crd& crd, const Configuration& c);

/// min(U) restricted to sizes <= max_size, by classifying every configuration.
Antichain oracle_min_unstable(const Crd& crd, Count max_size,
                              std::size_t cap = kDefaultReachCap);

struct DecidesRow {
    Configuration input;  // c restricted to the input species
    Verdict verdict = Verdict::Und;
};

struct DecidesCounterexample {
    Configuration initial;
    Configuration config;
    std::string reason;
};

struct DecidesReport {
    bool decides = false;
    std::vector<DecidesRow> table;  // canonical order of inputs
    std::optional<DecidesCounterexample> counterexample;
};

/// Checks that every initial configuration of size <= max_size stabilises
/// (in the o- or t- sense) to a single verdict from everywhere it can reach.
DecidesReport oracle_decides(const Crd& crd, Count max_size, StabilityKind mode,
                             std::size_t cap = kDefaultReachCap);

/// Replays `witness` from `start`; true iff every step is applicable and lands
/// on the listed configuration.
bool replay_witness(const Crd& crd, const Configuration& start,
                    const std::vector<WitnessStep>& witness);

}  // namespace stablecrd
