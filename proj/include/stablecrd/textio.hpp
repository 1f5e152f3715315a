#pragma once

// Text formats: the .crd reaction DSL, .pp population-protocol tables,
// configuration literals, and the "stablecrd/1" JSON reports.
//
// .crd grammar (line oriented, '#' starts a comment):
//
//   species: A, B, Y
//   inputs: A, B
//   yes: A, Y
//   no: B
//   reactions:
//   A + B -> A + Y
//   2A -> 0
//
// .pp grammar: same header lines with `states:` instead of `species:`, then
// `transitions:` followed by lines `P, Q -> R, S` giving delta(P,Q) = (R,S).
// Ordered pairs that are not listed are mute.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stablecrd/model.hpp"
#include "stablecrd/minu.hpp"
#include "stablecrd/reach_oracle.hpp"
#include "json.hpp"

namespace stablecrd {

inline constexpr std::string_view kSchemaVersion = "stablecrd/1";

using Json = nlohmann::ordered_json;

Crd parse_crd(std::string_view text);
std::string serialize_crd(const Crd& crd);

Configuration parse_config(std::string_view text, const SpeciesTable& table);
/// Inverse of parse_config: "A + 3Y", or "0" for the zero vector.
std::string format_config(const Configuration& c, const SpeciesTable& table);
std::string format_reaction(const Reaction& rxn, const SpeciesTable& table);

struct Transition {
    SpeciesId first, second;   // ordered input pair
    SpeciesId first_out, second_out;
};

struct ProtocolTable {
    SpeciesTable states;
    std::vector<Transition> delta;  // at most one entry per ordered input pair
    std::vector<SpeciesId> inputs;
    std::vector<bool> yes_votes;
};

ProtocolTable parse_protocol(std::string_view text);
Crd import_protocol(const ProtocolTable& table);

/// Parses a .crd or .pp source, chosen by the file name's extension.
Crd load_crd_file(const std::string& path);
std::string read_file(const std::string& path);

/// Stable 64-bit content hash of the CRD's canonical serialization, as 16 hex digits.
std::string crd_hash(const Crd& crd);

// JSON. Configurations are objects species -> positive count in species order.
Json config_to_json(const Configuration& c, const SpeciesTable& table);
Configuration config_from_json(const Json& j, const SpeciesTable& table);
Json antichain_to_json(const std::vector<Configuration>& canonical, const SpeciesTable& table);
Json verdict_to_json(const StabilityVerdict& v, const Configuration& c, const SpeciesTable& table);
Json gen_result_to_json(const GenResult& r, const Crd& crd);
Json decides_to_json(const DecidesReport& r, const Crd& crd, Count max_size, StabilityKind mode);

/// Reads a GenResult previously written by gen_result_to_json. When
/// `check_hash` is set the stored CRD hash must match `crd`.
GenResult gen_result_from_json(const Json& j, const Crd& crd, bool check_hash = true,
                               IndexBackend backend = IndexBackend::Tree);

}  // namespace stablecrd
