#pragma once

// Core value types for chemical reaction networks and deciders: species,
// configurations (count vectors), reactions and the CRD itself, together with
// the exact one-step semantics and the output map.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stablecrd/error.hpp"

namespace stablecrd {

using Count = std::uint64_t;
using SpeciesId = std::size_t;

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);

class SpeciesTable {
public:
    SpeciesTable() = default;
    /// Throws PreconditionError on an empty list or duplicate names.
    explicit SpeciesTable(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(SpeciesId id) const { return names_.at(id); }
    std::optional<SpeciesId> find(std::string_view name) const;
    SpeciesId at(std::string_view name) const;

    friend bool operator==(const SpeciesTable& a, const SpeciesTable& b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SpeciesId> index_;
};

/// A multiset of molecules: one nonnegative count per species, plus its size.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::size_t dim) : counts_(dim, 0) {}
    explicit Configuration(std::vector<Count> counts);
    Configuration(std::initializer_list<Count> counts)
        : Configuration(std::vector<Count>(counts)) {}

    static Configuration unit(std::size_t dim, SpeciesId species);

    std::size_t dim() const { return counts_.size(); }
    Count size() const { return size_; }
    bool is_zero() const { return size_ == 0; }
    Count operator[](SpeciesId i) const { return counts_[i]; }
    std::span<const Count> counts() const { return counts_; }

    void add(SpeciesId i, Count n);

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.counts_ == b.counts_;
    }

private:
    std::vector<Count> counts_;
    Count size_ = 0;
};

/// Componentwise a <= b.
bool leq(const Configuration& a, const Configuration& b);

/// Checked sum a + b.
Configuration operator+(const Configuration& a, const Configuration& b);

/// Canonical order: by size, then ascending lexicographic on counts.
bool canonical_less(const Configuration& a, const Configuration& b);

struct CanonicalLess {
    bool operator()(const Configuration& a, const Configuration& b) const {
        return canonical_less(a, b);
    }
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const noexcept;
};

void sort_canonical(std::vector<Configuration>& configs);

/// All configurations of exactly the given size over `dim` species, in canonical order.
std::vector<Configuration> configurations_of_size(std::size_t dim, Count size);

/// Number of multisets of cardinality k over n kinds, C(n + k - 1, k).
Count multiset_coefficient(std::size_t n, Count k);

class Reaction {
public:
    Reaction(Configuration reactants, Configuration products);

    const Configuration& reactants() const { return reactants_; }
    const Configuration& products() const { return products_; }

    bool mute() const { return reactants_ == products_; }
    bool bimolecular() const { return reactants_.size() == 2 && products_.size() == 2; }
    bool nonincreasing() const { return reactants_.size() >= products_.size(); }
    bool two_reactant() const { return reactants_.size() == 2; }

    friend bool operator==(const Reaction& a, const Reaction& b) {
        return a.reactants_ == b.reactants_ && a.products_ == b.products_;
    }

private:
    Configuration reactants_;
    Configuration products_;
};

enum class Verdict { No = 0, Yes = 1, Und };

enum class CrdClass { Bimolecular, TwoReactantNonincreasing, Nonincreasing, General };

std::string_view to_string(Verdict v);
std::string_view to_string(CrdClass k);

/// A chemical reaction decider (Λ, R, Σ, Υ) with a total vote map.
class Crd {
public:
    /// `yes_votes[i]` is the vote of species i. Throws DimensionError when the
    /// reaction vectors or the vote map do not match the species table.
    Crd(SpeciesTable species, std::vector<Reaction> reactions, std::vector<SpeciesId> inputs,
        std::vector<bool> yes_votes);

    const SpeciesTable& species() const { return species_; }
    std::size_t dim() const { return species_.size(); }
    const std::vector<Reaction>& reactions() const { return reactions_; }
    /// Sorted, without duplicates.
    const std::vector<SpeciesId>& inputs() const { return inputs_; }
    bool is_input(SpeciesId s) const { return input_mask_[s]; }
    bool votes_yes(SpeciesId s) const { return votes_[s]; }
    const std::vector<bool>& votes() const { return votes_; }

    friend bool operator==(const Crd& a, const Crd& b) {
        return a.species_ == b.species_ && a.reactions_ == b.reactions_ &&
               a.inputs_ == b.inputs_ && a.votes_ == b.votes_;
    }

private:
    SpeciesTable species_;
    std::vector<Reaction> reactions_;
    std::vector<SpeciesId> inputs_;
    std::vector<bool> input_mask_;
    std::vector<bool> votes_;
};

Verdict phi(const Crd& crd, const Configuration& c);
bool applicable(const Reaction& rxn, const Configuration& c);
/// c - r + p. Throws NotApplicableError unless r <= c.
Configuration apply(const Reaction& rxn, const Configuration& c);
/// The unique c' with c' ->rxn target (target + r - p), if target >= p.
std::optional<Configuration> predecessor(const Reaction& rxn, const Configuration& target);
CrdClass classify(const Crd& crd);
bool is_initial(const Crd& crd, const Configuration& c);

/// c restricted to the input species (other entries zeroed).
Configuration project_to_inputs(const Crd& crd, const Configuration& c);

/// Throws UnsupportedClassError unless classify(crd) is at least as strong as `weakest`.
void require_class(const Crd& crd, CrdClass weakest, std::string_view operation);

}  // namespace stablecrd
