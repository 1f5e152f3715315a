#include "stablecrd/model.hpp"

#include <algorithm>
#include <sstream>

namespace stablecrd {

Count checked_add(Count a, Count b) {
    Count out;
    if (__builtin_add_overflow(a, b, &out)) throw OverflowError("molecule count overflow");
    return out;
}

Count checked_mul(Count a, Count b) {
    Count out;
    if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("molecule count overflow");
    return out;
}

// ---------------------------------------------------------------------------
// SpeciesTable

SpeciesTable::SpeciesTable(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw PreconditionError("species table must not be empty");
    for (SpeciesId i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], i).second)
            throw PreconditionError("duplicate species '" + names_[i] + "'");
    }
}

std::optional<SpeciesId> SpeciesTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SpeciesId SpeciesTable::at(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw PreconditionError("unknown species '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(std::vector<Count> counts) : counts_(std::move(counts)) {
    for (Count n : counts_) size_ = checked_add(size_, n);
}

Configuration Configuration::unit(std::size_t dim, SpeciesId species) {
    Configuration c(dim);
    c.add(species, 1);
    return c;
}

void Configuration::add(SpeciesId i, Count n) {
    Count total = checked_add(size_, n);
    counts_.at(i) = checked_add(counts_[i], n);
    size_ = total;
}

static void require_same_dim(const Configuration& a, const Configuration& b) {
    if (a.dim() != b.dim()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << a.dim() << " vs " << b.dim();
        throw DimensionError(msg.str());
    }
}

bool leq(const Configuration& a, const Configuration& b) {
    require_same_dim(a, b);
    auto x = a.counts(), y = b.counts();
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > y[i]) return false;
    return true;
}

Configuration operator+(const Configuration& a, const Configuration& b) {
    require_same_dim(a, b);
    std::vector<Count> out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_add(a[i], b[i]);
    return Configuration(std::move(out));
}

bool canonical_less(const Configuration& a, const Configuration& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    auto x = a.counts(), y = b.counts();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
    // FNV-1a over the count words.
    std::uint64_t h = 1469598103934665603ULL;
    for (Count n : c.counts()) {
        h ^= n;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

void sort_canonical(std::vector<Configuration>& configs) {
    std::sort(configs.begin(), configs.end(), CanonicalLess{});
}

static void fill_compositions(std::vector<Count>& counts, std::size_t pos, Count remaining,
                              std::vector<Configuration>& out) {
    if (pos + 1 == counts.size()) {
        counts[pos] = remaining;
        out.emplace_back(counts);
        return;
    }
    for (Count v = 0; v <= remaining; ++v) {
        counts[pos] = v;
        fill_compositions(counts, pos + 1, remaining - v, out);
    }
}

std::vector<Configuration> configurations_of_size(std::size_t dim, Count size) {
    std::vector<Configuration> out;
    if (dim == 0) {
        if (size == 0) out.emplace_back(0);
        return out;
    }
    std::vector<Count> counts(dim, 0);
    fill_compositions(counts, 0, size, out);
    return out;
}

Count multiset_coefficient(std::size_t n, Count k) {
    if (n == 0) return k == 0 ? 1 : 0;
    // C(n + k - 1, k) computed as a product of exact binomial steps.
    Count result = 1;
    const Count m = static_cast<Count>(n - 1);
    for (Count i = 1; i <= m; ++i) {
        result = checked_mul(result, k + i) / i;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Reaction / Crd

Reaction::Reaction(Configuration reactants, Configuration products)
    : reactants_(std::move(reactants)), products_(std::move(products)) {
    require_same_dim(reactants_, products_);
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::No: return "no";
        case Verdict::Yes: return "yes";
        case Verdict::Und: return "und";
    }
    return "und";
}

std::string_view to_string(CrdClass k) {
    switch (k) {
        case CrdClass::Bimolecular: return "bimolecular";
        case CrdClass::TwoReactantNonincreasing: return "two-reactant nonincreasing";
        case CrdClass::Nonincreasing: return "nonincreasing";
        case CrdClass::General: return "general";
    }
    return "general";
}

Crd::Crd(SpeciesTable species, std::vector<Reaction> reactions, std::vector<SpeciesId> inputs,
         std::vector<bool> yes_votes)
    : species_(std::move(species)),
      reactions_(std::move(reactions)),
      inputs_(std::move(inputs)),
      input_mask_(species_.size(), false),
      votes_(std::move(yes_votes)) {
    if (species_.size() == 0) throw PreconditionError("CRD needs at least one species");
    if (votes_.size() != species_.size())
        throw DimensionError("vote map must cover every species");
    for (const Reaction& rxn : reactions_) {
        if (rxn.reactants().dim() != species_.size())
            throw DimensionError("reaction vector does not match the species table");
    }
    std::sort(inputs_.begin(), inputs_.end());
    inputs_.erase(std::unique(inputs_.begin(), inputs_.end()), inputs_.end());
    for (SpeciesId s : inputs_) {
        if (s >= species_.size()) throw DimensionError("input species out of range");
        input_mask_[s] = true;
    }
}

static void require_dim(const Crd& crd, const Configuration& c) {
    if (c.dim() != crd.dim()) {
        std::ostringstream msg;
        msg << "configuration has dimension " << c.dim() << ", CRD has " << crd.dim()
            << " species";
        throw DimensionError(msg.str());
    }
}

Verdict phi(const Crd& crd, const Configuration& c) {
    require_dim(crd, c);
    bool yes = false, no = false;
    for (SpeciesId s = 0; s < c.dim(); ++s) {
        if (c[s] == 0) continue;
        (crd.votes_yes(s) ? yes : no) = true;
    }
    if (yes == no) return Verdict::Und;  // zero or mixed
    return yes ? Verdict::Yes : Verdict::No;
}

bool applicable(const Reaction& rxn, const Configuration& c) {
    return leq(rxn.reactants(), c);
}

Configuration apply(const Reaction& rxn, const Configuration& c) {
    if (!applicable(rxn, c)) throw NotApplicableError("reaction is not applicable");
    const auto& r = rxn.reactants();
    const auto& p = rxn.products();
    std::vector<Count> out(c.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_add(c[i] - r[i], p[i]);
    return Configuration(std::move(out));
}

std::optional<Configuration> predecessor(const Reaction& rxn, const Configuration& target) {
    const auto& r = rxn.reactants();
    const auto& p = rxn.products();
    if (!leq(p, target)) return std::nullopt;
    std::vector<Count> out(target.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_add(target[i] - p[i], r[i]);
    return Configuration(std::move(out));
}

CrdClass classify(const Crd& crd) {
    bool bimolecular = true, two_reactant = true, nonincreasing = true;
    for (const Reaction& rxn : crd.reactions()) {
        bimolecular = bimolecular && rxn.bimolecular();
        two_reactant = two_reactant && rxn.two_reactant() && rxn.nonincreasing();
        nonincreasing = nonincreasing && rxn.nonincreasing();
    }
    if (bimolecular) return CrdClass::Bimolecular;
    if (two_reactant) return CrdClass::TwoReactantNonincreasing;
    if (nonincreasing) return CrdClass::Nonincreasing;
    return CrdClass::General;
}

bool is_initial(const Crd& crd, const Configuration& c) {
    require_dim(crd, c);
    if (c.is_zero()) return false;
    for (SpeciesId s = 0; s < c.dim(); ++s)
        if (c[s] != 0 && !crd.is_input(s)) return false;
    return true;
}

Configuration project_to_inputs(const Crd& crd, const Configuration& c) {
    require_dim(crd, c);
    std::vector<Count> out(c.dim(), 0);
    for (SpeciesId s : crd.inputs()) out[s] = c[s];
    return Configuration(std::move(out));
}

void require_class(const Crd& crd, CrdClass weakest, std::string_view operation) {
    CrdClass k = classify(crd);
    if (static_cast<int>(k) > static_cast<int>(weakest)) {
        throw UnsupportedClassError(std::string(operation) + " does not support " +
                                    std::string(to_string(k)) + " CRDs");
    }
}

}  // namespace stablecrd
