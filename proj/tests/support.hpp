#pragma once
// Shared fixtures and random generators for the test binaries.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "stablecrd/model.hpp"
#include "stablecrd/textio.hpp"

namespace testsupport {

using namespace stablecrd;

inline std::string corpus(const std::string& name) {
    return std::string(STABLECRD_CORPUS_DIR) + "/" + name;
}

inline Crd load(const std::string& name) { return load_crd_file(corpus(name)); }

inline const std::vector<std::string>& corpus_names() {
    static const std::vector<std::string> names = {"existence.crd", "parity.crd",
                                                   "threshold2.crd", "novote-flip.crd"};
    return names;
}

// A + B -> A + Y, inputs A and B, A and Y vote yes.
inline Crd existence() {
    return parse_crd(
        "species: A, B, Y\ninputs: A, B\nyes: A, Y\nno: B\nreactions:\nA + B -> A + Y\n");
}

inline Configuration cfg(const Crd& crd, const std::string& text) {
    return parse_config(text, crd.species());
}

inline Configuration random_config(std::mt19937_64& rng, std::size_t dim, Count size) {
    Configuration c(dim);
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    for (Count i = 0; i < size; ++i) c.add(pick(rng), 1);
    return c;
}

// Random CRD over species S0..S{n-1}. When `bimolecular` is false, about a
// third of the reactions produce fewer than two molecules.
inline Crd random_crd(std::mt19937_64& rng, std::size_t max_species, std::size_t max_reactions,
                      bool bimolecular = true) {
    std::uniform_int_distribution<std::size_t> nspecies(2, max_species);
    std::uniform_int_distribution<std::size_t> nreactions(0, max_reactions);
    std::bernoulli_distribution coin(0.5);
    const std::size_t n = nspecies(rng);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("S" + std::to_string(i));
    std::vector<Reaction> reactions;
    const std::size_t m = nreactions(rng);
    std::uniform_int_distribution<int> product_size(0, 2);
    while (reactions.size() < m) {
        Configuration r = random_config(rng, n, 2);
        Count psize = bimolecular ? 2 : static_cast<Count>(product_size(rng));
        if (!bimolecular && psize == 1 && coin(rng)) psize = 2;
        Configuration p = random_config(rng, n, psize);
        reactions.emplace_back(std::move(r), std::move(p));
    }
    std::vector<SpeciesId> inputs;
    std::vector<bool> votes(n);
    for (std::size_t i = 0; i < n; ++i) {
        votes[i] = coin(rng);
        if (coin(rng)) inputs.push_back(i);
    }
    return Crd(SpeciesTable(names), std::move(reactions), std::move(inputs), std::move(votes));
}

// Level-merging CRD: L_i + L_j -> L_min(i+j,k) + Z, and L_k + Z -> L_k + F with F
// the only no voter. Its minimal unstable configurations grow like partitions of k.
inline Crd level_merging(int k) {
    auto L = [](int i) { return "L" + std::to_string(i); };
    std::string s = "species: ";
    for (int i = 1; i <= k; ++i) s += L(i) + ", ";
    s += "Z, F\ninputs: L1\nyes: ";
    for (int i = 1; i <= k; ++i) s += L(i) + ", ";
    s += "Z\nno: F\nreactions:\n";
    for (int i = 1; i <= k; ++i)
        for (int j = i; j <= k; ++j)
            if (i != k || j != k) s += L(i) + " + " + L(j) + " -> " + L(std::min(i + j, k)) + " + Z\n";
    s += L(k) + " + Z -> " + L(k) + " + F\n";
    return parse_crd(s);
}

}  // namespace testsupport
