#include "stablecrd/minu.hpp"

#include <algorithm>
#include <map>
#include <thread>

namespace stablecrd {

namespace {

unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs body(begin, end, chunk) over [0, n) split into contiguous chunks.
template <typename Body>
void parallel_chunks(std::size_t n, unsigned threads, Body body) {
    constexpr std::size_t kMinChunk = 64;
    std::size_t chunks = std::min<std::size_t>(threads, (n + kMinChunk - 1) / kMinChunk);
    if (chunks <= 1) {
        body(std::size_t{0}, n, std::size_t{0});
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(chunks);
    std::size_t step = (n + chunks - 1) / chunks;
    for (std::size_t k = 0; k < chunks; ++k) {
        std::size_t begin = k * step, end = std::min(n, begin + step);
        workers.emplace_back([=, &body] { body(begin, end, k); });
    }
    for (auto& w : workers) w.join();
}

void sort_unique(std::vector<Configuration>& configs) {
    sort_canonical(configs);
    configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
}

}  // namespace

SeedSets compute_seeds(const Crd& crd) {
    require_class(crd, CrdClass::TwoReactantNonincreasing, "compute_seeds");
    const std::size_t dim = crd.dim();
    SeedSets seeds;
    for (SpeciesId a = 0; a < dim; ++a) {
        for (SpeciesId b = a + 1; b < dim; ++b) {
            if (crd.votes_yes(a) == crd.votes_yes(b)) continue;
            Configuration pair(dim);
            pair.add(a, 1);
            pair.add(b, 1);
            seeds.mixed_pairs.push_back(std::move(pair));
        }
    }
    for (const Reaction& rxn : crd.reactions()) {
        const auto& r = rxn.reactants();
        const auto& p = rxn.products();
        bool flips = p.is_zero();
        for (SpeciesId a = 0; a < dim && !flips; ++a) {
            if (r[a] == 0) continue;
            for (SpeciesId b = 0; b < dim && !flips; ++b)
                flips = p[b] != 0 && crd.votes_yes(a) != crd.votes_yes(b);
        }
        if (flips) seeds.flipping_reactants.push_back(r);
    }
    sort_unique(seeds.mixed_pairs);
    sort_unique(seeds.flipping_reactants);
    return seeds;
}

GenResult gen_min_unstable(const Crd& crd, const GenOptions& options) {
    require_class(crd, CrdClass::TwoReactantNonincreasing, "gen_min_unstable");
    const auto started = std::chrono::steady_clock::now();
    const std::size_t dim = crd.dim();
    const auto& reactions = crd.reactions();
    const unsigned threads = resolve_threads(options.threads);

    GenResult result{Antichain(dim, options.backend), {}, false, std::nullopt};
    Antichain& index = result.min_unstable;
    index.set_checked(false);
    GenStats& stats = result.stats;

    // Pending candidates keyed by size. Every predecessor is at least as large
    // as the element it came from, so the smallest key is always safe to finalise.
    std::map<Count, std::vector<Configuration>> pending;
    SeedSets seeds = compute_seeds(crd);
    for (auto* set : {&seeds.mixed_pairs, &seeds.flipping_reactants})
        for (const Configuration& c : *set) pending[c.size()].push_back(c);

    Count complete_up_to = 1;  // no two-reactant CRD has an unstable single molecule
    bool stop = false;

    while (!pending.empty() && !stop) {
        auto node = pending.extract(pending.begin());
        const Count size = node.key();
        std::vector<Configuration> frontier = std::move(node.mapped());
        if (options.size_cap && size > *options.size_cap) {
            result.truncated = true;
            complete_up_to = *options.size_cap;
            break;
        }

        std::size_t layer_count = 0;
        while (!frontier.empty()) {
            sort_unique(frontier);

            std::vector<char> dominated(frontier.size(), 0);
            parallel_chunks(frontier.size(), threads, [&](std::size_t b, std::size_t e, std::size_t) {
                for (std::size_t i = b; i < e; ++i) dominated[i] = index.dominates(frontier[i]);
            });

            std::vector<Configuration> fresh;
            for (std::size_t i = 0; i < frontier.size(); ++i) {
                if (dominated[i]) continue;
                if (index.size() >= options.element_cap) {
                    stop = true;
                    break;
                }
                index.insert(frontier[i]);
                fresh.push_back(std::move(frontier[i]));
                ++layer_count;
            }
            if (stop) break;

            const std::size_t per_element = reactions.size() * (dim + 1);
            std::vector<std::vector<Configuration>> produced(std::max<unsigned>(threads, 1));
            parallel_chunks(fresh.size(), threads, [&](std::size_t b, std::size_t e, std::size_t k) {
                auto& out = produced[k];
                for (std::size_t i = b; i < e; ++i) {
                    const Configuration& c = fresh[i];
                    for (const Reaction& rxn : reactions) {
                        if (auto pred = predecessor(rxn, c)) out.push_back(std::move(*pred));
                        for (SpeciesId s = 0; s < dim; ++s) {
                            Configuration bigger = c;
                            bigger.add(s, 1);
                            if (auto pred = predecessor(rxn, bigger))
                                out.push_back(std::move(*pred));
                        }
                    }
                }
            });
            stats.predecessor_computations += fresh.size() * per_element;

            frontier.clear();
            for (auto& chunk : produced) {
                for (Configuration& c : chunk) {
                    if (c.size() == size)
                        frontier.push_back(std::move(c));
                    else
                        pending[c.size()].push_back(std::move(c));
                }
            }
        }

        if (layer_count > 0) stats.layers.emplace_back(size, layer_count);
        complete_up_to = stop ? size - 1 : size;
    }

    if (stop) result.truncated = true;
    if (result.truncated) result.complete_up_to = complete_up_to;
    stats.comparisons = index.stats().comparisons;
    stats.wall_time = std::chrono::steady_clock::now() - started;
    return result;
}

bool check_o_stable(const GenResult& result, const Configuration& c) {
    if (c.is_zero()) throw ZeroConfigurationError();
    if (result.min_unstable.dominates(c)) return false;
    if (result.truncated && (!result.complete_up_to || c.size() > *result.complete_up_to)) {
        throw UncertifiableError("min(U) was truncated at size " +
                                 std::to_string(result.complete_up_to.value_or(0)) +
                                 "; cannot certify stability of a configuration of size " +
                                 std::to_string(c.size()));
    }
    return true;
}

}  // namespace stablecrd
