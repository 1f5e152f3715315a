#include "stablecrd/reach_oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_map>

namespace stablecrd {

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

struct StateGraph {
    std::vector<Configuration> nodes;
    std::vector<std::size_t> parent;           // BFS tree
    std::vector<std::size_t> parent_reaction;
    std::vector<std::vector<std::size_t>> succ;  // filled when edges are requested
};

void require_finite(const Crd& crd, const char* operation) {
    require_class(crd, CrdClass::Nonincreasing, operation);
}

// Breadth-first exploration from `start`. Stops early (returning the index of
// the node) as soon as `stop` holds for a discovered node.
std::optional<std::size_t> explore(const Crd& crd, const Configuration& start, std::size_t cap,
                                   bool with_edges, StateGraph& g,
                                   const std::function<bool(const Configuration&)>& stop) {
    if (cap == 0) throw PreconditionError("reachability cap must be positive");
    std::unordered_map<Configuration, std::size_t, ConfigurationHash> seen;
    auto discover = [&](Configuration c, std::size_t parent, std::size_t rxn) -> std::size_t {
        auto [it, inserted] = seen.emplace(c, g.nodes.size());
        if (!inserted) return it->second;
        if (g.nodes.size() >= cap)
            throw CapExceededError("reachable set exceeds the cap of " + std::to_string(cap) +
                                       " configurations",
                                   g.nodes.size() + 1);
        g.nodes.push_back(std::move(c));
        g.parent.push_back(parent);
        g.parent_reaction.push_back(rxn);
        if (with_edges) g.succ.emplace_back();
        return g.nodes.size() - 1;
    };

    discover(start, kNoParent, 0);
    if (stop && stop(g.nodes[0])) return 0;
    const auto& reactions = crd.reactions();
    for (std::size_t head = 0; head < g.nodes.size(); ++head) {
        for (std::size_t k = 0; k < reactions.size(); ++k) {
            if (!applicable(reactions[k], g.nodes[head])) continue;
            Configuration next = apply(reactions[k], g.nodes[head]);
            std::size_t before = g.nodes.size();
            std::size_t id = discover(std::move(next), head, k);
            if (with_edges) g.succ[head].push_back(id);
            if (id == before && stop && stop(g.nodes[id])) return id;
        }
    }
    return std::nullopt;
}

std::vector<WitnessStep> path_to(const StateGraph& g, std::size_t node) {
    std::vector<WitnessStep> path;
    for (std::size_t v = node; g.parent[v] != kNoParent; v = g.parent[v])
        path.push_back({g.parent_reaction[v], g.nodes[v]});
    std::reverse(path.begin(), path.end());
    return path;
}

// Nodes that can reach some node in `targets` (targets included).
std::vector<bool> backward_closure(const StateGraph& g, const std::vector<bool>& targets) {
    std::size_t n = g.nodes.size();
    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w : g.succ[v]) pred[w].push_back(v);
    std::vector<bool> reach = targets;
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v)
        if (reach[v]) queue.push_back(v);
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t u : pred[v]) {
            if (!reach[u]) {
                reach[u] = true;
                queue.push_back(u);
            }
        }
    }
    return reach;
}

}  // namespace

ReachableSet reachable_set(const Crd& crd, const Configuration& c, std::size_t cap) {
    require_finite(crd, "reachable_set");
    if (c.dim() != crd.dim()) throw DimensionError("configuration does not match the CRD");
    StateGraph g;
    explore(crd, c, cap, false, g, nullptr);
    ReachableSet out;
    out.report.visited = g.nodes.size();
    out.configs = std::move(g.nodes);
    return out;
}

StabilityVerdict oracle_is_o_stable(const Crd& crd, const Configuration& c, std::size_t cap) {
    require_finite(crd, "oracle_is_o_stable");
    Verdict v = phi(crd, c);
    if (c.is_zero()) throw ZeroConfigurationError();
    StabilityVerdict out;
    out.kind = StabilityKind::Output;
    if (v == Verdict::Und) return out;

    StateGraph g;
    auto flip = explore(crd, c, cap, false, g,
                        [&](const Configuration& x) { return phi(crd, x) != v; });
    if (flip) {
        out.witness = path_to(g, *flip);
    } else {
        out.stable = true;
    }
    return out;
}

StabilityVerdict is_t_stable(const Crd& crd, const Configuration& c) {
    Verdict v = phi(crd, c);
    if (c.is_zero()) throw ZeroConfigurationError();
    StabilityVerdict out;
    out.kind = StabilityKind::Total;
    if (v == Verdict::Und) return out;
    const auto& reactions = crd.reactions();
    for (std::size_t k = 0; k < reactions.size(); ++k) {
        if (!reactions[k].mute() && applicable(reactions[k], c)) {
            out.witness = std::vector<WitnessStep>{{k, apply(reactions[k], c)}};
            return out;
        }
    }
    out.stable = true;
    return out;
}

Antichain oracle_min_unstable(const Crd& crd, Count max_size, std::size_t cap) {
    require_finite(crd, "oracle_min_unstable");
    if (max_size < 1) throw PreconditionError("size bound must be at least 1");
    std::vector<Configuration> unstable;
    for (Count k = 1; k <= max_size; ++k) {
        for (Configuration& c : configurations_of_size(crd.dim(), k)) {
            if (!oracle_is_o_stable(crd, c, cap).stable) unstable.push_back(std::move(c));
        }
    }
    return prune_to_antichain(unstable, crd.dim(), IndexBackend::Naive);
}

DecidesReport oracle_decides(const Crd& crd, Count max_size, StabilityKind mode,
                             std::size_t cap) {
    require_finite(crd, "oracle_decides");
    DecidesReport report;
    const auto& reactions = crd.reactions();

    std::vector<Configuration> initials;
    for (Count k = 1; k <= max_size; ++k)
        for (Configuration& c : configurations_of_size(crd.dim(), k))
            if (is_initial(crd, c)) initials.push_back(std::move(c));

    for (const Configuration& init : initials) {
        StateGraph g;
        explore(crd, init, cap, true, g, nullptr);
        const std::size_t n = g.nodes.size();

        std::vector<Verdict> out(n);
        for (std::size_t v = 0; v < n; ++v) out[v] = phi(crd, g.nodes[v]);

        std::vector<bool> stable(n, false);
        if (mode == StabilityKind::Output) {
            // x is o-stable iff its output is defined and it cannot reach a
            // configuration with a different output.
            for (Verdict target : {Verdict::No, Verdict::Yes}) {
                std::vector<bool> differs(n);
                for (std::size_t v = 0; v < n; ++v) differs[v] = out[v] != target;
                std::vector<bool> tainted = backward_closure(g, differs);
                for (std::size_t v = 0; v < n; ++v)
                    if (out[v] == target && !tainted[v]) stable[v] = true;
            }
        } else {
            for (std::size_t v = 0; v < n; ++v) {
                if (out[v] == Verdict::Und) continue;
                stable[v] = std::none_of(reactions.begin(), reactions.end(), [&](const Reaction& r) {
                    return !r.mute() && applicable(r, g.nodes[v]);
                });
            }
        }

        std::optional<std::size_t> first_stable;
        for (std::size_t v = 0; v < n; ++v) {
            if (!stable[v]) continue;
            if (!first_stable) {
                first_stable = v;
            } else if (out[v] != out[*first_stable]) {
                report.counterexample = DecidesCounterexample{
                    init, g.nodes[v], "stable configurations with different verdicts are reachable"};
                report.table.clear();
                return report;
            }
        }
        if (!first_stable) {
            report.counterexample =
                DecidesCounterexample{init, init, "no stable configuration is reachable"};
            report.table.clear();
            return report;
        }
        std::vector<bool> can_stabilise = backward_closure(g, stable);
        for (std::size_t v = 0; v < n; ++v) {
            if (!can_stabilise[v]) {
                report.counterexample = DecidesCounterexample{
                    init, g.nodes[v], "reachable configuration cannot reach a stable one"};
                report.table.clear();
                return report;
            }
        }
        report.table.push_back({project_to_inputs(crd, init), out[*first_stable]});
    }
    report.decides = true;
    return report;
}

bool replay_witness(const Crd& crd, const Configuration& start,
                    const std::vector<WitnessStep>& witness) {
    Configuration current = start;
    for (const WitnessStep& step : witness) {
        if (step.reaction >= crd.reactions().size()) return false;
        const Reaction& rxn = crd.reactions()[step.reaction];
        if (!applicable(rxn, current)) return false;
        current = apply(rxn, current);
        if (!(current == step.config)) return false;
    }
    return true;
}

}  // namespace stablecrd
