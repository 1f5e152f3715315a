#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "stablecrd/reach_oracle.hpp"
#include "support.hpp"

using namespace stablecrd;
using namespace testsupport;

namespace {

// Depth-first closure written independently of the library's BFS.
std::set<std::vector<Count>> reference_reach(const Crd& crd, const Configuration& c) {
    std::set<std::vector<Count>> seen;
    std::vector<Configuration> stack{c};
    while (!stack.empty()) {
        Configuration cur = stack.back();
        stack.pop_back();
        std::vector<Count> key(cur.counts().begin(), cur.counts().end());
        if (!seen.insert(key).second) continue;
        for (const Reaction& r : crd.reactions())
            if (leq(r.reactants(), cur)) stack.push_back(apply(r, cur));
    }
    return seen;
}

bool reference_o_stable(const Crd& crd, const Configuration& c) {
    Verdict v = phi(crd, c);
    if (v == Verdict::Und) return false;
    for (const auto& key : reference_reach(crd, c))
        if (phi(crd, Configuration(key)) != v) return false;
    return true;
}

Crd crd_from(const std::string& text) { return parse_crd(text); }

}  // namespace

TEST_CASE("reachable_set") {
    Crd crd = existence();
    auto r = reachable_set(crd, cfg(crd, "A + B"));
    CHECK(r.configs == std::vector<Configuration>{cfg(crd, "A + B"), cfg(crd, "A + Y")});
    CHECK(r.report.visited == 2);
    CHECK_FALSE(r.report.capped);
    CHECK(reachable_set(crd, cfg(crd, "3B")).configs == std::vector<Configuration>{cfg(crd, "3B")});

    auto big = reachable_set(crd, cfg(crd, "A + 5B"));
    CHECK(big.configs.size() == 6);
    try {
        reachable_set(crd, cfg(crd, "A + 5B"), 3);
        FAIL("expected cap");
    } catch (const CapExceededError& e) {
        CHECK(e.visited() >= 3);
    }

    Crd inc = crd_from("species: A\ninputs: A\nyes: A\nno:\nreactions:\nA -> 2A\n");
    CHECK_THROWS_AS(reachable_set(inc, cfg(inc, "A")), UnsupportedClassError);
}

TEST_CASE("oracle_is_o_stable") {
    Crd crd = existence();
    auto ab = oracle_is_o_stable(crd, cfg(crd, "A + B"));
    CHECK_FALSE(ab.stable);
    CHECK_FALSE(ab.witness.has_value());
    CHECK(oracle_is_o_stable(crd, cfg(crd, "A + Y")).stable);
    CHECK(oracle_is_o_stable(crd, cfg(crd, "3B")).stable);
    CHECK_THROWS_AS(oracle_is_o_stable(crd, Configuration(3)), ZeroConfigurationError);

    Crd flip = crd_from("species: A, B\ninputs: A\nyes: A\nno: B\nreactions:\n2A -> 2B\n");
    auto v = oracle_is_o_stable(flip, cfg(flip, "3A"));
    CHECK_FALSE(v.stable);
    REQUIRE(v.witness.has_value());
    CHECK(replay_witness(flip, cfg(flip, "3A"), *v.witness));
    CHECK(phi(flip, v.witness->back().config) != Verdict::Yes);
}

TEST_CASE("is_t_stable") {
    Crd crd = existence();
    CHECK(is_t_stable(crd, cfg(crd, "A + Y")).stable);
    auto ab = is_t_stable(crd, cfg(crd, "A + 2B"));
    CHECK_FALSE(ab.stable);
    CHECK(ab.kind == StabilityKind::Total);

    Crd mute = crd_from("species: A, B\ninputs: A\nyes: A\nno: B\nreactions:\n2A -> 2A\n");
    CHECK(is_t_stable(mute, cfg(mute, "2A")).stable);

    Crd move = crd_from("species: A, Y\ninputs: A\nyes: A, Y\nno:\nreactions:\n2A -> A + Y\n");
    auto v = is_t_stable(move, cfg(move, "3A"));
    CHECK_FALSE(v.stable);
    REQUIRE(v.witness.has_value());
    CHECK(replay_witness(move, cfg(move, "3A"), *v.witness));
    CHECK(oracle_is_o_stable(move, cfg(move, "3A")).stable);
    CHECK_THROWS_AS(is_t_stable(crd, Configuration(3)), ZeroConfigurationError);
}

TEST_CASE("oracle_min_unstable") {
    Crd crd = existence();
    CHECK(oracle_min_unstable(crd, 4).canonical_list() ==
          std::vector<Configuration>{cfg(crd, "B + Y"), cfg(crd, "A + B")});

    Crd still = crd_from("species: A, B\ninputs: A, B\nyes: A\nno: B\nreactions:\n");
    CHECK(oracle_min_unstable(still, 3).canonical_list() ==
          std::vector<Configuration>{cfg(still, "A + B")});

    Crd yes = crd_from("species: A, B\ninputs: A\nyes: A, B\nno:\nreactions:\nA + B -> 2B\n");
    CHECK(oracle_min_unstable(yes, 5).empty());
    CHECK_THROWS_AS(oracle_min_unstable(crd, 0), PreconditionError);
}

TEST_CASE("oracle_decides") {
    Crd crd = existence();
    for (StabilityKind mode : {StabilityKind::Output, StabilityKind::Total}) {
        DecidesReport r = oracle_decides(crd, 5, mode);
        CHECK(r.decides);
        CHECK_FALSE(r.counterexample.has_value());
        CHECK(r.table.size() == 20);
        for (const auto& row : r.table)
            CHECK(row.verdict == (row.input[0] >= 1 ? Verdict::Yes : Verdict::No));
    }

    Crd osc = load("oscillating.crd");
    DecidesReport bad = oracle_decides(osc, 4, StabilityKind::Output);
    CHECK_FALSE(bad.decides);
    REQUIRE(bad.counterexample.has_value());
    CHECK_FALSE(bad.counterexample->reason.empty());
}

TEST_CASE("replay_witness rejects wrong paths") {
    Crd crd = existence();
    std::vector<WitnessStep> w{{0, cfg(crd, "A + Y")}};
    CHECK(replay_witness(crd, cfg(crd, "A + B"), w));
    CHECK_FALSE(replay_witness(crd, cfg(crd, "2B"), w));
    std::vector<WitnessStep> wrong{{0, cfg(crd, "2A")}};
    CHECK_FALSE(replay_witness(crd, cfg(crd, "A + B"), wrong));
}

TEST_CASE("property: oracle matches an independent closure; witnesses replay; t implies o") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        Crd crd = random_crd(rng, 4, 5, trial % 3 != 0);
        for (int q = 0; q < 15; ++q) {
            Configuration c = random_config(rng, crd.dim(), 1 + rng() % 6);
            auto reach = reachable_set(crd, c);
            std::set<std::vector<Count>> got;
            for (auto& x : reach.configs) got.insert({x.counts().begin(), x.counts().end()});
            CHECK(got == reference_reach(crd, c));

            auto o = oracle_is_o_stable(crd, c);
            CHECK(o.stable == reference_o_stable(crd, c));
            if (!o.stable && phi(crd, c) != Verdict::Und) {
                REQUIRE(o.witness.has_value());
                CHECK(replay_witness(crd, c, *o.witness));
                CHECK(phi(crd, o.witness->back().config) != phi(crd, c));
            }
            if (phi(crd, c) == Verdict::Und) CHECK_FALSE(o.witness.has_value());
            auto t = is_t_stable(crd, c);
            if (t.stable) CHECK(o.stable);
            if (t.witness) CHECK(replay_witness(crd, c, *t.witness));
        }
    }
}
