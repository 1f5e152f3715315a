#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace stablecrd;
using namespace testsupport;

namespace {

Reaction rxn(const Crd& crd, const std::string& r, const std::string& p) {
    return Reaction(cfg(crd, r), cfg(crd, p));
}

Crd with_reactions(std::vector<std::string> species, std::vector<std::pair<std::string, std::string>> rs,
                   std::vector<bool> votes) {
    SpeciesTable table(species);
    std::vector<Reaction> reactions;
    for (auto& [r, p] : rs)
        reactions.emplace_back(parse_config(r, table), parse_config(p, table));
    return Crd(table, std::move(reactions), {0}, std::move(votes));
}

}  // namespace

TEST_CASE("species table") {
    SpeciesTable t({"A", "B", "Y"});
    CHECK(t.size() == 3);
    CHECK(t.at("Y") == 2);
    CHECK_FALSE(t.find("Z").has_value());
    CHECK_THROWS_AS(t.at("Z"), Error);
    CHECK_THROWS_AS(SpeciesTable(std::vector<std::string>{}), PreconditionError);
    CHECK_THROWS_AS(SpeciesTable(std::vector<std::string>{"A", "A"}), PreconditionError);
}

TEST_CASE("configuration basics") {
    Configuration c{1, 2, 0};
    CHECK(c.size() == 3);
    CHECK(c.dim() == 3);
    CHECK_FALSE(c.is_zero());
    CHECK(Configuration(3).is_zero());
    c.add(2, 4);
    CHECK(c == Configuration{1, 2, 4});
    CHECK(c.size() == 7);
    CHECK(Configuration::unit(3, 1) == Configuration{0, 1, 0});
    CHECK(Configuration{1, 1} + Configuration{0, 2} == Configuration{1, 3});
}

TEST_CASE("overflow is detected") {
    const Count big = std::numeric_limits<Count>::max();
    CHECK_THROWS_AS(checked_add(big, 1), OverflowError);
    CHECK_THROWS_AS(checked_mul(big, 2), OverflowError);
    Configuration c{big, 0};
    CHECK_THROWS_AS(c.add(0, 1), OverflowError);
    CHECK_THROWS_AS(Configuration({big, 1}), OverflowError);
}

TEST_CASE("leq and dimension checks") {
    CHECK(leq(Configuration{1, 1, 0}, Configuration{2, 3, 1}));
    CHECK(leq(Configuration{1, 1, 0}, Configuration{1, 1, 0}));
    CHECK_FALSE(leq(Configuration{1, 1, 0}, Configuration{5, 0, 0}));
    CHECK_THROWS_AS(leq(Configuration{1}, Configuration{1, 0}), DimensionError);
    CHECK_THROWS_AS((Configuration{1} + Configuration{1, 0}), DimensionError);
}

TEST_CASE("canonical order") {
    std::vector<Configuration> v{{0, 1, 1}, {1, 1, 0}, {3, 0, 0}, {0, 0, 1}};
    sort_canonical(v);
    CHECK(v == std::vector<Configuration>{{0, 0, 1}, {0, 1, 1}, {1, 1, 0}, {3, 0, 0}});
}

TEST_CASE("phi") {
    Crd crd = existence();
    CHECK(phi(crd, cfg(crd, "A + B")) == Verdict::Und);
    CHECK(phi(crd, Configuration(3)) == Verdict::Und);
    CHECK(phi(crd, cfg(crd, "3A")) == Verdict::Yes);
    CHECK(phi(crd, cfg(crd, "A + 4Y")) == Verdict::Yes);
    CHECK(phi(crd, cfg(crd, "2B")) == Verdict::No);
    CHECK_THROWS_AS(phi(crd, Configuration{1, 0}), DimensionError);
}

TEST_CASE("applicable, apply, predecessor") {
    Crd crd = existence();
    const Reaction& r = crd.reactions()[0];
    CHECK(applicable(r, cfg(crd, "A + 2B")));
    CHECK_FALSE(applicable(r, cfg(crd, "3B")));
    CHECK(apply(r, cfg(crd, "A + 2B")) == cfg(crd, "A + B + Y"));
    CHECK(apply(r, cfg(crd, "A + B")) == cfg(crd, "A + Y"));
    CHECK_THROWS_AS(apply(r, cfg(crd, "3B")), NotApplicableError);

    Reaction mute = rxn(crd, "2A", "2A");
    CHECK(mute.mute());
    CHECK(applicable(mute, cfg(crd, "2A")));
    CHECK(apply(mute, cfg(crd, "3A + Y")) == cfg(crd, "3A + Y"));

    CHECK(predecessor(r, cfg(crd, "A + Y")) == cfg(crd, "A + B"));
    CHECK_FALSE(predecessor(r, cfg(crd, "A + B")).has_value());
    auto p = predecessor(r, cfg(crd, "2A + 3Y"));
    REQUIRE(p.has_value());
    CHECK(*p == cfg(crd, "2A + B + 2Y"));
    CHECK(apply(r, *p) == cfg(crd, "2A + 3Y"));
}

TEST_CASE("classify") {
    CHECK(classify(existence()) == CrdClass::Bimolecular);
    CHECK(classify(with_reactions({"A", "B", "Y"}, {{"A + B", "Y"}}, {true, false, true})) ==
          CrdClass::TwoReactantNonincreasing);
    CHECK(classify(with_reactions({"A", "B", "Y"}, {{"A + B", "0"}}, {true, false, true})) ==
          CrdClass::TwoReactantNonincreasing);
    CHECK(classify(with_reactions({"A", "B"}, {{"3A", "B"}}, {true, false})) ==
          CrdClass::Nonincreasing);
    CHECK(classify(with_reactions({"A", "B"}, {{"A", "2A"}}, {true, false})) == CrdClass::General);
    CHECK(classify(with_reactions({"A", "B"}, {}, {true, false})) == CrdClass::Bimolecular);
    CHECK(to_string(CrdClass::TwoReactantNonincreasing) == "two-reactant nonincreasing");

    Crd inc = with_reactions({"A", "B"}, {{"A", "2A"}}, {true, false});
    CHECK_THROWS_AS(require_class(inc, CrdClass::Nonincreasing, "op"), UnsupportedClassError);
    CHECK_NOTHROW(require_class(existence(), CrdClass::TwoReactantNonincreasing, "op"));
}

TEST_CASE("initial configurations and projection") {
    Crd crd = existence();
    CHECK(is_initial(crd, cfg(crd, "2A + B")));
    CHECK_FALSE(is_initial(crd, cfg(crd, "A + Y")));
    CHECK_FALSE(is_initial(crd, Configuration(3)));
    CHECK(project_to_inputs(crd, cfg(crd, "A + 2B + 5Y")) == cfg(crd, "A + 2B"));
}

TEST_CASE("crd construction validates dimensions") {
    SpeciesTable t({"A", "B"});
    CHECK_THROWS_AS(Crd(t, {}, {0}, {true}), DimensionError);
    CHECK_THROWS_AS(Crd(t, {Reaction(Configuration{1, 1, 0}, Configuration{2, 0, 0})}, {0},
                        {true, false}),
                    DimensionError);
    CHECK_THROWS_AS(Crd(t, {}, {5}, {true, false}), DimensionError);
    Crd ok(t, {}, {1, 0, 1}, {true, false});
    CHECK(ok.inputs() == std::vector<SpeciesId>{0, 1});
}

TEST_CASE("configurations of a fixed size") {
    for (std::size_t dim = 1; dim <= 4; ++dim) {
        for (Count k = 0; k <= 8; ++k) {
            auto all = configurations_of_size(dim, k);
            CHECK(all.size() == multiset_coefficient(dim, k));
            for (std::size_t i = 0; i < all.size(); ++i) {
                CHECK(all[i].size() == k);
                if (i > 0) CHECK(canonical_less(all[i - 1], all[i]));
            }
        }
    }
    CHECK(multiset_coefficient(3, 2) == 6);
    CHECK(multiset_coefficient(4, 8) == 165);
}

TEST_CASE("property: apply and predecessor are inverse and preserve size") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        Crd crd = random_crd(rng, 5, 6, trial % 2 == 0);
        for (const Reaction& r : crd.reactions()) {
            Configuration c = random_config(rng, crd.dim(), 1 + rng() % 7);
            if (applicable(r, c)) {
                Configuration next = apply(r, c);
                CHECK(predecessor(r, next) == c);
                if (r.bimolecular()) CHECK(next.size() == c.size());
                if (r.nonincreasing()) CHECK(next.size() <= c.size());
            }
            if (auto pred = predecessor(r, c)) {
                CHECK(applicable(r, *pred));
                CHECK(apply(r, *pred) == c);
            } else {
                CHECK_FALSE(leq(r.products(), c));
            }
        }
    }
}
