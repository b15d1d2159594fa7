#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embq/canonical.hpp"
#include "embq/catalog.hpp"
#include "embq/game.hpp"
#include "embq/morphism.hpp"
#include "embq/rng.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace embq;

namespace {

const Vocabulary kGraph = Vocabulary::of({{"E", 2}});

GameOutcome solve(const Structure& a, const Structure& b, int rounds) {
    Position p{&a, {}, &b, {}};
    return duplicator_survives(p, rounds);
}

} // namespace

TEST_CASE("isomorphic boards survive any horizon") {
    Structure k3 = im_kn(1, 3);
    GameOutcome outcome = solve(k3, k3, 99);
    CHECK(outcome.survives);
    CHECK(replay_witness({&k3, {}, &k3, {}}, outcome));
}

TEST_CASE("size mismatch loses in the first round") {
    Structure k2 = im_kn(1, 2);
    Structure k3 = im_kn(1, 3);
    GameOutcome outcome = solve(k2, k3, 1);
    CHECK_FALSE(outcome.survives);
    REQUIRE(!outcome.witness.empty());
    CHECK(outcome.witness.front().duplicator_stuck);
    CHECK(replay_witness({&k2, {}, &k3, {}}, outcome));
}

TEST_CASE("game value agrees with the literal recursive oracle on all 2-element boards") {
    // All 16 structures over {E:2} with universe {a, b}; all 256 ordered pairs.
    std::vector<Structure> all;
    for (int mask = 0; mask < 16; ++mask) {
        std::map<std::string, std::set<std::vector<int>>> interp;
        const std::vector<std::vector<int>> atoms{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) interp["E"].insert(atoms[i]);
        all.push_back(Structure::make_indexed(kGraph, {"a", "b"}, std::move(interp)));
    }
    for (const auto& a : all)
        for (const auto& b : all)
            for (int n = 1; n <= 2; ++n) {
                bool engine = solve(a, b, n).survives;
                bool oracle = oracle::game_survives(a, {}, b, {}, n);
                CHECK(engine == oracle);
            }
}

TEST_CASE("game value agrees with the oracle on random 3-element boards") {
    Rng rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        Structure a = testgen::random_structure(kGraph, 3, rng.next());
        Structure b = testgen::random_structure(kGraph, 3, rng.next());
        for (int n = 1; n <= 2; ++n) {
            CHECK(solve(a, b, n).survives == oracle::game_survives(a, {}, b, {}, n));
        }
    }
}

TEST_CASE("positions with pinned tuples") {
    Structure pe = pentagon();
    // Pinning adjacent to adjacent survives; adjacent to non-adjacent loses
    // immediately because no embedding respects the pins.
    Position good{&pe, {"0", "1"}, &pe, {"1", "2"}};
    CHECK(duplicator_survives(good, 2).survives);
    Position bad{&pe, {"0", "1"}, &pe, {"0", "2"}};
    GameOutcome lost = duplicator_survives(bad, 1);
    CHECK_FALSE(lost.survives);
    CHECK(replay_witness(bad, lost));
}

TEST_CASE("survival is monotone in the horizon") {
    Rng rng(4321);
    for (int trial = 0; trial < 15; ++trial) {
        Structure a = testgen::random_structure(kGraph, 1 + rng.below(3), rng.next());
        Structure b = testgen::random_structure(kGraph, 1 + rng.below(3), rng.next());
        bool prev = solve(a, b, 3).survives;
        for (int n = 2; n >= 1; --n) {
            bool now = solve(a, b, n).survives;
            if (prev) CHECK(now); // surviving n+1 implies surviving n
            prev = now;
        }
    }
}

TEST_CASE("one-round survival is bi-embeddability is isomorphism") {
    auto structures = enumerate_structures_up_to_iso(kGraph, 0, 3);
    for (const auto& a : structures)
        for (const auto& b : structures) {
            bool survives1 = solve(a, b, 1).survives;
            CHECK(survives1 == bi_embeddable(a, b));
            CHECK(survives1 == isomorphic(a, b));
        }
}

TEST_CASE("min distinguishing round") {
    Structure k3 = im_kn(1, 3);
    DistinguishResult same = min_distinguishing_round(k3, k3, 3);
    CHECK_FALSE(same.round.has_value());
    CHECK(same.cap_hit);

    DistinguishResult easy = min_distinguishing_round(im_kn(1, 2), im_kn(2, 1), 3);
    REQUIRE(easy.round.has_value());
    CHECK(*easy.round == 1);

    // Finite non-isomorphic pairs are told apart in round one.
    Rng rng(5150);
    for (int trial = 0; trial < 50; ++trial) {
        Structure a = testgen::random_structure(kGraph, 1 + rng.below(3), rng.next());
        Structure b = testgen::random_structure(kGraph, 1 + rng.below(3), rng.next());
        if (isomorphic(a, b)) continue;
        DistinguishResult r = min_distinguishing_round(a, b, 2);
        REQUIRE(r.round.has_value());
        CHECK(*r.round == 1);
    }
}

TEST_CASE("witness replay reproduces the claimed outcome") {
    Rng rng(808);
    for (int trial = 0; trial < 30; ++trial) {
        Structure a = testgen::random_structure(kGraph, 1 + rng.below(3), rng.next());
        Structure b = testgen::random_structure(kGraph, 1 + rng.below(3), rng.next());
        int n = 1 + static_cast<int>(rng.below(3));
        Position p{&a, {}, &b, {}};
        GameOutcome outcome = duplicator_survives(p, n);
        CHECK(replay_witness(p, outcome));
    }
}

TEST_CASE("agreement on sampled low-rank sentences when the duplicator survives") {
    QuantifierRegistry reg = testgen::test_registry();
    Rng rng(20240);
    testgen::FormulaGenOptions opts;
    opts.max_depth = 2;
    opts.quantifiers = {"Qedge", "Qtriangle", "Qtwocliques"};
    testgen::FormulaGen gen(kGraph, reg, opts, 6060);

    int pairs_checked = 0;
    while (pairs_checked < 5) {
        Structure a = testgen::random_structure(kGraph, 3, rng.next());
        // A relabeled copy guarantees survival at every horizon.
        Structure b = testgen::relabel(a, "r");
        const int n = 2;
        if (!solve(a, b, n).survives) continue;
        for (int i = 0; i < 40; ++i) {
            FormulaPtr sentence = gen.sentence_with_rank_at_most(n);
            CHECK(evaluate(a, sentence, {}, &reg) == evaluate(b, sentence, {}, &reg));
        }
        ++pairs_checked;
    }
}
