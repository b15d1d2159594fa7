#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embq/errors.hpp"
#include "embq/game.hpp"
#include "embq/morphism.hpp"
#include "embq/symgame.hpp"

#include "support/oracles.hpp"

#include <vector>

using namespace embq;

namespace {

SymEqStructure profile(const std::string& text) { return parse_profile(text); }

// All-finite profiles with up to `max_classes` classes of size <= max_size.
std::vector<SymEqStructure> small_finite_profiles(int max_classes, int max_size) {
    std::vector<SymEqStructure> out;
    std::vector<std::vector<int>> stack{{}};
    while (!stack.empty()) {
        std::vector<int> sizes = stack.back();
        stack.pop_back();
        if (!sizes.empty()) {
            std::vector<std::pair<SymCard, SymCard>> entries;
            for (int s : sizes) entries.push_back({SymCard::finite(s), SymCard::finite(1)});
            out.push_back(SymEqStructure::from_profile(entries));
        }
        if (static_cast<int>(sizes.size()) < max_classes) {
            int low = sizes.empty() ? 1 : sizes.back(); // nondecreasing, avoids duplicates
            for (int s = low; s <= max_size; ++s) {
                auto next = sizes;
                next.push_back(s);
                stack.push_back(next);
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("symbolic cardinal arithmetic") {
    SymCard three = SymCard::finite(3);
    SymCard a0 = SymCard::aleph0();
    SymCard a1 = SymCard::aleph1();
    CHECK(three < a0);
    CHECK(a0 < a1);
    CHECK_FALSE(a1 < a1);
    CHECK(three.plus(SymCard::finite(4)) == SymCard::finite(7));
    CHECK(three.plus(a0) == a0);
    CHECK(a1.plus(a0) == a1);
    CHECK(a0.minus_finite(5) == a0);
    CHECK(SymCard::finite(5).minus_finite(2) == SymCard::finite(3));
    CHECK(SymCard::parse("aleph1") == a1);
    CHECK(SymCard::parse("12") == SymCard::finite(12));
    CHECK_THROWS_AS(SymCard::parse("omega"), UsageError);
}

TEST_CASE("profile parsing and normalization") {
    SymEqStructure e = profile("(aleph1 x aleph0),(aleph0 x 1)");
    REQUIRE(e.profile.size() == 2);
    CHECK(e.profile[0].first == SymCard::aleph1()); // sorted by size, descending
    CHECK(e.profile[1].first == SymCard::aleph0());

    SymEqStructure merged = profile("(2 x 1),(2 x 2),(3 x 1)");
    REQUIRE(merged.profile.size() == 2);
    CHECK(merged.profile[0].second == SymCard::finite(1));
    CHECK(merged.profile[1].second == SymCard::finite(3));

    CHECK_THROWS_AS(profile(""), UsageError);
    CHECK_THROWS_AS(profile("(0 x 2)"), UsageError);
    CHECK_THROWS_AS(profile("(2, 2)"), UsageError);

    CHECK(profile_to_string(e) == "(aleph1 x aleph0),(aleph0 x 1)");
}

TEST_CASE("symbolic embedding existence on the running pair") {
    SymEqStructure e0 = profile("(aleph1 x aleph0)");
    SymEqStructure e1 = profile("(aleph1 x aleph0),(aleph0 x 1)");
    CHECK(sym_embedding_exists(e0, e1, {}));
    CHECK(sym_embedding_exists(e1, e0, {})); // bi-embeddable

    // A pin forcing an aleph1 class into the aleph0 class blocks it.
    SymEqStructure pinned_left = e0;
    pinned_left.touch_class(SymCard::aleph1(), "a");
    SymEqStructure pinned_right = e1;
    pinned_right.touch_class(SymCard::aleph0(), "b");
    CHECK_FALSE(sym_embedding_exists(pinned_left, pinned_right, {{"a", "b"}}));

    SymEqStructure pinned_right_big = e1;
    pinned_right_big.touch_class(SymCard::aleph1(), "b");
    CHECK(sym_embedding_exists(pinned_left, pinned_right_big, {{"a", "b"}}));
}

TEST_CASE("finite symbolic embedding equals brute force on materializations") {
    auto profiles = small_finite_profiles(4, 3);
    for (const auto& e : profiles) {
        for (const auto& f : profiles) {
            bool symbolic = sym_embedding_exists(e, f, {});
            bool brute = oracle::embeddable(e.materialize(), f.materialize());
            CHECK(symbolic == brute);
        }
    }
}

TEST_CASE("pinned finite symbolic embeddings match pinned search") {
    // One pinned element on each side, mapped; all size combinations <= 3.
    for (int se = 1; se <= 3; ++se)
        for (int sf = 1; sf <= 3; ++sf)
            for (int extra_e = 1; extra_e <= 2; ++extra_e)
                for (int extra_f = 1; extra_f <= 2; ++extra_f) {
                    SymEqStructure e = SymEqStructure::from_profile(
                        {{SymCard::finite(se), SymCard::finite(1)},
                         {SymCard::finite(extra_e), SymCard::finite(1)}});
                    SymEqStructure f = SymEqStructure::from_profile(
                        {{SymCard::finite(sf), SymCard::finite(1)},
                         {SymCard::finite(extra_f), SymCard::finite(1)}});
                    e.touch_class(SymCard::finite(se), "p");
                    f.touch_class(SymCard::finite(sf), "q");
                    bool symbolic = sym_embedding_exists(e, f, {{"p", "q"}});

                    Structure me = e.materialize();
                    Structure mf = f.materialize();
                    // Touched classes come first in the materialization.
                    MorphismQuery q = MorphismQuery::embedding(me, mf);
                    q.pins = {{"0.0", "0.0"}};
                    bool brute = find_morphism(q).has_value();
                    CHECK(symbolic == brute);
                }
}

TEST_CASE("the hierarchy example: survives one round, loses in two") {
    SymEqStructure e0 = profile("(aleph1 x aleph0)");
    SymEqStructure e1 = profile("(aleph1 x aleph0),(aleph0 x 1)");

    SymGameOutcome one = sym_game(e0, e1, 1);
    CHECK(one.survives);

    SymGameOutcome two = sym_game(e0, e1, 2);
    CHECK_FALSE(two.survives);
    REQUIRE(!two.witness.empty());
    const SymGameMove& first = two.witness.front();
    CHECK_FALSE(first.spoiler_left); // the element is picked through the reverse embedding
    CHECK(first.kind == SymGameMove::Kind::FreshUntouched);
    CHECK(first.class_size == SymCard::aleph0());
    CHECK(first.image_class_size == SymCard::aleph1());
    CHECK(two.blocked_direction == "left-to-right");
}

TEST_CASE("identical profiles survive every round in scope") {
    for (const std::string& text :
         {std::string("(aleph1 x aleph0)"), std::string("(aleph0 x aleph0),(3 x 2)"),
          std::string("(2 x 2),(1 x 1)")}) {
        SymEqStructure e = profile(text);
        for (int n = 0; n <= 4; ++n) CHECK(sym_game(e, e, n).survives);
    }
    CHECK_THROWS_AS(sym_game(profile("(2 x 2)"), profile("(2 x 2)"), 5), CapError);
}

TEST_CASE("finite symbolic games match the exact finite game") {
    auto profiles = small_finite_profiles(3, 3);
    for (const auto& e : profiles) {
        for (const auto& f : profiles) {
            Structure me = e.materialize();
            Structure mf = f.materialize();
            for (int n = 1; n <= 2; ++n) {
                bool symbolic = sym_game(e, f, n).survives;
                Position p{&me, {}, &mf, {}};
                bool exact = duplicator_survives(p, n).survives;
                CHECK(symbolic == exact);
            }
        }
    }
}

TEST_CASE("positions mid-game") {
    SymEqStructure e0 = profile("(aleph1 x aleph0)");
    SymEqStructure e1 = profile("(aleph1 x aleph0),(aleph0 x 1)");
    // After the paper's first move: g(a) lives in an aleph1 class on the
    // left, a in the aleph0 class on the right.
    SymPosition pos{e0, e1, {{SymCard::aleph1(), SymCard::aleph0(), 1}}};
    CHECK_FALSE(sym_position_feasible(pos, true));
    CHECK(sym_position_feasible(pos, false));
    CHECK_FALSE(sym_game_from(pos, 1).survives);
}
