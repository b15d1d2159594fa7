#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embq/catalog.hpp"
#include "embq/errors.hpp"
#include "embq/parser.hpp"
#include "embq/zeroone.hpp"

#include "support/generators.hpp"

#include <cmath>

using namespace embq;

namespace {

const Vocabulary kGraph = Vocabulary::of({{"E", 2}});

// Exact binomial coverage of the Wilson interval at a given p.
double exact_coverage(int n, double p) {
    double covered = 0.0;
    for (int k = 0; k <= n; ++k) {
        auto [lo, hi] = wilson_interval(k, n);
        if (p < lo || p > hi) continue;
        // binomial pmf via logs
        double logpmf = std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) +
                        k * std::log(p) + (n - k) * std::log(1 - p);
        covered += std::exp(logpmf);
    }
    return covered;
}

} // namespace

TEST_CASE("sampling determinism and edge cases") {
    SampleConfig cfg{kGraph, 5, 1, 42, 0.5};
    Structure a = sample_random_structure(cfg, 3);
    Structure b = sample_random_structure(cfg, 3);
    CHECK(a == b);
    Structure c = sample_random_structure(cfg, 4);
    CHECK(!(a == c)); // overwhelmingly likely and fixed by the seed

    SampleConfig empty{kGraph, 0, 1, 42, 0.5};
    CHECK(sample_random_structure(empty, 0).size() == 0);

    SampleConfig full{kGraph, 3, 1, 42, 1.0};
    CHECK(sample_random_structure(full, 0).tuples("E").size() == 9);

    SampleConfig none{kGraph, 3, 1, 42, 0.0};
    CHECK(sample_random_structure(none, 0).tuples("E").empty());
}

TEST_CASE("estimate_mu on analytically known sentences") {
    FormulaPtr truth = f_true();
    SampleConfig cfg{kGraph, 6, 100, 7, 0.5};
    MuEstimate always = estimate_mu(truth, cfg);
    CHECK(always.estimate == 1.0);

    // Some distinct pair is connected: failure probability (3/4)^(n(n-1)/2)
    // over unordered pairs; practically certain at n = 20.
    FormulaPtr edge = parse_formula("exists x. exists y. (x != y & E(x,y))", kGraph);
    SampleConfig big{kGraph, 20, 200, 42, 0.5};
    MuEstimate e = estimate_mu(edge, big);
    CHECK(e.estimate >= 0.999);

    // All loops present: probability 2^-20.
    FormulaPtr loops = parse_formula("forall x. E(x,x)", kGraph);
    MuEstimate l = estimate_mu(loops, big);
    CHECK(l.estimate <= 0.001);

    CHECK_THROWS_AS(estimate_mu(parse_formula("E(x,y)", kGraph), big), UsageError);
}

TEST_CASE("parallel estimation equals serial estimation") {
    FormulaPtr edge = parse_formula("exists x. exists y. (x != y & E(x,y))", kGraph);
    SampleConfig cfg{kGraph, 8, 120, 99, 0.5};
    MuEstimate serial = estimate_mu(edge, cfg, nullptr, 1);
    MuEstimate parallel = estimate_mu(edge, cfg, nullptr, 4);
    CHECK(serial.positives == parallel.positives);
    CHECK(serial.estimate == parallel.estimate);
}

TEST_CASE("embedding-closed sentence estimates grow with size") {
    QuantifierRegistry reg = testgen::test_registry();
    FormulaPtr triangle = parse_formula("Qtriangle[w0,w1: E(w0,w1)]", kGraph, &reg);
    double prev_est = -1.0;
    double prev_width = 0.0;
    for (int n : {10, 20, 40}) {
        SampleConfig cfg{kGraph, n, 150, 4242, 0.5};
        MuEstimate e = estimate_mu(triangle, cfg, &reg);
        double width = e.ci_high - e.ci_low;
        // Non-decreasing within the interval tolerance.
        CHECK(e.estimate >= prev_est - (width + prev_width));
        prev_est = e.estimate;
        prev_width = width;
    }
}

TEST_CASE("wilson interval against exact binomial coverage") {
    for (int k : {0, 1, 7, 25, 50})
        for (int n : {50}) {
            auto [lo, hi] = wilson_interval(k, n);
            CHECK(lo >= 0.0);
            CHECK(hi <= 1.0);
            CHECK(lo <= static_cast<double>(k) / n);
            CHECK(hi >= static_cast<double>(k) / n);
        }
    // Coverage stays near the nominal level for all counts up to 50.
    for (int n : {10, 25, 50}) {
        double worst = 1.0;
        for (double p = 0.05; p < 0.96; p += 0.05) worst = std::min(worst, exact_coverage(n, p));
        CHECK(worst >= 0.85);
        CHECK(worst <= 1.0);
    }
}

TEST_CASE("extension property") {
    // A pinned single vertex extends wherever its type is realized.
    Structure k1 = im_kn(1, 1);
    CHECK(extension_property_holds(k1, {"0.0"}, im_kn(2, 2)));

    // An edge endpoint cannot extend into an edgeless board: its type
    // (loop-free vertex) is realized there, with no way to add the partner.
    Structure k2 = im_kn(1, 2);
    CHECK_FALSE(extension_property_holds(k2, {"0.0"}, im_kn(2, 1)));

    // Monte Carlo: the extension property holds in most large samples.
    Structure p3 = path_graph(3);
    int hold = 0;
    const int samples = 60;
    for (int i = 0; i < samples; ++i) {
        SampleConfig cfg{kGraph, 25, 1, 4711, 0.5};
        Structure b = sample_random_structure(cfg, static_cast<uint64_t>(i));
        if (extension_property_holds(p3, {"0"}, b)) ++hold;
    }
    CHECK(hold >= samples * 9 / 10);
}

TEST_CASE("asympt_theta construction") {
    QuantifierRegistry reg = testgen::test_registry();

    // A satisfiable sentence: the 0-ary disjunct appears.
    FormulaPtr edge_sentence = parse_formula("Qedge[w0,w1: E(w0,w1)]", kGraph, &reg);
    TypeDisjunction t0 = asympt_theta(edge_sentence, kGraph, &reg, 3);
    CHECK(t0.types.size() == 1);
    CHECK(t0.types.begin()->arity == 0);

    // A contradictory body: the empty disjunction, i.e. false.
    FormulaPtr never = parse_formula("Qedge[w0,w1: (E(w0,w1) & !E(w0,w1))]", kGraph, &reg);
    CHECK(asympt_theta(never, kGraph, &reg, 3).types.empty());

    // With one free variable: the formula implies theta on every structure
    // within the search bound, by construction.
    FormulaPtr open = parse_formula("Qedge[w0,w1: (E(w0,w1) & E(w0,x))]", kGraph, &reg);
    TypeDisjunction theta = asympt_theta(open, kGraph, &reg, 3);
    for (const auto& s : enumerate_structures_up_to_iso(kGraph, 0, 3)) {
        Evaluator ev(s, &reg);
        for (int v = 0; v < s.size(); ++v) {
            if (ev.evaluate_indexed(open, {"x"}, {v})) CHECK(theta.satisfied_by(s, {v}));
        }
    }

    // Statistical agreement at a larger size.
    int agree = 0;
    const int samples = 60;
    for (int i = 0; i < samples; ++i) {
        SampleConfig cfg{kGraph, 30, 1, 31337, 0.5};
        Structure b = sample_random_structure(cfg, static_cast<uint64_t>(i));
        Evaluator ev(b, &reg);
        bool all = true;
        for (int v = 0; v < b.size() && all; ++v)
            all = ev.evaluate_indexed(open, {"x"}, {v}) == theta.satisfied_by(b, {v});
        if (all) ++agree;
    }
    CHECK(agree >= samples * 9 / 10);

    CHECK_THROWS_AS(asympt_theta(parse_formula("exists x. E(x,x)", kGraph), kGraph, &reg, 3),
                    UsageError);
}
