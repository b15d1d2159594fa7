// Acceptance suite: one check per shipping criterion, each printing a
// PASS/FAIL line with its runtime. Exits nonzero if any check fails.

#include "embq/canonical.hpp"
#include "embq/catalog.hpp"
#include "embq/chain.hpp"
#include "embq/evaluate.hpp"
#include "embq/game.hpp"
#include "embq/interpretation.hpp"
#include "embq/morphism.hpp"
#include "embq/parser.hpp"
#include "embq/qelim.hpp"
#include "embq/symgame.hpp"
#include "embq/zeroone.hpp"

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace embq;

namespace {

const Vocabulary kGraph = Vocabulary::of({{"E", 2}});
const Vocabulary kHaertig = Vocabulary::of({{"U", 1}, {"V", 1}});

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure{message};
}

// --- 1. Symbolic game reproduction of the two equivalence structures ---
void check_symbolic_game() {
    SymEqStructure e0 = parse_profile("(aleph1 x aleph0)");
    SymEqStructure e1 = parse_profile("(aleph1 x aleph0),(aleph0 x 1)");

    require(sym_game(e0, e1, 1).survives, "duplicator must survive one round");
    SymGameOutcome two = sym_game(e0, e1, 2);
    require(!two.survives, "spoiler must win the two-round game");
    require(!two.witness.empty(), "missing spoiler witness");
    const SymGameMove& first = two.witness.front();
    require(!first.spoiler_left, "first move must go through the reverse embedding");
    require(first.kind == SymGameMove::Kind::FreshUntouched, "first move must pick a fresh class");
    require(first.class_size == SymCard::aleph0(), "first move must pick the aleph0 class");
    require(two.blocked_direction == "left-to-right", "the blocked direction must be left-to-right");
}

// --- 2. Embeddability law for disjoint unions of cliques ---
void check_imkn_law() {
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 4; ++n) {
            Structure src = im_kn(m, n);
            for (int m2 = 1; m2 <= 4; ++m2)
                for (int n2 = 1; n2 <= 4; ++n2) {
                    Structure dst = im_kn(m2, n2);
                    bool found = find_morphism(MorphismQuery::embedding(src, dst)).has_value();
                    bool expected = m <= m2 && n <= n2;
                    require(found == expected,
                            "I" + std::to_string(m) + "K" + std::to_string(n) + " -> I" +
                                std::to_string(m2) + "K" + std::to_string(n2) + ": got " +
                                (found ? "embedding" : "none"));
                }
        }
}

// --- 3. Homogeneity of the stock structures ---
void check_homogeneity_catalog() {
    require(is_quasi_homogeneous(pentagon()).homogeneous, "pentagon must be homogeneous");
    require(is_quasi_homogeneous(k3_times_k3()).homogeneous, "rook graph must be homogeneous");
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n)
            require(is_quasi_homogeneous(im_kn(m, n)).homogeneous,
                    "I" + std::to_string(m) + "K" + std::to_string(n) + " must be homogeneous");

    Structure cycle4_minus = [] {
        Structure c4 = cycle_graph(4);
        std::map<std::string, std::set<std::vector<int>>> interp;
        for (const auto& [rel, tuples] : c4.interp()) interp[rel] = tuples;
        interp["E"].erase({0, 3});
        interp["E"].erase({3, 0});
        return Structure::make_indexed(c4.vocab(), c4.universe(), std::move(interp));
    }();
    require(isomorphic(cycle4_minus, path_graph(4)), "cycle(4) minus an edge is the 4-path");

    for (const Structure& bad : {path_graph(3), cycle4_minus}) {
        HomogeneityReport report = is_quasi_homogeneous(bad);
        require(!report.homogeneous, "structure must fail the check");
        require(report.counterexample.has_value(), "failure must carry a counterexample");
        const auto& [first, second] = *report.counterexample;
        require(atomic_type_of(bad, first) == atomic_type_of(bad, second),
                "counterexample tuples must share their atomic type");
        MorphismQuery q = MorphismQuery::embedding(bad, bad);
        for (size_t i = 0; i < first.size(); ++i) q.pins.push_back({first[i], second[i]});
        require(!find_morphism(q).has_value(), "counterexample must admit no self-embedding");
    }
}

// --- 4. Quantifier elimination on every homogeneous stock structure ---
void check_qe_suite() {
    QuantifierRegistry reg = testgen::test_registry();

    std::vector<std::pair<Structure, Vocabulary>> suite;
    suite.push_back({pentagon(), kGraph});
    suite.push_back({k3_times_k3(), kGraph});
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) suite.push_back({im_kn(m, n), kGraph});
    suite.push_back({haertig_chain(4), kHaertig});
    suite.push_back({haertig_chain(5), kHaertig});

    for (const auto& [a, vocab] : suite) {
        require(is_quasi_homogeneous(a).homogeneous, "suite member must be quasi-homogeneous");
        testgen::FormulaGenOptions opts;
        opts.max_depth = 3;
        opts.quantifiers = vocab == kGraph
                               ? std::vector<std::string>{"Qedge", "Qtriangle", "Qtwocliques"}
                               : std::vector<std::string>{"QhasU3", "QhasU2", "QcntU3"};
        testgen::FormulaGen gen(vocab, reg, opts, 271828);
        for (int i = 0; i < 50; ++i) {
            FormulaPtr phi = gen.formula();
            TypeDisjunction theta = eliminate_quantifiers(a, phi, &reg);
            // Independent re-verification by exhaustive evaluation.
            auto fv = free_variables(phi);
            std::vector<std::string> vars(fv.begin(), fv.end());
            Evaluator ev(a, &reg);
            std::vector<int> tuple(vars.size(), 0);
            const int n_elems = a.size();
            while (true) {
                require(ev.evaluate_indexed(phi, vars, tuple) == theta.satisfied_by(a, tuple),
                        "eliminated formula must agree everywhere");
                int k = static_cast<int>(tuple.size()) - 1;
                while (k >= 0 && tuple[k] == n_elems - 1) { tuple[k] = 0; --k; }
                if (k < 0) break;
                ++tuple[k];
            }
        }
    }
}

// --- 5. Stabilization along the two-colour chain ---
void check_haertig_chain() {
    QuantifierRegistry reg = testgen::test_registry();
    std::vector<Structure> members;
    for (int i = 0; i <= 8; ++i) members.push_back(haertig_chain(i));
    Chain chain = Chain::build(std::move(members));

    FormulaPtr at_least_3 = parse_formula("QhasU3[x: U(x)]", kHaertig, &reg);
    TypeChainReport report = type_chain(chain, at_least_3, &reg);
    require(report.monotone, "type sets must be monotone");
    require(report.stabilization_index == 4, "stabilization must happen at index 4");
    for (int i = 0; i <= 8; ++i) {
        bool truth = evaluate(chain.members()[i], at_least_3, {}, &reg);
        require(truth == (i >= 4), "sentence must hold exactly from index 4 on");
        require(report.type_sets[i].empty() != (i >= 4), "type sets must witness the truth value");
    }

    // Equicardinality alternates with parity along the same chain, so it
    // admits no stabilized value.
    bool previous = false;
    for (int i = 0; i <= 8; ++i) {
        const Structure& a = chain.members()[i];
        bool equal = a.tuples("U").size() == a.tuples("V").size();
        require(equal == (i % 2 == 1), "card equality must hold exactly at odd indices");
        if (i > 0) require(equal != previous, "card equality must alternate");
        previous = equal;
    }
}

// --- 6. Exact game value versus the literal recursive oracle ---
void check_game_oracle() {
    std::vector<Structure> twos;
    for (int mask = 0; mask < 16; ++mask) {
        std::map<std::string, std::set<std::vector<int>>> interp;
        const std::vector<std::vector<int>> atoms{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) interp["E"].insert(atoms[i]);
        twos.push_back(Structure::make_indexed(kGraph, {"a", "b"}, std::move(interp)));
    }
    for (const auto& a : twos)
        for (const auto& b : twos)
            for (int n = 1; n <= 3; ++n) {
                Position p{&a, {}, &b, {}};
                require(duplicator_survives(p, n).survives == oracle::game_survives(a, {}, b, {}, n),
                        "engine and oracle disagree on a 2-element pair");
            }

    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        Structure a = testgen::random_structure(kGraph, 3, rng.next());
        Structure b = testgen::random_structure(kGraph, 3, rng.next());
        for (int n = 1; n <= 2; ++n) {
            Position p{&a, {}, &b, {}};
            require(duplicator_survives(p, n).survives == oracle::game_survives(a, {}, b, {}, n),
                    "engine and oracle disagree on a random 3-element pair");
        }
    }
}

// --- 7. Survival transfers low-rank sentences ---
void check_game_soundness() {
    QuantifierRegistry reg = testgen::test_registry();
    Rng rng(1618);
    testgen::FormulaGenOptions opts;
    opts.max_depth = 2;
    opts.quantifiers = {"Qedge", "Qtriangle", "Qtwocliques"};
    testgen::FormulaGen gen(kGraph, reg, opts, 314159);

    const int n = 2;
    int pairs = 0;
    while (pairs < 20) {
        Structure a = testgen::random_structure(kGraph, 2 + rng.below(2), rng.next());
        Structure b = testgen::relabel(a, "r");
        Position p{&a, {}, &b, {}};
        if (!duplicator_survives(p, n).survives) continue;
        for (int i = 0; i < 200; ++i) {
            FormulaPtr sentence = gen.sentence_with_rank_at_most(n);
            require(evaluate(a, sentence, {}, &reg) == evaluate(b, sentence, {}, &reg),
                    "surviving pair disagrees on a low-rank sentence");
        }
        ++pairs;
    }
}

// --- 8. The embedding-to-homomorphism reduction, exhaustively at desk scale ---
void check_hom_reduction() {
    auto generators = enumerate_structures_up_to_iso(kGraph, 0, 3);
    auto targets = enumerate_structures_up_to_iso(kGraph, 0, 4);
    for (const Structure& g : generators) {
        for (const Structure& a : targets) {
            bool in_closure = find_morphism(MorphismQuery::embedding(g, a)).has_value();
            bool via_hom = hom_closure_member({g}, f_transform(a));
            require(in_closure == via_hom, "closure membership must match the homomorphism route");
        }
    }
}

// --- 9. Fixed-seed statistical suite ---
void check_statistics() {
    QuantifierRegistry reg = testgen::test_registry();

    // (a) Some distinct connected pair, n = 20.
    FormulaPtr edge = parse_formula("exists x. exists y. (x != y & E(x,y))", kGraph);
    SampleConfig cfg_a{kGraph, 20, 400, 42, 0.5};
    MuEstimate mu = estimate_mu(edge, cfg_a, &reg);
    require(mu.estimate >= 0.99, "edge sentence estimate below 0.99");

    // (b) Five fixed quantifier applications: the computed quantifier-free
    // form agrees with the formula on at least 95% of the samples each.
    std::vector<std::string> formulas = {
        "Qedge[w0,w1: E(w0,w1)]",
        "Qedge[w0,w1: (E(w0,w1) & E(w0,x))]",
        "QcntU3[y: E(y,x)]",
        "Qedge[w0,w1: (E(w0,w1) & !E(w0,w1))]",
        "QhasU2[y: (E(x,y) & E(y,x))]",
    };
    for (const auto& text : formulas) {
        FormulaPtr phi = parse_formula(text, kGraph, &reg);
        TypeDisjunction theta = asympt_theta(phi, kGraph, &reg, 4);
        auto fv = free_variables(phi);
        std::vector<std::string> vars(fv.begin(), fv.end());
        int agree = 0;
        const int samples = 200;
        for (int i = 0; i < samples; ++i) {
            SampleConfig cfg{kGraph, 30, 1, 42, 0.5};
            Structure b = sample_random_structure(cfg, static_cast<uint64_t>(i));
            Evaluator ev(b, &reg);
            bool all = true;
            if (vars.empty()) {
                all = ev.evaluate_indexed(phi, {}, {}) == theta.satisfied_by(b, {});
            } else {
                for (int v = 0; v < b.size() && all; ++v)
                    all = ev.evaluate_indexed(phi, vars, {v}) == theta.satisfied_by(b, {v});
            }
            if (all) ++agree;
        }
        require(agree >= samples * 95 / 100, "agreement below 95% for " + text);
    }

    // (c) Extension property rate for a pinned 3-element structure.
    Structure p3 = path_graph(3);
    int holds = 0;
    const int samples = 200;
    for (int i = 0; i < samples; ++i) {
        SampleConfig cfg{kGraph, 25, 1, 42, 0.5};
        Structure b = sample_random_structure(cfg, static_cast<uint64_t>(1000 + i));
        if (extension_property_holds(p3, {"0"}, b)) ++holds;
    }
    require(holds >= samples * 90 / 100, "extension property rate below 90%");
}

// --- 10. The interpretation pipeline ---
void check_interpretation_pipeline() {
    QuantifierRegistry reg = testgen::test_registry();
    Interpretation regularity;
    regularity.sigma = kGraph;
    regularity.defs["E"] = {{"x", "y"},
                            parse_formula("((U(x) & U(y)) | (V(x) & V(y)))", kHaertig)};

    auto out_degree = [](const Structure& g, int v) {
        int d = 0;
        for (const auto& t : g.tuples("E"))
            if (t[0] == v) ++d;
        return d;
    };
    auto is_regular = [&](const Structure& g) {
        for (int v = 1; v < g.size(); ++v)
            if (out_degree(g, v) != out_degree(g, 0)) return false;
        return true;
    };
    auto component_count = [](const Structure& g) {
        std::vector<int> comp(g.size(), -1);
        int count = 0;
        for (int start = 0; start < g.size(); ++start) {
            if (comp[start] >= 0) continue;
            std::vector<int> stack{start};
            comp[start] = count;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (const auto& t : g.tuples("E")) {
                    int next = t[0] == v ? t[1] : t[1] == v ? t[0] : -1;
                    if (next >= 0 && comp[next] < 0) {
                        comp[next] = count;
                        stack.push_back(next);
                    }
                }
            }
            ++count;
        }
        return count;
    };

    // Odd chain: two equal groups, fully connected inside (the defining
    // formula holds at x = y, so each group carries loops); regular.
    Structure g3 = apply_interpretation(regularity, haertig_chain(3));
    require(component_count(g3) == 2, "odd image must have two components");
    require(is_regular(g3), "odd image must be regular");

    // Even chain: group sizes 3 and 2; regularity fails.
    Structure g4 = apply_interpretation(regularity, haertig_chain(4));
    require(component_count(g4) == 2, "even image must have two components");
    require(!is_regular(g4), "even image must not be regular");
    std::multiset<int> degrees;
    for (int v = 0; v < g4.size(); ++v) degrees.insert(out_degree(g4, v));
    require(degrees == std::multiset<int>{2, 2, 3, 3, 3}, "even image must be K2 + K3 with loops");
    // Dropping the loops leaves exactly K2 + K3.
    {
        std::map<std::string, std::set<std::vector<int>>> loopless;
        for (const auto& t : g4.tuples("E"))
            if (t[0] != t[1]) loopless["E"].insert(t);
        Structure stripped = Structure::make_indexed(kGraph, g4.universe(), std::move(loopless));
        Structure expected = Structure::disjoint_union(im_kn(1, 2), im_kn(1, 3));
        require(isomorphic(stripped, expected), "loop-free even image must be K2 + K3");
    }

    // Substitution side: evaluation transports through the interpretation.
    testgen::FormulaGenOptions opts;
    opts.max_depth = 2;
    opts.quantifiers = {"Qedge"};
    testgen::FormulaGen gen(kGraph, reg, opts, 562951);
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        FormulaPtr phi = gen.formula();
        Structure a = haertig_chain(2 + static_cast<int>(rng.below(4)));
        Structure image = apply_interpretation(regularity, a, &reg);
        FormulaPtr star = substitute_interpretation(phi, regularity);
        Assignment assignment;
        for (const auto& v : free_variables(phi)) assignment[v] = a.universe()[rng.below(a.size())];
        require(evaluate(a, star, assignment, &reg) == evaluate(image, phi, assignment, &reg),
                "substituted formula must agree with the interpreted structure");
    }
}

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<void()> run;
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"symbolic-game-two-rounds", 1.0, check_symbolic_game},
        {"imkn-embeddability-law", 10.0, check_imkn_law},
        {"homogeneity-catalog", 30.0, check_homogeneity_catalog},
        {"quantifier-elimination-suite", 60.0, check_qe_suite},
        {"haertig-chain-stabilization", 60.0, check_haertig_chain},
        {"game-oracle-equivalence", 120.0, check_game_oracle},
        {"game-soundness-sampled", 120.0, check_game_soundness},
        {"hom-reduction-desk-scale", 120.0, check_hom_reduction},
        {"zero-one-statistics", 300.0, check_statistics},
        {"interpretation-pipeline", 60.0, check_interpretation_pipeline},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            c.run();
        } catch (const Failure& f) {
            ok = false;
            detail = f.message;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && seconds > c.budget_seconds) {
            ok = false;
            detail = "over budget (" + std::to_string(c.budget_seconds) + "s)";
        }
        std::printf("%s %-32s %7.2fs%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(), seconds,
                    detail.empty() ? "" : "  -- ", detail.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
