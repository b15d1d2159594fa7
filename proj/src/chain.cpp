#include "embq/chain.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <functional>

namespace embq {

Chain Chain::build(std::vector<Structure> members) {
    Chain c;
    for (size_t i = 0; i + 1 < members.size(); ++i) {
        if (members[i].vocab() != members[i + 1].vocab())
            throw UsageError("chain: vocabulary mismatch at index " + std::to_string(i + 1));
        auto f = find_morphism(MorphismQuery::embedding(members[i], members[i + 1]));
        if (!f)
            throw UsageError("chain: member " + std::to_string(i) + " does not embed into member " +
                             std::to_string(i + 1));
        c.embeddings_.push_back(std::move(*f));
    }
    c.members_ = std::move(members);
    return c;
}

namespace {

void require_quasi_homogeneous(const Chain& chain, const HomogeneityOptions& opts) {
    for (size_t i = 0; i < chain.length(); ++i) {
        if (!is_quasi_homogeneous_cached(chain.members()[i], opts))
            throw UsageError("chain member " + std::to_string(i) + " is not quasi-homogeneous");
    }
}

std::vector<std::vector<int>> all_assignments(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    if (n == 0) return out;
    std::vector<int> tuple(k, 0);
    while (true) {
        out.push_back(tuple);
        int i = k - 1;
        while (i >= 0 && tuple[i] == n - 1) { tuple[i] = 0; --i; }
        if (i < 0) break;
        ++tuple[i];
    }
    return out;
}

// Realized-type set of satisfying assignments on one structure.
std::set<AtomicType> realized_types(const Structure& a, const FormulaPtr& f,
                                    const std::vector<std::string>& vars,
                                    const QuantifierRegistry* registry) {
    Evaluator ev(a, registry);
    std::set<AtomicType> out;
    for (const auto& assignment : all_assignments(a.size(), static_cast<int>(vars.size()))) {
        if (ev.evaluate_indexed(f, vars, assignment)) out.insert(atomic_type_of(a, assignment));
    }
    return out;
}

bool subset_of(const std::set<AtomicType>& a, const std::set<AtomicType>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

TypeChainReport type_chain(const Chain& chain, const FormulaPtr& f,
                           const QuantifierRegistry* registry, const HomogeneityOptions& opts) {
    if (chain.length() == 0) throw UsageError("type_chain: empty chain");
    if (f->kind != Formula::Kind::QApp)
        throw UsageError("type_chain: formula must be a quantifier application");
    for (const auto& b : f->bindings)
        if (!is_quantifier_free(b.body))
            throw UsageError("type_chain: quantifier application bodies must be quantifier-free");
    if (!registry) throw UsageError("type_chain: a quantifier registry is required");
    if (!registry->get(f->name).embedding_closed())
        throw UsageError("type_chain: quantifier '" + f->name +
                         "' is not embedding-closed (complement kinds are downward closed)");
    require_quasi_homogeneous(chain, opts);

    auto fv = free_variables(f);
    TypeChainReport report;
    report.vars.assign(fv.begin(), fv.end());
    for (const auto& member : chain.members())
        report.type_sets.push_back(realized_types(member, f, report.vars, registry));

    report.monotone = true;
    for (size_t i = 0; i + 1 < report.type_sets.size(); ++i) {
        if (!subset_of(report.type_sets[i], report.type_sets[i + 1])) {
            report.monotone = false;
            break;
        }
    }
    if (!report.monotone)
        throw EngineError("type_chain: realized-type sets are not monotone along the chain");

    int k = static_cast<int>(report.type_sets.size()) - 1;
    while (k > 0 && report.type_sets[k - 1] == report.type_sets.back()) --k;
    report.stabilization_index = k;
    report.theta.vocab = chain.members().front().vocab();
    report.theta.vars = report.vars;
    report.theta.types = report.type_sets[k];
    return report;
}

namespace {

struct StabilizeContext {
    const Chain& chain;
    const QuantifierRegistry* registry;
    const HomogeneityOptions& opts;
};

Stabilization stabilize_primitive(const StabilizeContext& ctx, const FormulaPtr& prim, int from) {
    auto fv = free_variables(prim);
    std::vector<std::string> vars(fv.begin(), fv.end());
    const int len = static_cast<int>(ctx.chain.length());

    std::vector<std::set<AtomicType>> sets;
    for (int i = from; i < len; ++i)
        sets.push_back(realized_types(ctx.chain.members()[i], prim, vars, ctx.registry));
    for (size_t i = 0; i + 1 < sets.size(); ++i) {
        if (!subset_of(sets[i], sets[i + 1]))
            throw EngineError("stabilize_formula: non-monotone type sets for " + print_formula(prim));
    }
    // Witnessed stabilization: the final segment must be constant with a
    // tail of length >= 2 inside the provided chain; the existence of the
    // true stabilization point is only guaranteed for infinite chains.
    int k = static_cast<int>(sets.size()) - 1;
    while (k > 0 && sets[k - 1] == sets.back()) --k;
    if (k + 2 > static_cast<int>(sets.size()))
        throw UsageError("stabilize_formula: chain too short to witness stabilization of subformula " +
                         print_formula(prim));
    TypeDisjunction theta;
    theta.vocab = ctx.chain.members().front().vocab();
    theta.vars = vars;
    theta.types = sets[k];
    return {from + k, theta.to_formula()};
}

Stabilization stabilize_rec(const StabilizeContext& ctx, const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            return {0, f};
        case Formula::Kind::Not: {
            auto sub = stabilize_rec(ctx, f->kids[0]);
            return {sub.index, f_not(sub.theta)};
        }
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            int worst = 0;
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) {
                auto sub = stabilize_rec(ctx, k);
                worst = std::max(worst, sub.index);
                kids.push_back(sub.theta);
            }
            return {worst, f->kind == Formula::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids))};
        }
        case Formula::Kind::Forall:
            // Universal quantification is not preserved by embeddings;
            // route through its dual.
            return stabilize_rec(ctx, f_not(f_exists(f->var, f_not(f->kids[0]))));
        case Formula::Kind::Exists: {
            auto body = stabilize_rec(ctx, f->kids[0]);
            return stabilize_primitive(ctx, f_exists(f->var, body.theta), body.index);
        }
        case Formula::Kind::QApp: {
            if (!ctx.registry) throw UsageError("stabilize_formula: a quantifier registry is required");
            const QuantifierDef& q = ctx.registry->get(f->name);
            if (!q.embedding_closed()) {
                // Complement kind: membership is the negation of the inner
                // quantifier's, which is upward closed.
                if (!ctx.registry->has(q.inner->name))
                    throw UsageError("stabilize_formula: inner quantifier '" + q.inner->name +
                                     "' of '" + q.name + "' must be registered");
                return stabilize_rec(ctx, f_not(f_qapp(q.inner->name, f->bindings)));
            }
            int worst = 0;
            std::vector<QBinding> bindings;
            for (const auto& b : f->bindings) {
                auto sub = stabilize_rec(ctx, b.body);
                worst = std::max(worst, sub.index);
                bindings.push_back({b.vars, sub.theta});
            }
            return stabilize_primitive(ctx, f_qapp(f->name, std::move(bindings)), worst);
        }
    }
    throw EngineError("stabilize_formula: unhandled node");
}

} // namespace

Stabilization stabilize_formula(const Chain& chain, const FormulaPtr& f,
                                const QuantifierRegistry* registry, const HomogeneityOptions& opts) {
    if (chain.length() == 0) throw UsageError("stabilize_formula: empty chain");
    require_quasi_homogeneous(chain, opts);
    StabilizeContext ctx{chain, registry, opts};
    Stabilization result = stabilize_rec(ctx, f);

    // Normalize to a type disjunction over the original free variables and
    // verify the equivalence on every chain member from N on.
    auto fv = free_variables(f);
    std::vector<std::string> vars(fv.begin(), fv.end());
    const Vocabulary& vocab = chain.members().front().vocab();
    TypeDisjunction normal = qf_to_type_disjunction(result.theta, vocab, vars);
    result.theta = normal.to_formula();

    for (size_t i = result.index; i < chain.length(); ++i) {
        const Structure& a = chain.members()[i];
        Evaluator ev(a, registry);
        for (const auto& assignment : all_assignments(a.size(), static_cast<int>(vars.size()))) {
            if (ev.evaluate_indexed(f, vars, assignment) != normal.satisfied_by(a, assignment))
                throw EngineError("stabilize_formula: equivalence verification failed at index " +
                                  std::to_string(i));
        }
    }
    return result;
}

std::vector<std::pair<Structure, bool>> stabilizer_antichain(const std::vector<Structure>& catalog,
                                                             const FormulaPtr& sentence,
                                                             const QuantifierRegistry* registry) {
    if (catalog.empty()) throw UsageError("stabilizer_antichain: empty catalog");
    const size_t n = catalog.size();
    if (n > 20) throw CapError("stabilizer_antichain: catalog too large (cap 20)");
    for (const auto& s : catalog)
        if (s.vocab() != catalog.front().vocab())
            throw UsageError("stabilizer_antichain: vocabulary mismatch in catalog");
    if (!free_variables(sentence).empty())
        throw UsageError("stabilizer_antichain: formula must be a sentence");

    std::vector<bool> truth(n);
    for (size_t i = 0; i < n; ++i) truth[i] = evaluate(catalog[i], sentence, {}, registry);

    std::vector<std::vector<bool>> below(n, std::vector<bool>(n)); // below[i][j]: i <= j
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) below[i][j] = embeddable(catalog[i], catalog[j]);

    std::vector<size_t> stabilizers;
    for (size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (size_t j = 0; j < n; ++j)
            if (below[i][j] && truth[j] != truth[i]) { ok = false; break; }
        if (ok) stabilizers.push_back(i);
    }

    auto comparable = [&](size_t i, size_t j) { return below[i][j] || below[j][i]; };
    auto valid = [&](const std::vector<size_t>& c) {
        for (size_t x = 0; x < c.size(); ++x)
            for (size_t y = x + 1; y < c.size(); ++y)
                if (comparable(c[x], c[y])) return false;
        for (size_t b = 0; b < n; ++b) {
            bool covered = false;
            for (size_t x : c)
                if (comparable(b, x)) { covered = true; break; }
            if (!covered) return false;
        }
        return true;
    };

    // Smallest antichain of stabilizers covering the catalog, first in
    // lexicographic candidate order; size-minimal implies inclusion-minimal.
    std::vector<size_t> chosen;
    std::function<bool(size_t, size_t, std::vector<size_t>&)> pick =
        [&](size_t start, size_t remaining, std::vector<size_t>& acc) -> bool {
        if (remaining == 0) {
            if (valid(acc)) { chosen = acc; return true; }
            return false;
        }
        for (size_t idx = start; idx < stabilizers.size(); ++idx) {
            acc.push_back(stabilizers[idx]);
            if (pick(idx + 1, remaining - 1, acc)) return true;
            acc.pop_back();
        }
        return false;
    };
    for (size_t size = 1; size <= stabilizers.size() && chosen.empty(); ++size) {
        std::vector<size_t> acc;
        pick(0, size, acc);
    }
    if (chosen.empty())
        throw UsageError("stabilizer_antichain: no antichain of stabilizers covers the catalog");

    std::vector<std::pair<Structure, bool>> out;
    for (size_t i : chosen) out.push_back({catalog[i], truth[i]});
    return out;
}

} // namespace embq
