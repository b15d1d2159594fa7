#include "embq/evaluate.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <sstream>

namespace embq {

int Evaluator::Env::lookup(const std::string& v) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        if (it->first == v) return it->second;
    return -1;
}

void Evaluator::Env::push(const std::string& v, int idx) { vars.push_back({v, idx}); }

void Evaluator::Env::pop(size_t n) { vars.resize(vars.size() - n); }

Evaluator::Evaluator(const Structure& a, const QuantifierRegistry* registry)
    : a_(a), registry_(registry) {}

const std::vector<std::string>& Evaluator::free_of(const FormulaPtr& f) {
    auto it = free_cache_.find(f.get());
    if (it != free_cache_.end()) return it->second;
    auto fv = free_variables(f);
    std::vector<std::string> sorted(fv.begin(), fv.end());
    return free_cache_.emplace(f.get(), std::move(sorted)).first->second;
}

bool Evaluator::evaluate(const FormulaPtr& f, const Assignment& assignment) {
    Env env;
    for (const auto& [var, id] : assignment) env.push(var, a_.index_of(id));
    for (const auto& v : free_of(f)) {
        if (env.lookup(v) < 0) throw UsageError("evaluate: unassigned free variable '" + v + "'");
    }
    return eval(f, env);
}

bool Evaluator::evaluate_indexed(const FormulaPtr& f, const std::vector<std::string>& vars,
                                 const std::vector<int>& values) {
    if (vars.size() != values.size()) throw UsageError("evaluate_indexed: vars/values length mismatch");
    Env env;
    for (size_t i = 0; i < vars.size(); ++i) env.push(vars[i], values[i]);
    for (const auto& v : free_of(f)) {
        if (env.lookup(v) < 0) throw UsageError("evaluate: unassigned free variable '" + v + "'");
    }
    return eval(f, env);
}

Structure Evaluator::build_sigma_structure(const FormulaPtr& f, Env& env) {
    if (!registry_) throw UsageError("evaluate: quantifier '" + f->name + "' used without a registry");
    const QuantifierDef& q = registry_->get(f->name);
    const auto& sigma_rels = q.sigma.relations();
    if (f->bindings.size() != sigma_rels.size())
        throw UsageError("quantifier '" + f->name + "': expected " + std::to_string(sigma_rels.size()) +
                         " bindings, got " + std::to_string(f->bindings.size()));
    std::map<std::string, std::set<std::vector<int>>> interp;
    size_t bi = 0;
    const int n = a_.size();
    for (const auto& [rel, ar] : sigma_rels) {
        const QBinding& b = f->bindings[bi++];
        if (static_cast<int>(b.vars.size()) != ar)
            throw UsageError("quantifier '" + f->name + "': binding for " + rel + " must bind " +
                             std::to_string(ar) + " variables");
        auto& out = interp[rel];
        if (n == 0) continue;
        std::vector<int> tuple(ar, 0);
        while (true) {
            for (int k = 0; k < ar; ++k) env.push(b.vars[k], tuple[k]);
            bool sat = eval(b.body, env);
            env.pop(ar);
            if (sat) out.insert(tuple);
            int k = ar - 1;
            while (k >= 0 && tuple[k] == n - 1) { tuple[k] = 0; --k; }
            if (k < 0) break;
            ++tuple[k];
        }
    }
    return Structure::make_indexed(q.sigma, a_.universe(), std::move(interp));
}

bool Evaluator::eval(const FormulaPtr& f, Env& env) {
    // Memo key: values of the node's free variables, in sorted name order.
    const auto& fv = free_of(f);
    std::string key;
    key.reserve(fv.size() * 3);
    for (const auto& v : fv) {
        int idx = env.lookup(v);
        if (idx < 0) throw UsageError("evaluate: unassigned free variable '" + v + "'");
        key += std::to_string(idx);
        key += ',';
    }
    auto& node_memo = memo_[f.get()];
    auto hit = node_memo.find(key);
    if (hit != node_memo.end()) return hit->second;

    bool result = false;
    switch (f->kind) {
        case Formula::Kind::True:
            result = true;
            break;
        case Formula::Kind::False:
            result = false;
            break;
        case Formula::Kind::Atom: {
            const int ar = a_.vocab().arity(f->name);
            if (static_cast<int>(f->args.size()) != ar)
                throw UsageError("atom " + f->name + ": arity mismatch");
            std::vector<int> tuple(ar);
            for (int i = 0; i < ar; ++i) tuple[i] = env.lookup(f->args[i]);
            result = a_.has(f->name, tuple);
            break;
        }
        case Formula::Kind::Eq:
            result = env.lookup(f->args[0]) == env.lookup(f->args[1]);
            break;
        case Formula::Kind::Not:
            result = !eval(f->kids[0], env);
            break;
        case Formula::Kind::And: {
            result = true;
            for (const auto& k : f->kids)
                if (!eval(k, env)) { result = false; break; }
            break;
        }
        case Formula::Kind::Or: {
            result = false;
            for (const auto& k : f->kids)
                if (eval(k, env)) { result = true; break; }
            break;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            const bool exists = f->kind == Formula::Kind::Exists;
            result = !exists;
            for (int e = 0; e < a_.size(); ++e) {
                env.push(f->var, e);
                bool sub = eval(f->kids[0], env);
                env.pop(1);
                if (exists && sub) { result = true; break; }
                if (!exists && !sub) { result = false; break; }
            }
            break;
        }
        case Formula::Kind::QApp: {
            Structure sigma_structure = build_sigma_structure(f, env);
            result = quantifier_member(registry_->get(f->name), sigma_structure);
            break;
        }
    }
    node_memo.emplace(std::move(key), result);
    return result;
}

bool evaluate(const Structure& a, const FormulaPtr& f, const Assignment& assignment,
              const QuantifierRegistry* registry) {
    Evaluator ev(a, registry);
    return ev.evaluate(f, assignment);
}

bool TypeDisjunction::satisfied_by(const Structure& a, const std::vector<int>& tuple) const {
    return types.count(atomic_type_of(a, tuple)) > 0;
}

FormulaPtr TypeDisjunction::to_formula() const {
    std::vector<FormulaPtr> disjuncts;
    disjuncts.reserve(types.size());
    for (const auto& t : types) disjuncts.push_back(type_to_formula(t, vocab, vars));
    return f_or(std::move(disjuncts));
}

std::string TypeDisjunction::to_string() const {
    std::ostringstream out;
    out << "{";
    bool first = true;
    for (const auto& t : types) {
        if (!first) out << " | ";
        first = false;
        out << t.to_string();
    }
    out << "}";
    return out.str();
}

FormulaPtr type_to_formula(const AtomicType& t, const Vocabulary& vocab,
                           const std::vector<std::string>& vars) {
    if (static_cast<int>(vars.size()) != t.arity)
        throw UsageError("type_to_formula: variable count does not match type arity");
    std::vector<FormulaPtr> literals;
    for (int i = 0; i < t.arity; ++i)
        for (int j = i + 1; j < t.arity; ++j) {
            auto eq = f_eq(vars[i], vars[j]);
            literals.push_back(t.eq[i] == t.eq[j] ? eq : f_not(eq));
        }
    // One representative position per equality class.
    const int c = t.num_classes();
    std::vector<int> rep(c, -1);
    for (int i = 0; i < t.arity; ++i)
        if (rep[t.eq[i]] < 0) rep[t.eq[i]] = i;
    for (const auto& [rel, ar] : vocab.relations()) {
        if (c == 0) continue;
        std::vector<int> idx(ar, 0);
        while (true) {
            std::vector<std::string> args(ar);
            for (int k = 0; k < ar; ++k) args[k] = vars[rep[idx[k]]];
            auto atom = f_atom(rel, std::move(args));
            literals.push_back(t.facts.count({rel, idx}) ? atom : f_not(atom));
            int k = ar - 1;
            while (k >= 0 && idx[k] == c - 1) { idx[k] = 0; --k; }
            if (k < 0) break;
            ++idx[k];
        }
    }
    return f_and(std::move(literals));
}

TypeDisjunction qf_to_type_disjunction(const FormulaPtr& f, const Vocabulary& vocab,
                                       const std::vector<std::string>& vars,
                                       const EnumerationLimits& limits) {
    if (!is_quantifier_free(f))
        throw UsageError("qf_to_type_disjunction: formula is not quantifier-free");
    auto fv = free_variables(f);
    for (const auto& v : fv)
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            throw UsageError("qf_to_type_disjunction: free variable '" + v + "' not among the given variables");
    TypeDisjunction out;
    out.vocab = vocab;
    out.vars = vars;
    for (auto& t : enumerate_atomic_types(vocab, static_cast<int>(vars.size()), limits)) {
        Structure model = t.canonical_model(vocab);
        Evaluator ev(model);
        if (ev.evaluate_indexed(f, vars, t.canonical_tuple())) out.types.insert(std::move(t));
    }
    return out;
}

} // namespace embq
