#include "embq/interpretation.hpp"

#include "embq/canonical.hpp"
#include "embq/errors.hpp"

#include <algorithm>
#include <functional>

namespace embq {

void Interpretation::validate() const {
    for (const auto& [rel, ar] : sigma.relations()) {
        auto it = defs.find(rel);
        if (it == defs.end()) throw UsageError("interpretation: no defining formula for '" + rel + "'");
        if (static_cast<int>(it->second.params.size()) != ar)
            throw UsageError("interpretation: '" + rel + "' needs " + std::to_string(ar) + " parameters");
        std::set<std::string> distinct(it->second.params.begin(), it->second.params.end());
        if (distinct.size() != it->second.params.size())
            throw UsageError("interpretation: parameters of '" + rel + "' must be distinct");
        for (const auto& v : free_variables(it->second.body))
            if (!distinct.count(v))
                throw UsageError("interpretation: defining formula for '" + rel +
                                 "' has stray free variable '" + v + "'");
    }
    for (const auto& [rel, _] : defs)
        if (!sigma.has(rel)) throw UsageError("interpretation: '" + rel + "' not in sigma");
}

Structure apply_interpretation(const Interpretation& interp, const Structure& a,
                               const QuantifierRegistry* registry) {
    interp.validate();
    Evaluator ev(a, registry);
    std::map<std::string, std::set<std::vector<int>>> result;
    const int n = a.size();
    for (const auto& [rel, ar] : interp.sigma.relations()) {
        const auto& def = interp.defs.at(rel);
        auto& out = result[rel];
        if (n == 0) continue;
        std::vector<int> tuple(ar, 0);
        while (true) {
            if (ev.evaluate_indexed(def.body, def.params, tuple)) out.insert(tuple);
            int k = ar - 1;
            while (k >= 0 && tuple[k] == n - 1) { tuple[k] = 0; --k; }
            if (k < 0) break;
            ++tuple[k];
        }
    }
    return Structure::make_indexed(interp.sigma, a.universe(), std::move(result));
}

namespace {

FormulaPtr replace_atoms(const FormulaPtr& f,
                         const std::function<FormulaPtr(const Formula&)>& atom_replacer) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
        case Formula::Kind::Eq:
            return f;
        case Formula::Kind::Atom:
            return atom_replacer(*f);
        case Formula::Kind::Not:
            return f_not(replace_atoms(f->kids[0], atom_replacer));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->kids.size());
            for (const auto& k : f->kids) kids.push_back(replace_atoms(k, atom_replacer));
            return f->kind == Formula::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
        }
        case Formula::Kind::Exists:
            return f_exists(f->var, replace_atoms(f->kids[0], atom_replacer));
        case Formula::Kind::Forall:
            return f_forall(f->var, replace_atoms(f->kids[0], atom_replacer));
        case Formula::Kind::QApp: {
            std::vector<QBinding> bindings;
            bindings.reserve(f->bindings.size());
            for (const auto& b : f->bindings)
                bindings.push_back({b.vars, replace_atoms(b.body, atom_replacer)});
            return f_qapp(f->name, std::move(bindings));
        }
    }
    throw EngineError("replace_atoms: unhandled node");
}

} // namespace

FormulaPtr substitute_interpretation(const FormulaPtr& f, const Interpretation& interp) {
    interp.validate();
    return replace_atoms(f, [&](const Formula& atom) -> FormulaPtr {
        auto it = interp.defs.find(atom.name);
        if (it == interp.defs.end())
            throw UsageError("substitute_interpretation: no defining formula for '" + atom.name + "'");
        const auto& def = it->second;
        std::vector<std::pair<std::string, std::string>> subst;
        for (size_t i = 0; i < def.params.size(); ++i) subst.push_back({def.params[i], atom.args[i]});
        return substitute_variables(def.body, subst);
    });
}

FormulaPtr rewrite_defined_quantifier(const FormulaPtr& f, const QuantifierDef& q,
                                      const FormulaPtr& defining, int check_size) {
    // Spot check: the defining sentence must agree with quantifier
    // membership on all small sigma-structures.
    if (!free_variables(defining).empty())
        throw UsageError("rewrite_defined_quantifier: defining formula must be a sentence");
    for (const auto& s : enumerate_structures_up_to_iso(q.sigma, 0, check_size)) {
        if (evaluate(s, defining) != quantifier_member(q, s))
            throw UsageError("rewrite_defined_quantifier: sentence does not define '" + q.name +
                             "' (disagrees on a structure of size " + std::to_string(s.size()) + ")");
    }

    std::function<FormulaPtr(const FormulaPtr&)> rec = [&](const FormulaPtr& node) -> FormulaPtr {
        switch (node->kind) {
            case Formula::Kind::True:
            case Formula::Kind::False:
            case Formula::Kind::Atom:
            case Formula::Kind::Eq:
                return node;
            case Formula::Kind::Not:
                return f_not(rec(node->kids[0]));
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                std::vector<FormulaPtr> kids;
                for (const auto& k : node->kids) kids.push_back(rec(k));
                return node->kind == Formula::Kind::And ? f_and(std::move(kids)) : f_or(std::move(kids));
            }
            case Formula::Kind::Exists:
                return f_exists(node->var, rec(node->kids[0]));
            case Formula::Kind::Forall:
                return f_forall(node->var, rec(node->kids[0]));
            case Formula::Kind::QApp: {
                // Innermost first: rewrite the bodies before this application.
                std::vector<QBinding> bindings;
                for (const auto& b : node->bindings) bindings.push_back({b.vars, rec(b.body)});
                if (node->name != q.name) return f_qapp(node->name, std::move(bindings));
                // Bind sigma symbols to their bodies in declared order.
                std::map<std::string, const QBinding*> by_symbol;
                size_t i = 0;
                for (const auto& [rel, ar] : q.sigma.relations()) {
                    if (i >= bindings.size())
                        throw UsageError("rewrite_defined_quantifier: binding count mismatch");
                    if (static_cast<int>(bindings[i].vars.size()) != ar)
                        throw UsageError("rewrite_defined_quantifier: binding arity mismatch for '" + rel + "'");
                    by_symbol[rel] = &bindings[i];
                    ++i;
                }
                // The sentence's own binders must not capture variables of
                // the substituted bodies.
                std::set<std::string> avoid;
                for (const auto& b : bindings) {
                    auto fv = free_variables(b.body);
                    avoid.insert(fv.begin(), fv.end());
                }
                FormulaPtr safe_defining = rename_bound_variables(defining, avoid);
                return replace_atoms(safe_defining, [&](const Formula& atom) -> FormulaPtr {
                    auto it = by_symbol.find(atom.name);
                    if (it == by_symbol.end())
                        throw UsageError("rewrite_defined_quantifier: atom '" + atom.name +
                                         "' not a sigma symbol");
                    std::vector<std::pair<std::string, std::string>> subst;
                    for (size_t k = 0; k < atom.args.size(); ++k)
                        subst.push_back({it->second->vars[k], atom.args[k]});
                    return substitute_variables(it->second->body, subst);
                });
            }
        }
        throw EngineError("rewrite_defined_quantifier: unhandled node");
    };
    return rec(f);
}

} // namespace embq
