#include "embq/formula.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace embq {

namespace {

std::shared_ptr<Formula> node(Formula::Kind k) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    return f;
}

} // namespace

FormulaPtr f_true() { return node(Formula::Kind::True); }
FormulaPtr f_false() { return node(Formula::Kind::False); }

FormulaPtr f_atom(std::string rel, std::vector<std::string> args) {
    auto f = node(Formula::Kind::Atom);
    f->name = std::move(rel);
    f->args = std::move(args);
    return f;
}

FormulaPtr f_eq(std::string left, std::string right) {
    auto f = node(Formula::Kind::Eq);
    f->args = {std::move(left), std::move(right)};
    return f;
}

FormulaPtr f_not(FormulaPtr child) {
    auto f = node(Formula::Kind::Not);
    f->kids = {std::move(child)};
    return f;
}

FormulaPtr f_and(std::vector<FormulaPtr> kids) {
    if (kids.empty()) return f_true();
    if (kids.size() == 1) return kids.front();
    auto f = node(Formula::Kind::And);
    f->kids = std::move(kids);
    return f;
}

FormulaPtr f_or(std::vector<FormulaPtr> kids) {
    if (kids.empty()) return f_false();
    if (kids.size() == 1) return kids.front();
    auto f = node(Formula::Kind::Or);
    f->kids = std::move(kids);
    return f;
}

FormulaPtr f_exists(std::string var, FormulaPtr body) {
    auto f = node(Formula::Kind::Exists);
    f->var = std::move(var);
    f->kids = {std::move(body)};
    return f;
}

FormulaPtr f_forall(std::string var, FormulaPtr body) {
    auto f = node(Formula::Kind::Forall);
    f->var = std::move(var);
    f->kids = {std::move(body)};
    return f;
}

FormulaPtr f_qapp(std::string quantifier, std::vector<QBinding> bindings) {
    auto f = node(Formula::Kind::QApp);
    f->name = std::move(quantifier);
    f->bindings = std::move(bindings);
    return f;
}

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->name != b->name || a->args != b->args || a->var != b->var)
        return false;
    if (a->kids.size() != b->kids.size() || a->bindings.size() != b->bindings.size()) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!formulas_equal(a->kids[i], b->kids[i])) return false;
    for (size_t i = 0; i < a->bindings.size(); ++i) {
        if (a->bindings[i].vars != b->bindings[i].vars) return false;
        if (!formulas_equal(a->bindings[i].body, b->bindings[i].body)) return false;
    }
    return true;
}

std::set<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> out;
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            break;
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            out.insert(f->args.begin(), f->args.end());
            break;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (const auto& k : f->kids) {
                auto sub = free_variables(k);
                out.insert(sub.begin(), sub.end());
            }
            break;
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            out = free_variables(f->kids[0]);
            out.erase(f->var);
            break;
        }
        case Formula::Kind::QApp:
            for (const auto& b : f->bindings) {
                auto sub = free_variables(b.body);
                for (const auto& v : b.vars) sub.erase(v);
                out.insert(sub.begin(), sub.end());
            }
            break;
    }
    return out;
}

bool is_quantifier_free(const FormulaPtr& f) { return quantifier_rank(f) == 0; }

int quantifier_rank(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
        case Formula::Kind::Atom:
        case Formula::Kind::Eq:
            return 0;
        case Formula::Kind::Not:
            return quantifier_rank(f->kids[0]);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            int m = 0;
            for (const auto& k : f->kids) m = std::max(m, quantifier_rank(k));
            return m;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            return 1 + quantifier_rank(f->kids[0]);
        case Formula::Kind::QApp: {
            int m = 0;
            for (const auto& b : f->bindings) m = std::max(m, quantifier_rank(b.body));
            return 1 + m;
        }
    }
    return 0;
}

namespace {

bool needs_parens_under_not(const FormulaPtr& f) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
        case Formula::Kind::Atom:
        case Formula::Kind::Not:
        case Formula::Kind::QApp:
            return false;
        default:
            return true;
    }
}

void print_rec(const FormulaPtr& f, std::ostringstream& out) {
    switch (f->kind) {
        case Formula::Kind::True:
            out << "true";
            break;
        case Formula::Kind::False:
            out << "false";
            break;
        case Formula::Kind::Atom: {
            out << f->name << "(";
            for (size_t i = 0; i < f->args.size(); ++i) out << (i ? "," : "") << f->args[i];
            out << ")";
            break;
        }
        case Formula::Kind::Eq:
            out << f->args[0] << " = " << f->args[1];
            break;
        case Formula::Kind::Not:
            out << "!";
            if (needs_parens_under_not(f->kids[0])) {
                out << "(";
                print_rec(f->kids[0], out);
                out << ")";
            } else {
                print_rec(f->kids[0], out);
            }
            break;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            const char* op = f->kind == Formula::Kind::And ? " & " : " | ";
            out << "(";
            for (size_t i = 0; i < f->kids.size(); ++i) {
                if (i) out << op;
                // A quantifier body extends maximally; keep it delimited.
                const bool wrap = f->kids[i]->kind == Formula::Kind::Exists ||
                                  f->kids[i]->kind == Formula::Kind::Forall;
                if (wrap) out << "(";
                print_rec(f->kids[i], out);
                if (wrap) out << ")";
            }
            out << ")";
            break;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall:
            out << (f->kind == Formula::Kind::Exists ? "exists " : "forall ") << f->var << ". ";
            print_rec(f->kids[0], out);
            break;
        case Formula::Kind::QApp: {
            out << f->name << "[";
            for (size_t i = 0; i < f->bindings.size(); ++i) {
                if (i) out << "; ";
                const auto& b = f->bindings[i];
                for (size_t j = 0; j < b.vars.size(); ++j) out << (j ? "," : "") << b.vars[j];
                out << ": ";
                print_rec(b.body, out);
            }
            out << "]";
            break;
        }
    }
}

} // namespace

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream out;
    print_rec(f, out);
    return out.str();
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    for (int i = 1;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

FormulaPtr subst_rec(const FormulaPtr& f, std::map<std::string, std::string> subst,
                     std::set<std::string>& avoid) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            return f;
        case Formula::Kind::Atom:
        case Formula::Kind::Eq: {
            std::vector<std::string> args;
            args.reserve(f->args.size());
            bool changed = false;
            for (const auto& v : f->args) {
                auto it = subst.find(v);
                args.push_back(it == subst.end() ? v : it->second);
                changed = changed || it != subst.end();
            }
            if (!changed) return f;
            return f->kind == Formula::Kind::Atom ? f_atom(f->name, std::move(args))
                                                  : f_eq(args[0], args[1]);
        }
        case Formula::Kind::Not:
            return f_not(subst_rec(f->kids[0], subst, avoid));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->kids.size());
            for (const auto& k : f->kids) kids.push_back(subst_rec(k, subst, avoid));
            auto out = std::make_shared<Formula>();
            out->kind = f->kind;
            out->kids = std::move(kids);
            return out;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            std::string bound = f->var;
            auto inner = subst;
            inner.erase(bound);
            // Rename if any replacement value would be captured.
            bool capture = false;
            for (const auto& [from, to] : inner)
                if (to == bound) capture = true;
            if (capture) {
                std::string renamed = fresh_name(bound, avoid);
                avoid.insert(renamed);
                inner[bound] = renamed;
                bound = renamed;
            }
            auto body = subst_rec(f->kids[0], inner, avoid);
            return f->kind == Formula::Kind::Exists ? f_exists(bound, std::move(body))
                                                    : f_forall(bound, std::move(body));
        }
        case Formula::Kind::QApp: {
            std::vector<QBinding> bindings;
            bindings.reserve(f->bindings.size());
            for (const auto& b : f->bindings) {
                auto inner = subst;
                std::vector<std::string> vars = b.vars;
                for (const auto& v : b.vars) inner.erase(v);
                for (size_t i = 0; i < vars.size(); ++i) {
                    bool capture = false;
                    for (const auto& [from, to] : inner)
                        if (to == vars[i]) capture = true;
                    if (capture) {
                        std::string renamed = fresh_name(vars[i], avoid);
                        avoid.insert(renamed);
                        inner[vars[i]] = renamed;
                        vars[i] = renamed;
                    }
                }
                bindings.push_back({std::move(vars), subst_rec(b.body, inner, avoid)});
            }
            return f_qapp(f->name, std::move(bindings));
        }
    }
    throw EngineError("substitute_variables: unhandled node");
}

void collect_all_names(const FormulaPtr& f, std::set<std::string>& out) {
    out.insert(f->args.begin(), f->args.end());
    if (!f->var.empty()) out.insert(f->var);
    for (const auto& k : f->kids) collect_all_names(k, out);
    for (const auto& b : f->bindings) {
        out.insert(b.vars.begin(), b.vars.end());
        collect_all_names(b.body, out);
    }
}

} // namespace

FormulaPtr substitute_variables(const FormulaPtr& f,
                                const std::vector<std::pair<std::string, std::string>>& subst) {
    std::map<std::string, std::string> m;
    std::set<std::string> avoid;
    collect_all_names(f, avoid);
    for (const auto& [from, to] : subst) {
        if (!m.emplace(from, to).second)
            throw UsageError("substitute_variables: variable '" + from + "' substituted twice");
        avoid.insert(to);
    }
    return subst_rec(f, std::move(m), avoid);
}

namespace {

FormulaPtr rename_rec(const FormulaPtr& f, std::map<std::string, std::string> renames,
                      const std::set<std::string>& avoid, std::set<std::string>& taken) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            return f;
        case Formula::Kind::Atom:
        case Formula::Kind::Eq: {
            std::vector<std::string> args;
            for (const auto& v : f->args) {
                auto it = renames.find(v);
                args.push_back(it == renames.end() ? v : it->second);
            }
            return f->kind == Formula::Kind::Atom ? f_atom(f->name, std::move(args))
                                                  : f_eq(args[0], args[1]);
        }
        case Formula::Kind::Not:
            return f_not(rename_rec(f->kids[0], renames, avoid, taken));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (const auto& k : f->kids) kids.push_back(rename_rec(k, renames, avoid, taken));
            auto out = std::make_shared<Formula>();
            out->kind = f->kind;
            out->kids = std::move(kids);
            return out;
        }
        case Formula::Kind::Exists:
        case Formula::Kind::Forall: {
            std::string bound = f->var;
            auto inner = renames;
            if (avoid.count(bound)) {
                std::string renamed = fresh_name(bound, taken);
                taken.insert(renamed);
                inner[bound] = renamed;
                bound = renamed;
            } else {
                inner.erase(f->var);
            }
            auto body = rename_rec(f->kids[0], inner, avoid, taken);
            return f->kind == Formula::Kind::Exists ? f_exists(bound, std::move(body))
                                                    : f_forall(bound, std::move(body));
        }
        case Formula::Kind::QApp: {
            std::vector<QBinding> bindings;
            for (const auto& b : f->bindings) {
                auto inner = renames;
                std::vector<std::string> vars = b.vars;
                for (size_t i = 0; i < vars.size(); ++i) {
                    if (avoid.count(vars[i])) {
                        std::string renamed = fresh_name(vars[i], taken);
                        taken.insert(renamed);
                        inner[vars[i]] = renamed;
                        vars[i] = renamed;
                    } else {
                        inner.erase(vars[i]);
                    }
                }
                bindings.push_back({std::move(vars), rename_rec(b.body, inner, avoid, taken)});
            }
            return f_qapp(f->name, std::move(bindings));
        }
    }
    throw EngineError("rename_bound_variables: unhandled node");
}

} // namespace

FormulaPtr rename_bound_variables(const FormulaPtr& f, const std::set<std::string>& avoid) {
    std::set<std::string> taken = avoid;
    collect_all_names(f, taken);
    return rename_rec(f, {}, avoid, taken);
}

} // namespace embq
