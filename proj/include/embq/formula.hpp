#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace embq {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// One quantifier binding: the tuple of variables bound in `body`.
/// Scoping is per binding: `vars` bind occurrences inside this body only.
struct QBinding {
    std::vector<std::string> vars;
    FormulaPtr body;
};

/// Finitary first-order formula extended with applications of registered
/// generalized quantifiers. Immutable; share freely.
struct Formula {
    enum class Kind { True, False, Atom, Eq, Not, And, Or, Exists, Forall, QApp };

    Kind kind;
    std::string name;              // Atom: relation symbol; QApp: quantifier name
    std::vector<std::string> args; // Atom arguments / Eq operands (two variables)
    std::vector<FormulaPtr> kids;  // Not: one; And/Or: list; Exists/Forall: one
    std::string var;               // Exists/Forall bound variable
    std::vector<QBinding> bindings; // QApp, one per sigma symbol in declared order
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(std::string rel, std::vector<std::string> args);
FormulaPtr f_eq(std::string left, std::string right);
FormulaPtr f_not(FormulaPtr f);
FormulaPtr f_and(std::vector<FormulaPtr> kids);
FormulaPtr f_or(std::vector<FormulaPtr> kids);
FormulaPtr f_exists(std::string var, FormulaPtr body);
FormulaPtr f_forall(std::string var, FormulaPtr body);
FormulaPtr f_qapp(std::string quantifier, std::vector<QBinding> bindings);

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b);

std::set<std::string> free_variables(const FormulaPtr& f);
bool is_quantifier_free(const FormulaPtr& f);

/// Nesting depth of quantifiers; Exists/Forall/QApp each count one.
int quantifier_rank(const FormulaPtr& f);

/// Canonical printable form; parse(print(f)) == f.
std::string print_formula(const FormulaPtr& f);

/// Capture-avoiding simultaneous variable-for-variable substitution.
/// Bound variables are renamed fresh when they would capture a substituted name.
FormulaPtr substitute_variables(const FormulaPtr& f,
                                const std::vector<std::pair<std::string, std::string>>& subst);

/// Freshens every bound variable whose name is in `avoid`.
FormulaPtr rename_bound_variables(const FormulaPtr& f, const std::set<std::string>& avoid);

} // namespace embq
