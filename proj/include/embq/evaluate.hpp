#pragma once

#include "embq/atomic_type.hpp"
#include "embq/formula.hpp"
#include "embq/quantifier.hpp"
#include "embq/structure.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace embq {

using Assignment = std::map<std::string, std::string>;

/// Model checker for one structure. Results are memoized per
/// (subformula, restriction of the environment to its free variables), so
/// repeated evaluation over many assignments stays cheap. Not thread-safe;
/// use one evaluator per task.
class Evaluator {
  public:
    Evaluator(const Structure& a, const QuantifierRegistry* registry = nullptr);

    bool evaluate(const FormulaPtr& f, const Assignment& assignment);
    /// Assignment by universe index for the given variable names.
    bool evaluate_indexed(const FormulaPtr& f, const std::vector<std::string>& vars,
                          const std::vector<int>& values);

  private:
    struct Env {
        std::vector<std::pair<std::string, int>> vars; // name -> universe index
        int lookup(const std::string& v) const;
        void push(const std::string& v, int idx);
        void pop(size_t n);
    };

    const Structure& a_;
    const QuantifierRegistry* registry_;
    std::unordered_map<const Formula*, std::vector<std::string>> free_cache_;
    std::unordered_map<const Formula*, std::unordered_map<std::string, bool>> memo_;

    const std::vector<std::string>& free_of(const FormulaPtr& f);
    bool eval(const FormulaPtr& f, Env& env);
    Structure build_sigma_structure(const FormulaPtr& qapp, Env& env);
};

/// One-shot convenience wrapper.
bool evaluate(const Structure& a, const FormulaPtr& f, const Assignment& assignment = {},
              const QuantifierRegistry* registry = nullptr);

/// A quantifier-free formula as a set of atomic types: the disjunction of
/// the types whose canonical model satisfies it. `vars` fixes the positions.
struct TypeDisjunction {
    Vocabulary vocab;
    std::vector<std::string> vars;
    std::set<AtomicType> types;

    /// Membership test: does the type of this tuple belong to the set?
    bool satisfied_by(const Structure& a, const std::vector<int>& tuple) const;
    /// A quantifier-free formula equivalent to the disjunction.
    FormulaPtr to_formula() const;
    std::string to_string() const;
};

/// Lemma-style normal form of a quantifier-free formula over x1..xn
/// (names given in `vars`): enumerate all atomic n-types and keep those
/// whose canonical model satisfies the formula.
TypeDisjunction qf_to_type_disjunction(const FormulaPtr& f, const Vocabulary& vocab,
                                       const std::vector<std::string>& vars,
                                       const EnumerationLimits& limits = {});

/// Conjunction of all literals of the type over the given variable names
/// (pairwise equalities or inequalities plus every positive and negative
/// relation fact).
FormulaPtr type_to_formula(const AtomicType& t, const Vocabulary& vocab,
                           const std::vector<std::string>& vars);

} // namespace embq
