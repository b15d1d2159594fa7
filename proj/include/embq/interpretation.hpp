#pragma once

#include "embq/evaluate.hpp"
#include "embq/formula.hpp"
#include "embq/quantifier.hpp"
#include "embq/structure.hpp"

#include <map>
#include <string>
#include <vector>

namespace embq {

/// Definable translation from tau-structures to sigma-structures: each
/// sigma symbol R gets a defining formula over tau with ar(R) parameters.
struct Interpretation {
    Vocabulary sigma;
    struct Def {
        std::vector<std::string> params; // exactly ar(R) distinct variables
        FormulaPtr body;                 // over tau; free variables within params
    };
    std::map<std::string, Def> defs;

    void validate() const;
};

/// The sigma-structure with the same universe and
/// R := { tuple : A satisfies the defining formula at the tuple }.
Structure apply_interpretation(const Interpretation& interp, const Structure& a,
                               const QuantifierRegistry* registry = nullptr);

/// Atom-by-atom translation: every R(t...) in `f` becomes the defining
/// formula with parameters replaced by the ts, capture-avoiding. Evaluating
/// the result on A equals evaluating `f` on apply_interpretation(interp, A).
FormulaPtr substitute_interpretation(const FormulaPtr& f, const Interpretation& interp);

/// Replaces every application of the named quantifier by its defining
/// sentence with atoms substituted by the binding bodies, innermost first.
/// `defining` must define the quantifier's class over sigma; this is
/// spot-checked by evaluation on all sigma-structures of size <= check_size.
FormulaPtr rewrite_defined_quantifier(const FormulaPtr& f, const QuantifierDef& q,
                                      const FormulaPtr& defining, int check_size = 2);

} // namespace embq
