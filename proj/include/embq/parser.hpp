#pragma once

#include "embq/formula.hpp"
#include "embq/quantifier.hpp"
#include "embq/structure.hpp"

#include <string>

namespace embq {

/// ASCII grammar:
///   f  := or
///   or := and ('|' and)*
///   and:= un  ('&' un)*
///   un := '!' un | 'exists' var '.' or | 'forall' var '.' or
///       | 'true' | 'false' | R '(' var,.. ')' | var '=' var | var '!=' var
///       | Qname '[' var,..':' or (';' var,..':' or)* ']' | '(' or ')'
/// Relation symbols are resolved against `vocab`, quantifier names against
/// `registry` (optional; nullptr rejects any QApp). '&'/'|' chains collapse
/// into one n-ary node. Errors carry line:column.
FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab,
                         const QuantifierRegistry* registry = nullptr);

} // namespace embq
