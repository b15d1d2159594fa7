#pragma once

#include "embq/evaluate.hpp"
#include "embq/formula.hpp"
#include "embq/quantifier.hpp"
#include "embq/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embq {

struct HomogeneityOptions {
    int max_size = 12;
    long long max_automorphisms = 100000;
    long long max_orbit_tuples = 2000000;
};

struct HomogeneityReport {
    bool homogeneous = false;
    /// On failure: two non-repeating tuples (element ids) of equal atomic
    /// type with no automorphism mapping one to the other.
    std::optional<std::pair<TupleAssignment, TupleAssignment>> counterexample;
};

/// Quasi-homogeneity check. On a finite structure every self-embedding is
/// an automorphism, so the check runs over automorphism orbits: level by
/// level it compares orbits of non-repeating k-tuples against atomic-type
/// classes; the structure is homogeneous iff they coincide at every level.
/// Repeating tuples reduce to their distinct supports.
HomogeneityReport is_quasi_homogeneous(const Structure& a, const HomogeneityOptions& opts = {});

/// Memoized by exact structure identity (not up to isomorphism).
bool is_quasi_homogeneous_cached(const Structure& a, const HomogeneityOptions& opts = {});

/// Quantifier elimination on a quasi-homogeneous structure: the disjunction
/// of the atomic types realized by tuples satisfying the formula. The
/// equivalence over `a` is re-verified by exhaustive evaluation before
/// returning; a verification failure is an engine bug.
TypeDisjunction eliminate_quantifiers(const Structure& a, const FormulaPtr& f,
                                      const QuantifierRegistry* registry = nullptr,
                                      const HomogeneityOptions& opts = {});

/// The characteristic sentence of a finite structure: existentially pinned
/// diagram, pairwise distinctness, and a universal closure clause. Holds in
/// B iff B is isomorphic to `a`.
FormulaPtr describe_structure(const Structure& a);

} // namespace embq
