#pragma once

#include "embq/structure.hpp"

#include <set>
#include <string>
#include <vector>

namespace embq {

/// Complete description of an n-tuple: which positions coincide plus every
/// relation fact over the positions. Negative literals are implicit (every
/// atom not listed is false). Facts are stored over equality-class ids
/// (0-based, classes numbered by first occurrence), so equal tuples get
/// structurally equal types.
struct AtomicType {
    int arity = 0;
    /// eq[i] = equality class of position i; restricted growth form
    /// (eq[0] == 0, eq[i] <= max(eq[0..i-1]) + 1).
    std::vector<int> eq;
    /// (relation, tuple of class ids) asserted true.
    std::set<std::pair<std::string, std::vector<int>>> facts;

    int num_classes() const;

    /// One element per equality class, relations exactly the facts.
    Structure canonical_model(const Vocabulary& vocab) const;
    /// Assignment realizing this type in the canonical model: position i
    /// maps to element index eq[i].
    std::vector<int> canonical_tuple() const;

    auto operator<=>(const AtomicType& o) const = default;

    std::string to_string() const;
};

/// The atomic type realized by a tuple (given by universe indices).
AtomicType atomic_type_of(const Structure& a, const std::vector<int>& tuple);
/// Same, with the tuple given by element ids.
AtomicType atomic_type_of(const Structure& a, const TupleAssignment& tuple);

struct EnumerationLimits {
    long long max_types = 1000000;
};

/// All consistent atomic n-types, duplicate-free, in canonical order:
/// equality partitions in restricted-growth-string order, then fact sets in
/// lexicographic order (as sorted atom sequences). Throws CapError when the
/// count would exceed the cap.
std::vector<AtomicType> enumerate_atomic_types(const Vocabulary& vocab, int n,
                                               const EnumerationLimits& limits = {});

} // namespace embq
