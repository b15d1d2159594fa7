#pragma once

#include "embq/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embq {

/// Ordered (source id -> target id) pairs. Totality and injectivity depend
/// on how the map is used; see the query kinds.
using PartialMap = std::vector<std::pair<std::string, std::string>>;

enum class MorphKind { Embedding, Homomorphism, Isomorphism };

struct MorphismQuery {
    MorphKind kind = MorphKind::Embedding;
    const Structure* source = nullptr;
    const Structure* target = nullptr;
    PartialMap pins;
    std::optional<long long> limit; // enumeration cap

    static MorphismQuery embedding(const Structure& a, const Structure& b) {
        return {MorphKind::Embedding, &a, &b, {}, std::nullopt};
    }
    static MorphismQuery homomorphism(const Structure& a, const Structure& b) {
        return {MorphKind::Homomorphism, &a, &b, {}, std::nullopt};
    }
    static MorphismQuery isomorphism(const Structure& a, const Structure& b) {
        return {MorphKind::Isomorphism, &a, &b, {}, std::nullopt};
    }
    // Queries hold pointers; a temporary must not outlive the expression.
    static MorphismQuery embedding(Structure&&, const Structure&) = delete;
    static MorphismQuery embedding(const Structure&, Structure&&) = delete;
    static MorphismQuery homomorphism(Structure&&, const Structure&) = delete;
    static MorphismQuery homomorphism(const Structure&, Structure&&) = delete;
    static MorphismQuery isomorphism(Structure&&, const Structure&) = delete;
    static MorphismQuery isomorphism(const Structure&, Structure&&) = delete;
};

/// Direct definition check: f total on A, injective, and
/// a-tuple in R^A <=> image in R^B for every relation and tuple.
bool check_embedding(const Structure& a, const Structure& b, const PartialMap& f);
/// Positive preservation only: tuple in R^A => image in R^B. No injectivity.
bool check_homomorphism(const Structure& a, const Structure& b, const PartialMap& f);

/// Deterministic backtracking search: source elements in universe order,
/// target candidates in universe order, pruned by single-element atomic
/// type compatibility and per-relation incidence counts (both conservative).
std::optional<PartialMap> find_morphism(const MorphismQuery& q);

/// All morphisms of the requested kind extending the pins, in search order,
/// truncated at q.limit.
std::vector<PartialMap> enumerate_morphisms(const MorphismQuery& q);

bool embeddable(const Structure& a, const Structure& b);
bool isomorphic(const Structure& a, const Structure& b);
bool bi_embeddable(const Structure& a, const Structure& b);

/// Expansion used by the homomorphism reduction: vocabulary gains a
/// complement relation per symbol (suffix "_star") and an inequality
/// relation "N"; the universe is unchanged.
Structure f_transform(const Structure& a);

/// True iff some generator's f_transform has a homomorphism into `a`
/// (which must already be over the expanded vocabulary).
bool hom_closure_member(const std::vector<Structure>& generators, const Structure& a);

} // namespace embq
