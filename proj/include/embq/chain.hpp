#pragma once

#include "embq/evaluate.hpp"
#include "embq/morphism.hpp"
#include "embq/qelim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embq {

/// Increasing sequence under embeddability. Consecutive embeddings are
/// found and cached at construction; transitivity covers the rest.
class Chain {
  public:
    static Chain build(std::vector<Structure> members);

    const std::vector<Structure>& members() const { return members_; }
    const std::vector<PartialMap>& consecutive_embeddings() const { return embeddings_; }
    size_t length() const { return members_.size(); }

  private:
    std::vector<Structure> members_;
    std::vector<PartialMap> embeddings_;
};

struct TypeChainReport {
    std::vector<std::string> vars;               // free variables of the formula
    std::vector<std::set<AtomicType>> type_sets; // T_i per chain index
    bool monotone = false;                       // T_i subseteq T_j for i <= j
    int stabilization_index = 0;                 // least k with T_k = T_last
    TypeDisjunction theta;                       // disjunction of T_k
};

/// Per-index realized-type sets for a quantifier application over
/// quantifier-free bodies, on a chain of quasi-homogeneous structures.
/// The quantifier must be upward closed under embeddings (closure or count
/// kinds); monotonicity of the T_i is certified, not assumed.
TypeChainReport type_chain(const Chain& chain, const FormulaPtr& f,
                           const QuantifierRegistry* registry,
                           const HomogeneityOptions& opts = {});

struct Stabilization {
    int index = 0;    // N: valid from this chain index on
    FormulaPtr theta; // quantifier-free equivalent for indices >= N
};

/// Recursive elimination over the chain: innermost quantifier applications
/// (and first-order quantifiers, rewritten through their upward-closed
/// form) are stabilized one by one; N is the max of the component indices.
/// Fails if the provided chain is too short to witness stabilization of
/// some subformula (a constant tail of length >= 2 is required).
Stabilization stabilize_formula(const Chain& chain, const FormulaPtr& f,
                                const QuantifierRegistry* registry,
                                const HomogeneityOptions& opts = {});

/// Minimal antichain of sentences-stabilizing structures covering a finite
/// catalog: every member of the catalog is comparable with some antichain
/// member, and each antichain member's truth value settles the truth on
/// everything above it.
std::vector<std::pair<Structure, bool>> stabilizer_antichain(const std::vector<Structure>& catalog,
                                                             const FormulaPtr& sentence,
                                                             const QuantifierRegistry* registry);

} // namespace embq
