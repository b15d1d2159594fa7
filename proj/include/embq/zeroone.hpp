#pragma once

#include "embq/canonical.hpp"
#include "embq/evaluate.hpp"
#include "embq/formula.hpp"
#include "embq/quantifier.hpp"
#include "embq/structure.hpp"

#include <cstdint>
#include <vector>

namespace embq {

struct SampleConfig {
    Vocabulary vocab;
    int size = 0;
    int samples = 0;
    uint64_t seed = 0;
    double p = 0.5; // per-tuple inclusion probability; the uniform measure at 1/2
};

struct MuEstimate {
    double estimate = 0.0;
    int samples = 0;
    int positives = 0;
    double ci_low = 0.0; // two-sided 95% Wilson score interval
    double ci_high = 0.0;
};

/// Tuple-independent random structure on universe {0..n-1}. Fully
/// determined by (seed, index): each tuple's coin is a pure function of
/// the keys, so any worker partition yields the same sample stream.
Structure sample_random_structure(const SampleConfig& cfg, uint64_t index);

/// Fraction of samples satisfying the sentence, with Wilson interval.
MuEstimate estimate_mu(const FormulaPtr& sentence, const SampleConfig& cfg,
                       const QuantifierRegistry* registry = nullptr, int jobs = 1);

std::pair<double, double> wilson_interval(int positives, int samples, double z = 1.959963984540054);

/// Does every tuple in B realizing the atomic type of (a, tuple) extend to
/// an embedding of the pinned structure?
bool extension_property_holds(const Structure& a, const TupleAssignment& tuple, const Structure& b);

/// The almost-sure quantifier-free form of a quantifier application over
/// quantifier-free bodies: the disjunction of all atomic types realized
/// together with the formula in some structure of size <= search_size
/// (enumerated up to isomorphism). The formula implies the result on every
/// structure of size <= search_size by construction.
TypeDisjunction asympt_theta(const FormulaPtr& qapp, const Vocabulary& vocab,
                             const QuantifierRegistry* registry, int search_size = 4,
                             const CanonicalLimits& limits = {});

} // namespace embq
