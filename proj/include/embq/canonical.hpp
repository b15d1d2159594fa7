#pragma once

#include "embq/structure.hpp"

#include <string>
#include <vector>

namespace embq {

struct CanonicalLimits {
    int max_size = 10;
    long long max_labeled_structures = 1 << 20;
};

/// Isomorphism-invariant label: the lexicographically least encoding over
/// all relabelings. Brute force; throws CapError beyond the size cap.
std::string canonical_form(const Structure& a, const CanonicalLimits& limits = {});

bool isomorphic_by_canonical_form(const Structure& a, const Structure& b,
                                  const CanonicalLimits& limits = {});

/// All structures over `vocab` with universe {"0"..} of each size in
/// [min_size, max_size], one representative per isomorphism class,
/// deterministic order. Throws CapError if the labeled count exceeds the cap.
std::vector<Structure> enumerate_structures_up_to_iso(const Vocabulary& vocab, int min_size,
                                                      int max_size,
                                                      const CanonicalLimits& limits = {});

} // namespace embq
