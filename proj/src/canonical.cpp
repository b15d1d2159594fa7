#include "embq/canonical.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace embq {

namespace {

std::string encode_relabeled(const Structure& a, const std::vector<int>& perm) {
    // perm[old index] = new index
    std::ostringstream out;
    for (const auto& [rel, ar] : a.vocab().relations()) out << rel << '/' << ar << ';';
    out << '#' << a.size();
    for (const auto& [rel, tuples] : a.interp()) {
        std::set<std::vector<int>> relabeled;
        for (const auto& t : tuples) {
            std::vector<int> m;
            m.reserve(t.size());
            for (int e : t) m.push_back(perm[e]);
            relabeled.insert(std::move(m));
        }
        out << '|' << rel << ':';
        for (const auto& t : relabeled) {
            for (int e : t) out << e << '.';
            out << ' ';
        }
    }
    return out.str();
}

} // namespace

std::string canonical_form(const Structure& a, const CanonicalLimits& limits) {
    if (a.size() > limits.max_size)
        throw CapError("canonical_form: structure size " + std::to_string(a.size()) +
                       " exceeds cap " + std::to_string(limits.max_size));
    std::vector<int> perm(a.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::string best = encode_relabeled(a, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        std::string cand = encode_relabeled(a, perm);
        if (cand < best) best = std::move(cand);
    }
    return best;
}

bool isomorphic_by_canonical_form(const Structure& a, const Structure& b,
                                  const CanonicalLimits& limits) {
    if (a.vocab() != b.vocab() || a.size() != b.size()) return false;
    return canonical_form(a, limits) == canonical_form(b, limits);
}

std::vector<Structure> enumerate_structures_up_to_iso(const Vocabulary& vocab, int min_size,
                                                      int max_size, const CanonicalLimits& limits) {
    std::vector<Structure> out;
    std::unordered_set<std::string> seen;
    for (int n = min_size; n <= max_size; ++n) {
        std::vector<std::string> universe;
        for (int i = 0; i < n; ++i) universe.push_back(std::to_string(i));
        // All atoms over an n-element universe, fixed order.
        std::vector<std::pair<std::string, std::vector<int>>> atoms;
        for (const auto& [rel, ar] : vocab.relations()) {
            if (n == 0) continue;
            std::vector<int> idx(ar, 0);
            while (true) {
                atoms.push_back({rel, idx});
                int k = ar - 1;
                while (k >= 0 && idx[k] == n - 1) { idx[k] = 0; --k; }
                if (k < 0) break;
                ++idx[k];
            }
        }
        if (atoms.size() >= 62) throw CapError("enumerate_structures: too many atoms");
        const long long count = 1LL << atoms.size();
        if (count > limits.max_labeled_structures)
            throw CapError("enumerate_structures: " + std::to_string(count) +
                           " labeled structures exceeds cap");
        for (long long mask = 0; mask < count; ++mask) {
            std::map<std::string, std::set<std::vector<int>>> interp;
            for (size_t i = 0; i < atoms.size(); ++i) {
                if (mask & (1LL << i)) interp[atoms[i].first].insert(atoms[i].second);
            }
            Structure s = Structure::make_indexed(vocab, universe, std::move(interp));
            std::string canon = canonical_form(s, limits);
            if (seen.insert(std::move(canon)).second) out.push_back(std::move(s));
        }
    }
    return out;
}

} // namespace embq
