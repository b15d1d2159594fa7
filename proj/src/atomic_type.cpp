#include "embq/atomic_type.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <sstream>

namespace embq {

int AtomicType::num_classes() const {
    int c = 0;
    for (int e : eq) c = std::max(c, e + 1);
    return c;
}

Structure AtomicType::canonical_model(const Vocabulary& vocab) const {
    const int c = num_classes();
    std::vector<std::string> universe;
    universe.reserve(c);
    for (int i = 0; i < c; ++i) universe.push_back("e" + std::to_string(i));
    std::map<std::string, std::set<std::vector<int>>> interp;
    for (const auto& [rel, tup] : facts) interp[rel].insert(tup);
    return Structure::make_indexed(vocab, std::move(universe), std::move(interp));
}

std::vector<int> AtomicType::canonical_tuple() const { return eq; }

std::string AtomicType::to_string() const {
    std::ostringstream out;
    out << "eq=[";
    for (int i = 0; i < arity; ++i) out << (i ? "," : "") << eq[i];
    out << "] facts={";
    bool first = true;
    for (const auto& [rel, tup] : facts) {
        if (!first) out << ",";
        first = false;
        out << rel << "(";
        for (size_t i = 0; i < tup.size(); ++i) out << (i ? "," : "") << tup[i];
        out << ")";
    }
    out << "}";
    return out.str();
}

AtomicType atomic_type_of(const Structure& a, const std::vector<int>& tuple) {
    const int n = static_cast<int>(tuple.size());
    for (int e : tuple) {
        if (e < 0 || e >= a.size()) throw UsageError("atomic type: element index out of range");
    }
    AtomicType t;
    t.arity = n;
    t.eq.resize(n);
    std::vector<int> class_of_elem; // element index -> class id, in first-occurrence order
    std::vector<int> class_rep;
    for (int i = 0; i < n; ++i) {
        int cls = -1;
        for (size_t c = 0; c < class_rep.size(); ++c) {
            if (class_rep[c] == tuple[i]) { cls = static_cast<int>(c); break; }
        }
        if (cls < 0) {
            cls = static_cast<int>(class_rep.size());
            class_rep.push_back(tuple[i]);
        }
        t.eq[i] = cls;
    }
    const int c = static_cast<int>(class_rep.size());
    if (c == 0) return t;
    for (const auto& [rel, ar] : a.vocab().relations()) {
        std::vector<int> idx(ar, 0);
        while (true) {
            std::vector<int> elems(ar);
            for (int k = 0; k < ar; ++k) elems[k] = class_rep[idx[k]];
            if (a.has(rel, elems)) t.facts.insert({rel, idx});
            int k = ar - 1;
            while (k >= 0 && idx[k] == c - 1) { idx[k] = 0; --k; }
            if (k < 0) break;
            ++idx[k];
        }
    }
    return t;
}

AtomicType atomic_type_of(const Structure& a, const TupleAssignment& tuple) {
    std::vector<int> idx;
    idx.reserve(tuple.size());
    for (const auto& id : tuple) idx.push_back(a.index_of(id));
    return atomic_type_of(a, idx);
}

namespace {

// Restricted growth strings of length n in lexicographic order.
std::vector<std::vector<int>> all_partitions(int n) {
    std::vector<std::vector<int>> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> rgs(n, 0);
    while (true) {
        out.push_back(rgs);
        int i = n - 1;
        while (i > 0) {
            int maxprev = 0;
            for (int j = 0; j < i; ++j) maxprev = std::max(maxprev, rgs[j]);
            if (rgs[i] <= maxprev) break;
            --i;
        }
        if (i == 0) break;
        ++rgs[i];
        for (int j = i + 1; j < n; ++j) rgs[j] = 0;
    }
    return out;
}

} // namespace

std::vector<AtomicType> enumerate_atomic_types(const Vocabulary& vocab, int n,
                                               const EnumerationLimits& limits) {
    if (n < 0) throw UsageError("enumerate_atomic_types: n must be >= 0");
    std::vector<AtomicType> out;
    long long total = 0;
    for (const auto& rgs : all_partitions(n)) {
        int c = 0;
        for (int e : rgs) c = std::max(c, e + 1);
        // All possible atoms over the c equality classes, in (relation, tuple) order.
        std::vector<std::pair<std::string, std::vector<int>>> atoms;
        for (const auto& [rel, ar] : vocab.relations()) {
            if (c == 0) continue;
            std::vector<int> idx(ar, 0);
            while (true) {
                atoms.push_back({rel, idx});
                int k = ar - 1;
                while (k >= 0 && idx[k] == c - 1) { idx[k] = 0; --k; }
                if (k < 0) break;
                ++idx[k];
            }
        }
        if (atoms.size() >= 62) throw CapError("enumerate_atomic_types: too many atoms per partition");
        const long long subsets = 1LL << atoms.size();
        total += subsets;
        if (total > limits.max_types)
            throw CapError("enumerate_atomic_types: would produce more than " +
                           std::to_string(limits.max_types) + " types");
        std::vector<AtomicType> batch;
        batch.reserve(subsets);
        for (long long mask = 0; mask < subsets; ++mask) {
            AtomicType t;
            t.arity = n;
            t.eq = rgs;
            for (size_t i = 0; i < atoms.size(); ++i) {
                if (mask & (1LL << i)) t.facts.insert(atoms[i]);
            }
            batch.push_back(std::move(t));
        }
        // Within a partition, order fact sets lexicographically.
        std::sort(batch.begin(), batch.end());
        for (auto& t : batch) out.push_back(std::move(t));
    }
    return out;
}

} // namespace embq
