#include "embq/morphism.hpp"

#include "embq/atomic_type.hpp"
#include "embq/errors.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace embq {

namespace {

// All tuples over `domain` (plus the mandatory element `must`) of length ar,
// containing `must` at least once, visited via callback. Used for the
// incremental consistency check when `must` is newly assigned.
template <typename F>
void for_tuples_containing(const std::vector<int>& domain, int must, int ar, F&& visit) {
    std::vector<int> tuple(ar);
    std::function<void(int, bool)> rec = [&](int pos, bool used) {
        if (pos == ar) {
            if (used) visit(tuple);
            return;
        }
        for (int e : domain) {
            tuple[pos] = e;
            rec(pos + 1, used || e == must);
        }
    };
    rec(0, false);
}

class Searcher {
  public:
    Searcher(const MorphismQuery& q) : q_(q), a_(*q.source), b_(*q.target) {
        if (a_.vocab() != b_.vocab()) throw UsageError("morphism query: vocabulary mismatch");
        na_ = a_.size();
        nb_ = b_.size();
        assign_.assign(na_, -1);
        used_.assign(nb_, false);
        precompute_signatures();
    }

    // Runs the search; returns collected maps (respecting q.limit; limit 1
    // for find).
    std::vector<PartialMap> run(long long limit) {
        limit_ = limit;
        results_.clear();
        if (q_.kind == MorphKind::Isomorphism && na_ != nb_) return {};
        if ((q_.kind == MorphKind::Embedding || q_.kind == MorphKind::Isomorphism) && na_ > nb_)
            return {};
        if (!apply_pins()) return {};
        extend(0);
        return std::move(results_);
    }

  private:
    const MorphismQuery& q_;
    const Structure& a_;
    const Structure& b_;
    int na_ = 0, nb_ = 0;
    long long limit_ = 1;
    std::vector<int> assign_;
    std::vector<bool> used_;
    std::vector<PartialMap> results_;

    bool injective() const { return q_.kind != MorphKind::Homomorphism; }

    // Single-element atomic type (loops/unary membership) per element, and
    // per-(relation, position) incidence counts.
    std::vector<std::string> sig_a_, sig_b_;
    std::vector<std::vector<int>> deg_a_, deg_b_; // [rel*max_ar + pos][element]

    void precompute_signatures() {
        auto sig = [](const Structure& s, int e) {
            return atomic_type_of(s, std::vector<int>{e}).to_string();
        };
        sig_a_.resize(na_);
        sig_b_.resize(nb_);
        for (int e = 0; e < na_; ++e) sig_a_[e] = sig(a_, e);
        for (int e = 0; e < nb_; ++e) sig_b_[e] = sig(b_, e);

        auto degrees = [](const Structure& s) {
            std::vector<std::vector<int>> deg;
            for (const auto& [rel, ar] : s.vocab().relations()) {
                for (int pos = 0; pos < ar; ++pos) {
                    std::vector<int> d(s.size(), 0);
                    for (const auto& t : s.tuples(rel)) ++d[t[pos]];
                    deg.push_back(std::move(d));
                }
            }
            return deg;
        };
        deg_a_ = degrees(a_);
        deg_b_ = degrees(b_);
    }

    bool candidate_compatible(int sa, int tb) const {
        switch (q_.kind) {
            case MorphKind::Isomorphism:
                if (sig_a_[sa] != sig_b_[tb]) return false;
                for (size_t k = 0; k < deg_a_.size(); ++k)
                    if (deg_a_[k][sa] != deg_b_[k][tb]) return false;
                return true;
            case MorphKind::Embedding:
                if (sig_a_[sa] != sig_b_[tb]) return false;
                for (size_t k = 0; k < deg_a_.size(); ++k)
                    if (deg_a_[k][sa] > deg_b_[k][tb]) return false;
                return true;
            case MorphKind::Homomorphism: {
                // Positive single-element facts must carry over; counts may shrink.
                AtomicType ta = atomic_type_of(a_, std::vector<int>{sa});
                AtomicType tb2 = atomic_type_of(b_, std::vector<int>{tb});
                for (const auto& f : ta.facts)
                    if (!tb2.facts.count(f)) return false;
                return true;
            }
        }
        return true;
    }

    // Checks every relation tuple over the currently assigned elements that
    // mentions `sa`; called right after assigning sa -> assign_[sa].
    bool locally_consistent(int sa) const {
        std::vector<int> domain;
        for (int e = 0; e < na_; ++e)
            if (assign_[e] >= 0) domain.push_back(e);
        for (const auto& [rel, ar] : a_.vocab().relations()) {
            bool ok = true;
            for_tuples_containing(domain, sa, ar, [&](const std::vector<int>& t) {
                if (!ok) return;
                std::vector<int> img(t.size());
                for (size_t i = 0; i < t.size(); ++i) img[i] = assign_[t[i]];
                const bool in_a = a_.has(rel, t);
                const bool in_b = b_.has(rel, img);
                if (q_.kind == MorphKind::Homomorphism) {
                    if (in_a && !in_b) ok = false;
                } else {
                    if (in_a != in_b) ok = false;
                }
            });
            if (!ok) return false;
        }
        return true;
    }

    bool apply_pins() {
        for (const auto& [src, dst] : q_.pins) {
            auto si = a_.try_index_of(src);
            auto ti = b_.try_index_of(dst);
            if (!si) throw UsageError("pin source '" + src + "' not in source universe");
            if (!ti) throw UsageError("pin target '" + dst + "' not in target universe");
            if (assign_[*si] >= 0) {
                if (assign_[*si] != *ti) return false; // inconsistent pins
                continue;
            }
            if (injective() && used_[*ti]) return false;
            if (!candidate_compatible(*si, *ti)) return false;
            assign_[*si] = *ti;
            used_[*ti] = true;
            if (!locally_consistent(*si)) return false;
        }
        return true;
    }

    void record() {
        PartialMap m;
        m.reserve(na_);
        for (int e = 0; e < na_; ++e) m.push_back({a_.id_of(e), b_.id_of(assign_[e])});
        results_.push_back(std::move(m));
    }

    void extend(int next) {
        if (static_cast<long long>(results_.size()) >= limit_) return;
        while (next < na_ && assign_[next] >= 0) ++next;
        if (next == na_) {
            record();
            return;
        }
        for (int tb = 0; tb < nb_; ++tb) {
            if (injective() && used_[tb]) continue;
            if (!candidate_compatible(next, tb)) continue;
            assign_[next] = tb;
            used_[tb] = true;
            if (locally_consistent(next)) extend(next + 1);
            assign_[next] = -1;
            used_[tb] = false;
            if (static_cast<long long>(results_.size()) >= limit_) return;
        }
    }
};

} // namespace

bool check_embedding(const Structure& a, const Structure& b, const PartialMap& f) {
    std::vector<int> assign(a.size(), -1);
    std::vector<bool> used(b.size(), false);
    for (const auto& [src, dst] : f) {
        int si = a.index_of(src);
        int ti = b.index_of(dst);
        if (assign[si] >= 0 && assign[si] != ti) return false; // source mapped twice
        if (assign[si] < 0) {
            if (used[ti]) return false; // not injective
            assign[si] = ti;
            used[ti] = true;
        }
    }
    for (int e = 0; e < a.size(); ++e)
        if (assign[e] < 0) throw UsageError("check_embedding: map not total on source");
    for (const auto& [rel, ar] : a.vocab().relations()) {
        if (!b.vocab().has(rel) || b.vocab().arity(rel) != ar) return false;
        std::vector<int> t(ar, 0);
        const int n = a.size();
        if (n == 0) continue;
        while (true) {
            std::vector<int> img(ar);
            for (int k = 0; k < ar; ++k) img[k] = assign[t[k]];
            if (a.has(rel, t) != b.has(rel, img)) return false;
            int k = ar - 1;
            while (k >= 0 && t[k] == n - 1) { t[k] = 0; --k; }
            if (k < 0) break;
            ++t[k];
        }
    }
    return true;
}

bool check_homomorphism(const Structure& a, const Structure& b, const PartialMap& f) {
    std::vector<int> assign(a.size(), -1);
    for (const auto& [src, dst] : f) {
        int si = a.index_of(src);
        int ti = b.index_of(dst);
        if (assign[si] >= 0 && assign[si] != ti) return false;
        assign[si] = ti;
    }
    for (int e = 0; e < a.size(); ++e)
        if (assign[e] < 0) throw UsageError("check_homomorphism: map not total on source");
    for (const auto& [rel, tuples] : a.interp()) {
        for (const auto& t : tuples) {
            std::vector<int> img(t.size());
            for (size_t i = 0; i < t.size(); ++i) img[i] = assign[t[i]];
            if (!b.has(rel, img)) return false;
        }
    }
    return true;
}

std::optional<PartialMap> find_morphism(const MorphismQuery& q) {
    Searcher s(q);
    auto found = s.run(1);
    if (found.empty()) return std::nullopt;
    // Results are guaranteed by construction; re-check as a cheap guard.
    const bool ok = q.kind == MorphKind::Homomorphism
                        ? check_homomorphism(*q.source, *q.target, found.front())
                        : check_embedding(*q.source, *q.target, found.front());
    if (!ok) throw EngineError("find_morphism: search returned an invalid map");
    return found.front();
}

std::vector<PartialMap> enumerate_morphisms(const MorphismQuery& q) {
    Searcher s(q);
    long long limit = q.limit.value_or(std::numeric_limits<long long>::max());
    return s.run(limit);
}

bool embeddable(const Structure& a, const Structure& b) {
    return find_morphism(MorphismQuery::embedding(a, b)).has_value();
}

bool isomorphic(const Structure& a, const Structure& b) {
    return find_morphism(MorphismQuery::isomorphism(a, b)).has_value();
}

bool bi_embeddable(const Structure& a, const Structure& b) {
    if (a.vocab() != b.vocab()) throw UsageError("bi_embeddable: vocabulary mismatch");
    return embeddable(a, b) && embeddable(b, a);
}

Structure f_transform(const Structure& a) {
    std::map<std::string, int> rels = a.vocab().relations();
    for (const auto& [rel, ar] : a.vocab().relations()) {
        std::string star = rel + "_star";
        if (rels.count(star)) throw UsageError("f_transform: symbol '" + star + "' already taken");
        rels[star] = ar;
    }
    if (rels.count("N")) throw UsageError("f_transform: symbol 'N' already taken");
    rels["N"] = 2;

    std::map<std::string, std::set<std::vector<int>>> interp;
    const int n = a.size();
    for (const auto& [rel, ar] : a.vocab().relations()) {
        auto& pos = interp[rel];
        auto& neg = interp[rel + "_star"];
        if (n == 0) continue;
        std::vector<int> t(ar, 0);
        while (true) {
            (a.has(rel, t) ? pos : neg).insert(t);
            int k = ar - 1;
            while (k >= 0 && t[k] == n - 1) { t[k] = 0; --k; }
            if (k < 0) break;
            ++t[k];
        }
    }
    auto& neq = interp["N"];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) neq.insert({i, j});
    return Structure::make_indexed(Vocabulary(std::move(rels)), a.universe(), std::move(interp));
}

bool hom_closure_member(const std::vector<Structure>& generators, const Structure& a) {
    for (const auto& g : generators) {
        Structure fg = f_transform(g);
        if (fg.vocab() != a.vocab())
            throw UsageError("hom_closure_member: target not over the expanded vocabulary");
        if (find_morphism(MorphismQuery::homomorphism(fg, a))) return true;
    }
    return false;
}

} // namespace embq
