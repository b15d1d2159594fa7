#include "embq/qelim.hpp"

#include "embq/errors.hpp"
#include "embq/morphism.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace embq {

namespace {

// Compact atomic-type key for a non-repeating tuple: all positions distinct,
// so only the relation facts over positions matter.
std::string tuple_type_key(const Structure& a, const std::vector<int>& tuple) {
    std::string key;
    const int k = static_cast<int>(tuple.size());
    for (const auto& [rel, ar] : a.vocab().relations()) {
        key += '|';
        std::vector<int> idx(ar, 0);
        if (k == 0) continue;
        while (true) {
            std::vector<int> elems(ar);
            for (int i = 0; i < ar; ++i) elems[i] = tuple[idx[i]];
            key += a.has(rel, elems) ? '1' : '0';
            int i = ar - 1;
            while (i >= 0 && idx[i] == k - 1) { idx[i] = 0; --i; }
            if (i < 0) break;
            ++idx[i];
        }
    }
    return key;
}

std::vector<int> orbit_representative(const std::vector<std::vector<int>>& autos,
                                      const std::vector<int>& tuple) {
    std::vector<int> best = tuple;
    std::vector<int> img(tuple.size());
    for (const auto& g : autos) {
        for (size_t i = 0; i < tuple.size(); ++i) img[i] = g[tuple[i]];
        if (img < best) best = img;
    }
    return best;
}

TupleAssignment ids_of(const Structure& a, const std::vector<int>& tuple) {
    TupleAssignment out;
    out.reserve(tuple.size());
    for (int e : tuple) out.push_back(a.id_of(e));
    return out;
}

} // namespace

HomogeneityReport is_quasi_homogeneous(const Structure& a, const HomogeneityOptions& opts) {
    if (a.size() > opts.max_size)
        throw CapError("is_quasi_homogeneous: structure size " + std::to_string(a.size()) +
                       " exceeds cap " + std::to_string(opts.max_size));
    const int n = a.size();

    MorphismQuery q = MorphismQuery::isomorphism(a, a);
    q.limit = opts.max_automorphisms + 1;
    auto maps = enumerate_morphisms(q);
    if (static_cast<long long>(maps.size()) > opts.max_automorphisms)
        throw CapError("is_quasi_homogeneous: automorphism cap exceeded");
    std::vector<std::vector<int>> autos;
    autos.reserve(maps.size());
    for (const auto& m : maps) {
        std::vector<int> g(n);
        for (const auto& [src, dst] : m) g[a.index_of(src)] = a.index_of(dst);
        autos.push_back(std::move(g));
    }

    // Level-by-level orbit/type comparison. Extending one representative per
    // orbit by every new element covers every orbit of the next level.
    long long examined = 0;
    std::vector<std::vector<int>> reps{{}};
    for (int level = 0; level < n; ++level) {
        // type key -> (orbit representative, witness tuple)
        std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> classes;
        std::set<std::vector<int>> next_reps;
        for (const auto& rep : reps) {
            std::vector<bool> used(n, false);
            for (int e : rep) used[e] = true;
            for (int e = 0; e < n; ++e) {
                if (used[e]) continue;
                std::vector<int> t = rep;
                t.push_back(e);
                if (++examined > opts.max_orbit_tuples)
                    throw CapError("is_quasi_homogeneous: orbit tuple cap exceeded");
                std::vector<int> orb = orbit_representative(autos, t);
                std::string key = tuple_type_key(a, t);
                auto it = classes.find(key);
                if (it == classes.end()) {
                    classes.emplace(std::move(key), std::make_pair(orb, t));
                } else if (it->second.first != orb) {
                    // Same atomic type, different orbits: no automorphism
                    // (hence no self-embedding) maps one tuple to the other.
                    return {false, std::make_pair(ids_of(a, it->second.second), ids_of(a, t))};
                }
                next_reps.insert(std::move(orb));
            }
        }
        reps.assign(next_reps.begin(), next_reps.end());
    }
    return {true, std::nullopt};
}

namespace {

std::mutex g_homog_cache_mutex;
std::unordered_map<std::string, bool> g_homog_cache;

} // namespace

bool is_quasi_homogeneous_cached(const Structure& a, const HomogeneityOptions& opts) {
    std::string key = a.encode();
    {
        std::lock_guard<std::mutex> lock(g_homog_cache_mutex);
        auto it = g_homog_cache.find(key);
        if (it != g_homog_cache.end()) return it->second;
    }
    bool result = is_quasi_homogeneous(a, opts).homogeneous;
    std::lock_guard<std::mutex> lock(g_homog_cache_mutex);
    g_homog_cache.emplace(std::move(key), result);
    return result;
}

TypeDisjunction eliminate_quantifiers(const Structure& a, const FormulaPtr& f,
                                      const QuantifierRegistry* registry,
                                      const HomogeneityOptions& opts) {
    if (!is_quasi_homogeneous_cached(a, opts))
        throw UsageError("eliminate_quantifiers: structure is not quasi-homogeneous");

    auto fv = free_variables(f);
    std::vector<std::string> vars(fv.begin(), fv.end());
    const int k = static_cast<int>(vars.size());

    TypeDisjunction theta;
    theta.vocab = a.vocab();
    theta.vars = vars;

    Evaluator ev(a, registry);
    const int n = a.size();
    std::vector<std::vector<int>> assignments;
    std::vector<int> tuple(k, 0);
    if (k == 0) {
        assignments.push_back({});
    } else if (n > 0) {
        while (true) {
            assignments.push_back(tuple);
            int i = k - 1;
            while (i >= 0 && tuple[i] == n - 1) { tuple[i] = 0; --i; }
            if (i < 0) break;
            ++tuple[i];
        }
    }

    std::vector<bool> truth(assignments.size());
    for (size_t i = 0; i < assignments.size(); ++i) {
        truth[i] = ev.evaluate_indexed(f, vars, assignments[i]);
        if (truth[i]) theta.types.insert(atomic_type_of(a, assignments[i]));
    }
    // The guarantee this operation exists for; a failure means either the
    // homogeneity checker or the evaluator is broken.
    for (size_t i = 0; i < assignments.size(); ++i) {
        if (truth[i] != theta.satisfied_by(a, assignments[i]))
            throw EngineError("eliminate_quantifiers: equivalence verification failed");
    }
    return theta;
}

FormulaPtr describe_structure(const Structure& a) {
    const int n = a.size();
    std::vector<std::string> vars;
    for (int i = 0; i < n; ++i) vars.push_back("x" + std::to_string(i + 1));

    std::vector<FormulaPtr> body;
    // Full diagram over the pinned variables.
    if (n > 0) {
        AtomicType diagram = atomic_type_of(a, [&] {
            std::vector<int> all(n);
            for (int i = 0; i < n; ++i) all[i] = i;
            return all;
        }());
        body.push_back(type_to_formula(diagram, a.vocab(), vars));
    }
    // Closure: every element is one of the pinned ones.
    std::vector<FormulaPtr> cases;
    for (int i = 0; i < n; ++i) cases.push_back(f_eq("y", vars[i]));
    body.push_back(f_forall("y", f_or(std::move(cases))));

    FormulaPtr out = f_and(std::move(body));
    for (int i = n - 1; i >= 0; --i) out = f_exists(vars[i], out);
    return out;
}

} // namespace embq
