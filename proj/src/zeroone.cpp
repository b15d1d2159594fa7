#include "embq/zeroone.hpp"

#include "embq/errors.hpp"
#include "embq/morphism.hpp"
#include "embq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace embq {

Structure sample_random_structure(const SampleConfig& cfg, uint64_t index) {
    if (cfg.size < 0) throw UsageError("sample: size must be >= 0");
    if (cfg.p < 0.0 || cfg.p > 1.0) throw UsageError("sample: p must be in [0,1]");
    const int n = cfg.size;
    std::vector<std::string> universe;
    for (int i = 0; i < n; ++i) universe.push_back(std::to_string(i));
    std::map<std::string, std::set<std::vector<int>>> interp;
    uint64_t rel_id = 0;
    for (const auto& [rel, ar] : cfg.vocab.relations()) {
        auto& out = interp[rel];
        ++rel_id;
        if (n == 0) continue;
        std::vector<int> tuple(ar, 0);
        uint64_t rank = 0;
        while (true) {
            uint64_t bits = mix(mix(cfg.seed, index), mix(rel_id, rank));
            if (unit_double(bits) < cfg.p) out.insert(tuple);
            ++rank;
            int k = ar - 1;
            while (k >= 0 && tuple[k] == n - 1) { tuple[k] = 0; --k; }
            if (k < 0) break;
            ++tuple[k];
        }
    }
    return Structure::make_indexed(cfg.vocab, std::move(universe), std::move(interp));
}

std::pair<double, double> wilson_interval(int positives, int samples, double z) {
    if (samples <= 0) return {0.0, 1.0};
    const double n = samples;
    const double phat = positives / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MuEstimate estimate_mu(const FormulaPtr& sentence, const SampleConfig& cfg,
                       const QuantifierRegistry* registry, int jobs) {
    if (!free_variables(sentence).empty())
        throw UsageError("estimate_mu: formula has free variables");
    if (cfg.samples <= 0) throw UsageError("estimate_mu: need a positive sample count");
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, cfg.samples);

    std::vector<int> counts(jobs, 0);
    auto worker = [&](int w) {
        int local = 0;
        for (int i = w; i < cfg.samples; i += jobs) {
            Structure s = sample_random_structure(cfg, static_cast<uint64_t>(i));
            if (evaluate(s, sentence, {}, registry)) ++local;
        }
        counts[w] = local;
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
    }
    MuEstimate est;
    est.samples = cfg.samples;
    for (int c : counts) est.positives += c;
    est.estimate = static_cast<double>(est.positives) / cfg.samples;
    std::tie(est.ci_low, est.ci_high) = wilson_interval(est.positives, est.samples);
    return est;
}

bool extension_property_holds(const Structure& a, const TupleAssignment& tuple, const Structure& b) {
    if (a.vocab() != b.vocab()) throw UsageError("extension property: vocabulary mismatch");
    AtomicType t = atomic_type_of(a, tuple);
    const int k = t.arity;
    const int n = b.size();
    // Every realization of t in B must admit a pinned embedding.
    std::vector<int> cand(k, 0);
    if (k == 0) return embeddable(a, b);
    if (n == 0) return true;
    while (true) {
        if (atomic_type_of(b, cand) == t) {
            MorphismQuery q = MorphismQuery::embedding(a, b);
            for (int i = 0; i < k; ++i) q.pins.push_back({tuple[i], b.id_of(cand[i])});
            if (!find_morphism(q)) return false;
        }
        int i = k - 1;
        while (i >= 0 && cand[i] == n - 1) { cand[i] = 0; --i; }
        if (i < 0) break;
        ++cand[i];
    }
    return true;
}

TypeDisjunction asympt_theta(const FormulaPtr& qapp, const Vocabulary& vocab,
                             const QuantifierRegistry* registry, int search_size,
                             const CanonicalLimits& limits) {
    if (qapp->kind != Formula::Kind::QApp)
        throw UsageError("asympt_theta: formula must be a quantifier application");
    for (const auto& b : qapp->bindings)
        if (!is_quantifier_free(b.body))
            throw UsageError("asympt_theta: bodies must be quantifier-free");
    if (!registry) throw UsageError("asympt_theta: a quantifier registry is required");
    if (!registry->get(qapp->name).embedding_closed())
        throw UsageError("asympt_theta: quantifier '" + qapp->name + "' is not embedding-closed");

    auto fv = free_variables(qapp);
    std::vector<std::string> vars(fv.begin(), fv.end());
    const int k = static_cast<int>(vars.size());

    TypeDisjunction theta;
    theta.vocab = vocab;
    theta.vars = vars;
    for (const Structure& s : enumerate_structures_up_to_iso(vocab, 0, search_size, limits)) {
        Evaluator ev(s, registry);
        const int n = s.size();
        if (k == 0) {
            if (ev.evaluate_indexed(qapp, {}, {})) theta.types.insert(atomic_type_of(s, std::vector<int>{}));
            continue;
        }
        if (n == 0) continue;
        std::vector<int> tuple(k, 0);
        while (true) {
            if (ev.evaluate_indexed(qapp, vars, tuple)) theta.types.insert(atomic_type_of(s, tuple));
            int i = k - 1;
            while (i >= 0 && tuple[i] == n - 1) { tuple[i] = 0; --i; }
            if (i < 0) break;
            ++tuple[i];
        }
    }
    return theta;
}

} // namespace embq
