#include "embq/quantifier.hpp"

#include "embq/errors.hpp"
#include "embq/morphism.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace embq {

QuantifierDef QuantifierDef::embedding_closure(std::string name, std::vector<Structure> generators) {
    QuantifierDef q;
    q.name = std::move(name);
    q.kind = Kind::EmbeddingClosure;
    if (generators.empty()) throw UsageError("quantifier '" + q.name + "': closure kinds need generators");
    q.sigma = generators.front().vocab();
    q.generators = std::move(generators);
    q.validate();
    return q;
}

QuantifierDef QuantifierDef::homomorphism_closure(std::string name, std::vector<Structure> generators) {
    QuantifierDef q = embedding_closure(std::move(name), std::move(generators));
    q.kind = Kind::HomomorphismClosure;
    return q;
}

QuantifierDef QuantifierDef::substructure_complement(std::string name, QuantifierDef inner) {
    QuantifierDef q;
    q.name = std::move(name);
    q.kind = Kind::SubstructureClosedComplement;
    q.sigma = inner.sigma;
    q.inner = std::make_shared<const QuantifierDef>(std::move(inner));
    return q;
}

QuantifierDef QuantifierDef::count_at_least(std::string name, const std::string& unary_symbol,
                                            long long k) {
    QuantifierDef q;
    q.name = std::move(name);
    q.kind = Kind::CountAtLeast;
    q.sigma = Vocabulary::of({{unary_symbol, 1}});
    q.count_k = k;
    q.validate();
    return q;
}

void QuantifierDef::validate() const {
    switch (kind) {
        case Kind::EmbeddingClosure:
        case Kind::HomomorphismClosure:
            if (generators.empty())
                throw UsageError("quantifier '" + name + "': closure kinds need at least one generator");
            for (const auto& g : generators)
                if (g.vocab() != sigma)
                    throw UsageError("quantifier '" + name + "': generator vocabulary mismatch");
            break;
        case Kind::SubstructureClosedComplement:
            if (!inner) throw UsageError("quantifier '" + name + "': complement kind needs an inner quantifier");
            break;
        case Kind::CountAtLeast: {
            if (sigma.relations().size() != 1 || sigma.relations().begin()->second != 1)
                throw UsageError("quantifier '" + name + "': count_at_least needs a single unary symbol");
            if (count_k < 0) throw UsageError("quantifier '" + name + "': k must be >= 0");
            break;
        }
    }
}

bool quantifier_member(const QuantifierDef& q, const Structure& s) {
    if (s.vocab() != q.sigma)
        throw UsageError("quantifier '" + q.name + "': structure vocabulary does not match sigma");
    switch (q.kind) {
        case QuantifierDef::Kind::EmbeddingClosure:
            for (const auto& g : q.generators)
                if (embeddable(g, s)) return true;
            return false;
        case QuantifierDef::Kind::HomomorphismClosure:
            for (const auto& g : q.generators)
                if (find_morphism(MorphismQuery::homomorphism(g, s))) return true;
            return false;
        case QuantifierDef::Kind::SubstructureClosedComplement:
            return !quantifier_member(*q.inner, s);
        case QuantifierDef::Kind::CountAtLeast: {
            const std::string& u = q.sigma.relations().begin()->first;
            return static_cast<long long>(s.tuples(u).size()) >= q.count_k;
        }
    }
    return false;
}

void QuantifierRegistry::add(QuantifierDef def) {
    def.validate();
    std::string name = def.name;
    if (name.empty()) throw UsageError("quantifier registry: empty name");
    if (!defs_.emplace(name, std::move(def)).second)
        throw UsageError("quantifier registry: duplicate name '" + name + "'");
}

const QuantifierDef& QuantifierRegistry::get(const std::string& name) const {
    auto it = defs_.find(name);
    if (it == defs_.end()) throw UsageError("unknown quantifier '" + name + "'");
    return it->second;
}

namespace {

Structure load_generator(const nlohmann::json& entry, const std::string& base_dir,
                         const std::string& origin) {
    if (entry.is_string()) {
        std::filesystem::path p = entry.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        if (!std::filesystem::exists(p))
            throw UsageError(origin + ": generator file '" + p.string() + "' not found");
        return structure_from_json_file(p.string());
    }
    if (entry.is_object()) return structure_from_json_text(entry.dump(), origin + ": inline generator");
    throw UsageError(origin + ": generator entries must be file paths or inline structures");
}

QuantifierDef def_from_json(const nlohmann::json& j, const std::string& base_dir,
                            const std::string& origin) {
    if (!j.is_object()) throw UsageError(origin + ": quantifier entry must be an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "name" && key != "sigma" && key != "kind" && key != "generators" && key != "k" &&
            key != "inner")
            throw UsageError(origin + ": unknown key '" + key + "' in quantifier entry");
    }
    std::string name = j.value("name", "");
    std::string kind = j.value("kind", "");
    std::map<std::string, int> sigma_rels;
    if (j.contains("sigma"))
        for (const auto& [rel, ar] : j["sigma"].items()) sigma_rels[rel] = ar.get<int>();

    if (kind == "embedding_closure" || kind == "homomorphism_closure") {
        if (!j.contains("generators")) throw UsageError(origin + ": '" + name + "' needs generators");
        std::vector<Structure> gens;
        for (const auto& entry : j["generators"]) gens.push_back(load_generator(entry, base_dir, origin));
        auto q = kind == "embedding_closure" ? QuantifierDef::embedding_closure(name, std::move(gens))
                                             : QuantifierDef::homomorphism_closure(name, std::move(gens));
        if (!sigma_rels.empty() && Vocabulary(sigma_rels) != q.sigma)
            throw UsageError(origin + ": '" + name + "': sigma does not match the generators");
        return q;
    }
    if (kind == "count_at_least") {
        if (sigma_rels.size() != 1)
            throw UsageError(origin + ": '" + name + "': count_at_least needs sigma with one unary symbol");
        if (!j.contains("k")) throw UsageError(origin + ": '" + name + "' needs k");
        return QuantifierDef::count_at_least(name, sigma_rels.begin()->first, j["k"].get<long long>());
    }
    if (kind == "substructure_complement") {
        if (!j.contains("inner")) throw UsageError(origin + ": '" + name + "' needs an inner quantifier");
        nlohmann::json inner = j["inner"];
        if (!inner.contains("name")) inner["name"] = name + ".inner";
        QuantifierDef in = def_from_json(inner, base_dir, origin);
        return QuantifierDef::substructure_complement(name, std::move(in));
    }
    throw UsageError(origin + ": unknown quantifier kind '" + kind + "'");
}

} // namespace

QuantifierRegistry registry_from_json_text(const std::string& text, const std::string& base_dir,
                                           const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(origin + ": " + e.what());
    }
    QuantifierRegistry reg;
    if (j.is_object()) {
        reg.add(def_from_json(j, base_dir, origin));
    } else if (j.is_array()) {
        for (const auto& entry : j) reg.add(def_from_json(entry, base_dir, origin));
    } else {
        throw UsageError(origin + ": expected a quantifier object or array");
    }
    return reg;
}

QuantifierRegistry registry_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open quantifier registry '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string dir = std::filesystem::path(path).parent_path().string();
    return registry_from_json_text(buf.str(), dir, path);
}

} // namespace embq
