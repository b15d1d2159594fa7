#include "embq/structure.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace embq {

Vocabulary::Vocabulary(std::map<std::string, int> relations) : relations_(std::move(relations)) {
    for (const auto& [name, ar] : relations_) {
        if (name.empty()) throw UsageError("vocabulary: empty relation name");
        if (ar < 1) throw UsageError("vocabulary: relation '" + name + "' has arity " + std::to_string(ar) + ", must be >= 1");
    }
}

Vocabulary Vocabulary::of(std::initializer_list<std::pair<std::string, int>> rels) {
    std::map<std::string, int> m;
    for (const auto& [n, a] : rels) {
        if (!m.emplace(n, a).second) throw UsageError("vocabulary: duplicate relation '" + n + "'");
    }
    return Vocabulary(std::move(m));
}

int Vocabulary::arity(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw UsageError("unknown relation symbol '" + name + "'");
    return it->second;
}

Structure Structure::make(Vocabulary vocab, std::vector<std::string> universe,
                          const std::map<std::string, std::vector<std::vector<std::string>>>& relations) {
    Structure s;
    s.vocab_ = std::move(vocab);
    s.universe_ = std::move(universe);
    s.build_index();
    for (const auto& [rel, tuples] : relations) {
        auto& out = s.interp_[rel];
        for (const auto& t : tuples) {
            std::vector<int> idx;
            idx.reserve(t.size());
            for (const auto& id : t) {
                auto pos = s.try_index_of(id);
                if (!pos) throw UsageError("relation '" + rel + "': element '" + id + "' not in universe");
                idx.push_back(*pos);
            }
            out.insert(std::move(idx));
        }
    }
    s.validate();
    return s;
}

Structure Structure::make_indexed(Vocabulary vocab, std::vector<std::string> universe,
                                  std::map<std::string, std::set<std::vector<int>>> interp) {
    Structure s;
    s.vocab_ = std::move(vocab);
    s.universe_ = std::move(universe);
    s.interp_ = std::move(interp);
    s.build_index();
    s.validate();
    return s;
}

void Structure::build_index() {
    index_.clear();
    for (int i = 0; i < static_cast<int>(universe_.size()); ++i) {
        if (!index_.emplace(universe_[i], i).second)
            throw UsageError("universe: duplicate element id '" + universe_[i] + "'");
    }
}

void Structure::validate() const {
    const int n = size();
    for (const auto& [rel, tuples] : interp_) {
        if (!vocab_.has(rel)) throw UsageError("interpretation of '" + rel + "' not in vocabulary");
        const int ar = vocab_.arity(rel);
        for (const auto& t : tuples) {
            if (static_cast<int>(t.size()) != ar)
                throw UsageError("relation '" + rel + "': tuple of length " + std::to_string(t.size()) +
                                 ", arity is " + std::to_string(ar));
            for (int e : t) {
                if (e < 0 || e >= n) throw UsageError("relation '" + rel + "': element index out of range");
            }
        }
    }
}

int Structure::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw UsageError("element '" + id + "' not in universe");
    return it->second;
}

std::optional<int> Structure::try_index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::set<std::vector<int>>& Structure::tuples(const std::string& rel) const {
    static const std::set<std::vector<int>> kEmpty;
    if (!vocab_.has(rel)) throw UsageError("unknown relation symbol '" + rel + "'");
    auto it = interp_.find(rel);
    return it == interp_.end() ? kEmpty : it->second;
}

bool Structure::has(const std::string& rel, const std::vector<int>& tuple) const {
    auto it = interp_.find(rel);
    return it != interp_.end() && it->second.count(tuple) > 0;
}

Structure Structure::induced_substructure(const std::set<std::string>& keep) const {
    std::vector<std::string> new_universe;
    std::vector<int> remap(universe_.size(), -1);
    for (const auto& id : keep) {
        if (!try_index_of(id)) throw UsageError("induced substructure: element '" + id + "' not in universe");
    }
    for (int i = 0; i < size(); ++i) {
        if (keep.count(universe_[i])) {
            remap[i] = static_cast<int>(new_universe.size());
            new_universe.push_back(universe_[i]);
        }
    }
    std::map<std::string, std::set<std::vector<int>>> interp;
    for (const auto& [rel, tuples] : interp_) {
        for (const auto& t : tuples) {
            std::vector<int> mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (int e : t) {
                if (remap[e] < 0) { inside = false; break; }
                mapped.push_back(remap[e]);
            }
            if (inside) interp[rel].insert(std::move(mapped));
        }
    }
    return make_indexed(vocab_, std::move(new_universe), std::move(interp));
}

Structure Structure::disjoint_union(const Structure& a, const Structure& b) {
    if (a.vocab() != b.vocab()) throw UsageError("disjoint union: vocabulary mismatch");
    std::vector<std::string> universe;
    universe.reserve(a.size() + b.size());
    for (const auto& id : a.universe()) universe.push_back("0." + id);
    for (const auto& id : b.universe()) universe.push_back("1." + id);
    const int off = a.size();
    std::map<std::string, std::set<std::vector<int>>> interp;
    for (const auto& [rel, tuples] : a.interp()) interp[rel].insert(tuples.begin(), tuples.end());
    for (const auto& [rel, tuples] : b.interp()) {
        auto& out = interp[rel];
        for (const auto& t : tuples) {
            std::vector<int> shifted;
            shifted.reserve(t.size());
            for (int e : t) shifted.push_back(e + off);
            out.insert(std::move(shifted));
        }
    }
    return make_indexed(a.vocab(), std::move(universe), std::move(interp));
}

std::string Structure::encode() const {
    std::ostringstream out;
    for (const auto& [rel, ar] : vocab_.relations()) out << rel << '/' << ar << ';';
    out << '|' << size() << '|';
    for (const auto& id : universe_) out << id << ',';
    for (const auto& [rel, tuples] : interp_) {
        out << '|' << rel << ':';
        for (const auto& t : tuples) {
            for (int e : t) out << e << '.';
            out << ' ';
        }
    }
    return out.str();
}

bool Structure::operator==(const Structure& o) const {
    return vocab_ == o.vocab_ && universe_ == o.universe_ && interp_ == o.interp_;
}

namespace {

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(origin + ": " + e.what());
    }
}

} // namespace

Structure structure_from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j = parse_json(text, origin);
    if (!j.is_object()) throw UsageError(origin + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (key != "vocabulary" && key != "universe" && key != "relations")
            throw UsageError(origin + ": unknown key '" + key + "'");
    }
    if (!j.contains("vocabulary")) throw UsageError(origin + ": missing 'vocabulary'");
    if (!j.contains("universe")) throw UsageError(origin + ": missing 'universe'");

    std::map<std::string, int> rels;
    for (const auto& [name, ar] : j["vocabulary"].items()) {
        if (!ar.is_number_integer()) throw UsageError(origin + ": vocabulary arity for '" + name + "' must be an integer");
        rels[name] = ar.get<int>();
    }
    Vocabulary vocab(std::move(rels));

    std::vector<std::string> universe;
    for (const auto& el : j["universe"]) {
        if (!el.is_string()) throw UsageError(origin + ": universe elements must be strings");
        universe.push_back(el.get<std::string>());
    }

    std::map<std::string, std::vector<std::vector<std::string>>> relations;
    if (j.contains("relations")) {
        for (const auto& [rel, tuples] : j["relations"].items()) {
            if (!vocab.has(rel)) throw UsageError(origin + ": relation '" + rel + "' not in vocabulary");
            auto& out = relations[rel];
            for (const auto& t : tuples) {
                std::vector<std::string> tup;
                for (const auto& el : t) tup.push_back(el.get<std::string>());
                if (static_cast<int>(tup.size()) != vocab.arity(rel))
                    throw UsageError(origin + ": relation '" + rel + "': tuple length != arity");
                out.push_back(std::move(tup));
            }
        }
    }
    try {
        return Structure::make(std::move(vocab), std::move(universe), relations);
    } catch (const UsageError& e) {
        throw UsageError(origin + ": " + e.what());
    }
}

Structure structure_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open structure file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return structure_from_json_text(buf.str(), path);
}

std::string structure_to_json_text(const Structure& s, bool pretty) {
    nlohmann::json j;
    j["vocabulary"] = nlohmann::json::object();
    for (const auto& [rel, ar] : s.vocab().relations()) j["vocabulary"][rel] = ar;
    j["universe"] = s.universe();
    j["relations"] = nlohmann::json::object();
    for (const auto& [rel, tuples] : s.interp()) {
        auto arr = nlohmann::json::array();
        for (const auto& t : tuples) {
            auto tup = nlohmann::json::array();
            for (int e : t) tup.push_back(s.id_of(e));
            arr.push_back(tup);
        }
        j["relations"][rel] = arr;
    }
    return pretty ? j.dump(2) : j.dump();
}

} // namespace embq
