#include "embq/catalog.hpp"

#include "embq/errors.hpp"

#include <sstream>

namespace embq {

namespace {

Vocabulary graph_vocab() { return Vocabulary::of({{"E", 2}}); }

Structure graph(int n, const std::set<std::pair<int, int>>& edges, const std::string& prefix = "") {
    std::vector<std::string> universe;
    for (int i = 0; i < n; ++i) universe.push_back(prefix + std::to_string(i));
    std::map<std::string, std::set<std::vector<int>>> interp;
    auto& e = interp["E"];
    for (const auto& [a, b] : edges) {
        e.insert({a, b});
        e.insert({b, a});
    }
    return Structure::make_indexed(graph_vocab(), std::move(universe), std::move(interp));
}

int param_int(const std::map<std::string, std::string>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw UsageError("catalog: missing parameter '" + key + "'");
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("extra characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError("catalog: parameter '" + key + "' must be an integer, got '" + it->second + "'");
    }
}

} // namespace

Structure complete_graph(int n) {
    if (n < 0) throw UsageError("complete: n must be >= 0");
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.insert({i, j});
    return graph(n, edges);
}

Structure im_kn(int m, int n) {
    if (m < 1 || n < 1) throw UsageError("ImKn: m and n must be >= 1");
    std::vector<std::string> universe;
    std::map<std::string, std::set<std::vector<int>>> interp;
    auto& e = interp["E"];
    for (int c = 0; c < m; ++c) {
        for (int v = 0; v < n; ++v) universe.push_back(std::to_string(c) + "." + std::to_string(v));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) e.insert({c * n + i, c * n + j});
    }
    return Structure::make_indexed(graph_vocab(), std::move(universe), std::move(interp));
}

Structure pentagon() {
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (j - i == 1 || j - i == 4) edges.insert({i, j});
    return graph(5, edges);
}

Structure k3_times_k3() {
    std::vector<std::string> universe;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) universe.push_back(std::to_string(a) + "." + std::to_string(b));
    std::map<std::string, std::set<std::vector<int>>> interp;
    auto& e = interp["E"];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    bool adj = (a == c && b != d) || (b == d && a != c);
                    if (adj) e.insert({a * 3 + b, c * 3 + d});
                }
    return Structure::make_indexed(graph_vocab(), std::move(universe), std::move(interp));
}

Structure path_graph(int n) {
    if (n < 0) throw UsageError("path: n must be >= 0");
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.insert({i, i + 1});
    return graph(n, edges);
}

Structure cycle_graph(int n) {
    if (n < 3) throw UsageError("cycle: n must be >= 3");
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.insert({i, (i + 1) % n});
    return graph(n, edges);
}

Structure haertig_chain(int i) {
    if (i < 0) throw UsageError("haertig_chain: i must be >= 0");
    std::vector<std::string> universe;
    std::map<std::string, std::set<std::vector<int>>> interp;
    for (int k = 0; k <= i; ++k) {
        universe.push_back(std::to_string(k));
        interp[k % 2 == 0 ? "U" : "V"].insert({k});
    }
    return Structure::make_indexed(Vocabulary::of({{"U", 1}, {"V", 1}}), std::move(universe),
                                   std::move(interp));
}

Structure equiv_classes(const std::vector<int>& sizes) {
    std::vector<std::string> universe;
    std::map<std::string, std::set<std::vector<int>>> interp;
    auto& e = interp["E"];
    int base = 0;
    for (size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] < 1) throw UsageError("equiv_classes: class sizes must be >= 1");
        for (int v = 0; v < sizes[c]; ++v)
            universe.push_back(std::to_string(c) + "." + std::to_string(v));
        for (int i = 0; i < sizes[c]; ++i)
            for (int j = 0; j < sizes[c]; ++j) e.insert({base + i, base + j});
        base += sizes[c];
    }
    return Structure::make_indexed(graph_vocab(), std::move(universe), std::move(interp));
}

Structure catalog_generate(const std::string& name, const std::map<std::string, std::string>& params) {
    if (name == "complete") return complete_graph(param_int(params, "n"));
    if (name == "ImKn") return im_kn(param_int(params, "m"), param_int(params, "n"));
    if (name == "pentagon") return pentagon();
    if (name == "k3xk3") return k3_times_k3();
    if (name == "path") return path_graph(param_int(params, "n"));
    if (name == "cycle") return cycle_graph(param_int(params, "n"));
    if (name == "haertig_chain") return haertig_chain(param_int(params, "i"));
    if (name == "equiv_classes") {
        auto it = params.find("sizes");
        if (it == params.end()) throw UsageError("catalog: equiv_classes needs 'sizes'");
        std::vector<int> sizes;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                sizes.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw UsageError("catalog: bad size '" + tok + "'");
            }
        }
        return equiv_classes(sizes);
    }
    throw UsageError("catalog: unknown structure name '" + name + "'");
}

} // namespace embq
