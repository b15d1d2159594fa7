#pragma once

#include "embq/structure.hpp"

#include <map>
#include <string>
#include <vector>

namespace embq {

// Stock structures used throughout the test and demo surfaces. Graphs are
// loop-free with symmetric edge sets over vocabulary {E:2}.

Structure complete_graph(int n);
Structure im_kn(int m, int n); // m disjoint copies of K_n
Structure pentagon();          // C5: vertices 0..4, i~j iff |i-j| in {1,4}
Structure k3_times_k3();       // 3x3 rook's graph: (a,b)~(c,d) iff same row xor same column
Structure path_graph(int n);   // n vertices 0..n-1 in a line
Structure cycle_graph(int n);
Structure haertig_chain(int i); // universe {0..i}, U = evens, V = odds, vocab {U:1,V:1}
Structure equiv_classes(const std::vector<int>& sizes); // equivalence relation over {E:2}

/// Catalog entry point: name in {complete, ImKn, pentagon, k3xk3, path,
/// haertig_chain, cycle, equiv_classes}; params like {"n":"3"} or
/// {"sizes":"2,2,3"}.
Structure catalog_generate(const std::string& name, const std::map<std::string, std::string>& params);

} // namespace embq
