#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace embq {

/// Purely relational vocabulary: symbol name -> arity (>= 1).
/// The map order (lexicographic by name) is the canonical symbol order
/// used everywhere a declared order is needed (quantifier bindings,
/// enumeration, encodings).
class Vocabulary {
  public:
    Vocabulary() = default;
    explicit Vocabulary(std::map<std::string, int> relations);

    static Vocabulary of(std::initializer_list<std::pair<std::string, int>> rels);

    const std::map<std::string, int>& relations() const { return relations_; }
    bool has(const std::string& name) const { return relations_.count(name) > 0; }
    int arity(const std::string& name) const;
    bool operator==(const Vocabulary& o) const { return relations_ == o.relations_; }
    bool operator!=(const Vocabulary& o) const { return !(*this == o); }

  private:
    std::map<std::string, int> relations_;
};

/// A tuple of element ids; may repeat elements.
using TupleAssignment = std::vector<std::string>;

/// Finite relational structure. Immutable after construction. Elements are
/// identified by string ids; internally tuples are stored by universe index
/// in the fixed universe order.
class Structure {
  public:
    Structure() = default;

    /// Tuples given by element id. Validates arities and membership.
    static Structure make(Vocabulary vocab, std::vector<std::string> universe,
                          const std::map<std::string, std::vector<std::vector<std::string>>>& relations);

    /// Tuples given directly by universe index.
    static Structure make_indexed(Vocabulary vocab, std::vector<std::string> universe,
                                  std::map<std::string, std::set<std::vector<int>>> interp);

    const Vocabulary& vocab() const { return vocab_; }
    const std::vector<std::string>& universe() const { return universe_; }
    int size() const { return static_cast<int>(universe_.size()); }

    const std::string& id_of(int index) const { return universe_.at(index); }
    int index_of(const std::string& id) const;
    std::optional<int> try_index_of(const std::string& id) const;

    const std::set<std::vector<int>>& tuples(const std::string& rel) const;
    bool has(const std::string& rel, const std::vector<int>& tuple) const;
    const std::map<std::string, std::set<std::vector<int>>>& interp() const { return interp_; }

    /// Restriction to a subset of the universe (by id), keeping universe order.
    Structure induced_substructure(const std::set<std::string>& keep) const;

    /// Tagged disjoint union; element ids become "0.<id>" / "1.<id>".
    static Structure disjoint_union(const Structure& a, const Structure& b);

    /// Exact labeled encoding (not isomorphism-invariant); cheap, suitable
    /// for equality checks and cache keys.
    std::string encode() const;

    bool operator==(const Structure& o) const;

  private:
    Vocabulary vocab_;
    std::vector<std::string> universe_;
    std::unordered_map<std::string, int> index_;
    std::map<std::string, std::set<std::vector<int>>> interp_;

    void build_index();
    void validate() const;
};

/// Structure JSON:
///   {"vocabulary": {"E": 2}, "universe": ["a","b"], "relations": {"E": [["a","b"]]}}
/// Omitted relations are empty; unknown keys are rejected.
Structure structure_from_json_text(const std::string& text, const std::string& origin = "<input>");
Structure structure_from_json_file(const std::string& path);
std::string structure_to_json_text(const Structure& s, bool pretty = true);

} // namespace embq
