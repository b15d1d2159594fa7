#pragma once

#include "embq/structure.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace embq {

/// Semantics of a generalized quantifier over its vocabulary sigma.
///   EmbeddingClosure: some generator embeds into the argument structure
///     (the smallest embedding-closed class containing the generators).
///   HomomorphismClosure: some generator has a homomorphism into it.
///   SubstructureClosedComplement: the complement class of `inner`
///     (downward closed when inner is upward closed).
///   CountAtLeast: |U| >= k for a single unary symbol U.
struct QuantifierDef {
    enum class Kind { EmbeddingClosure, HomomorphismClosure, SubstructureClosedComplement, CountAtLeast };

    std::string name;
    Vocabulary sigma;
    Kind kind = Kind::EmbeddingClosure;
    std::vector<Structure> generators;              // closure kinds
    std::shared_ptr<const QuantifierDef> inner;     // complement kind
    long long count_k = 0;                          // CountAtLeast

    static QuantifierDef embedding_closure(std::string name, std::vector<Structure> generators);
    static QuantifierDef homomorphism_closure(std::string name, std::vector<Structure> generators);
    static QuantifierDef substructure_complement(std::string name, QuantifierDef inner);
    static QuantifierDef count_at_least(std::string name, const std::string& unary_symbol, long long k);

    /// Upward closed under embeddings (complement kinds are not).
    bool embedding_closed() const { return kind != Kind::SubstructureClosedComplement; }

    void validate() const;
};

/// Is the sigma-structure in the quantifier's defining class?
bool quantifier_member(const QuantifierDef& q, const Structure& s);

class QuantifierRegistry {
  public:
    void add(QuantifierDef def);
    bool has(const std::string& name) const { return defs_.count(name) > 0; }
    const QuantifierDef& get(const std::string& name) const;
    const std::map<std::string, QuantifierDef>& all() const { return defs_; }

  private:
    std::map<std::string, QuantifierDef> defs_;
};

/// Registry JSON: one object or an array of objects like
///   {"name":"Qhas3","sigma":{"U":1},"kind":"embedding_closure","generators":["gen1.json"]}
/// kinds: embedding_closure | homomorphism_closure | count_at_least (+"k")
///      | substructure_complement (+"inner": nested object).
/// Generator entries are file paths (resolved relative to the registry file)
/// or inline structure objects.
QuantifierRegistry registry_from_json_file(const std::string& path);
QuantifierRegistry registry_from_json_text(const std::string& text, const std::string& base_dir,
                                           const std::string& origin = "<registry>");

} // namespace embq
