#pragma once

#include "embq/game.hpp"
#include "embq/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace embq {

/// A finite natural number, aleph0 or aleph1, with the arithmetic the
/// symbolic game needs: total order finite < aleph0 < aleph1, addition is
/// max once anything infinite is involved, and subtracting a finite amount
/// from an infinite cardinal changes nothing.
struct SymCard {
    enum class Kind { Finite, Aleph0, Aleph1 };
    Kind kind = Kind::Finite;
    uint64_t value = 0;

    static SymCard finite(uint64_t v) { return {Kind::Finite, v}; }
    static SymCard aleph0() { return {Kind::Aleph0, 0}; }
    static SymCard aleph1() { return {Kind::Aleph1, 0}; }

    bool infinite() const { return kind != Kind::Finite; }
    bool is_zero() const { return kind == Kind::Finite && value == 0; }

    friend bool operator==(const SymCard& a, const SymCard& b) {
        return a.kind == b.kind && (a.kind != Kind::Finite || a.value == b.value);
    }
    friend bool operator<(const SymCard& a, const SymCard& b) {
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        return a.kind == Kind::Finite && a.value < b.value;
    }
    friend bool operator<=(const SymCard& a, const SymCard& b) { return a < b || a == b; }

    SymCard plus(const SymCard& o) const;
    /// this - k for finite k; infinite cardinals absorb the subtraction.
    SymCard minus_finite(uint64_t k) const;

    std::string to_string() const;
    static SymCard parse(const std::string& text);
};

/// Equivalence structure given symbolically: for each class size, how many
/// classes of that size exist; plus optional named pinned elements living
/// in explicitly materialized ("touched") classes. Vocabulary is {E:2}.
struct SymEqStructure {
    /// size -> class count; sizes distinct (equal sizes merge on build).
    std::vector<std::pair<SymCard, SymCard>> profile;

    struct TouchedClass {
        SymCard size;
        int pin_count = 0; // distinct pinned elements in this class
    };
    std::vector<TouchedClass> touched;

    struct Pin {
        std::string id;
        int cls = 0; // index into touched
    };
    std::vector<Pin> pins; // distinct elements, ids unique

    static SymEqStructure from_profile(std::vector<std::pair<SymCard, SymCard>> entries);
    void validate() const;
    SymCard count_of_size(const SymCard& s) const;
    /// Remaining untouched classes of the given size.
    SymCard untouched_count(const SymCard& s) const;
    int pin_class(const std::string& pin_id) const;

    /// Adds a pinned element in a new class of the given size (consuming an
    /// untouched class); returns the pin's class index.
    int touch_class(const SymCard& size, const std::string& pin_id);
    /// Adds a pinned element in an existing touched class.
    void pin_in_class(int cls, const std::string& pin_id);

    /// Finite materialization; requires every size and count finite.
    Structure materialize() const;
};

/// Profile grammar: comma-separated "(size x count)" with size/count in
/// natural | aleph0 | aleph1, e.g. "(aleph1 x aleph0),(aleph0 x 1)".
SymEqStructure parse_profile(const std::string& text);
std::string profile_to_string(const SymEqStructure& e);

/// Does an embedding respecting the pin map exist? Decided by per-class
/// residual capacity on classes forced by pins plus the threshold condition
/// on the remaining classes: for every size s, the number of unforced
/// source classes of size >= s must not exceed the unforced target classes
/// of size >= s.
bool sym_embedding_exists(const SymEqStructure& e, const SymEqStructure& f,
                          const std::vector<std::pair<std::string, std::string>>& pin_map);

struct SymGameMove {
    bool spoiler_left = true;
    enum class Kind { FreshInTouchedPair, FreshUntouched } kind = Kind::FreshUntouched;
    int pair_index = -1;        // FreshInTouchedPair
    SymCard class_size;         // FreshUntouched: class picked on the moving board
    SymCard image_class_size;   // FreshUntouched: class its image lands in
};

struct SymGameOutcome {
    bool survives = false;
    int rounds = 0;
    std::vector<SymGameMove> witness; // principal line; losing lines end where no embedding pair exists
    std::string blocked_direction;    // "left-to-right" / "right-to-left" when Spoiler wins
};

struct SymGameLimits {
    int max_rounds = 4;
    long long max_states = 200000;
};

/// Mid-game position: the paired touched classes (left size, right size,
/// shared pin count) on top of the two pinless profiles.
struct SymPosition {
    SymEqStructure left;
    SymEqStructure right;
    std::vector<std::tuple<SymCard, SymCard, uint64_t>> pairs;
};

/// Do embeddings in the given direction exist from this position?
bool sym_position_feasible(const SymPosition& pos, bool left_to_right);

/// n-round embedding game on two symbolic equivalence structures. Spoiler's
/// element choices are abstracted to class descriptors (a fresh element in
/// a touched class, or a fresh element in an untouched class of a given
/// size); Duplicator's embeddings to class-assignment schemas. Completeness
/// of this abstraction for the pure equivalence vocabulary is validated
/// against finite materializations, not proven.
SymGameOutcome sym_game(const SymEqStructure& left, const SymEqStructure& right, int rounds,
                        const SymGameLimits& limits = {});

/// Game value from a mid-game position.
SymGameOutcome sym_game_from(const SymPosition& pos, int rounds, const SymGameLimits& limits = {});

} // namespace embq
