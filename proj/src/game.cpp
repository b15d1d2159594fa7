#include "embq/game.hpp"

#include "embq/errors.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace embq {

namespace {

using PinSet = std::set<std::pair<int, int>>; // (left index, right index)

std::string pin_key(const PinSet& pins, int n) {
    std::ostringstream out;
    out << n << '#';
    for (const auto& [a, b] : pins) out << a << ':' << b << ',';
    return out.str();
}

class GameSolver {
  public:
    GameSolver(const Structure& left, const Structure& right, const GameLimits& limits)
        : a_(left), b_(right), limits_(limits) {
        if (a_.vocab() != b_.vocab()) throw UsageError("game: vocabulary mismatch");
    }

    bool survives(const PinSet& pins, int n) {
        if (n == 0) return true;
        std::string key = pin_key(pins, n);
        auto hit = memo_.find(key);
        if (hit != memo_.end()) return hit->second;
        if (static_cast<long long>(memo_.size()) > limits_.max_positions)
            throw CapError("game: position cap exceeded");
        // Duplicator needs one embedding per direction; Spoiler's reply
        // routes through exactly one of them, so the two directions
        // decouple.
        bool value = good_side(pins, n, true) && good_side(pins, n, false);
        memo_.emplace(std::move(key), value);
        return value;
    }

    // All embeddings extending the pins, in deterministic search order.
    std::vector<PartialMap> side_embeddings(const PinSet& pins, bool left_to_right) {
        const Structure& src = left_to_right ? a_ : b_;
        const Structure& dst = left_to_right ? b_ : a_;
        MorphismQuery q = MorphismQuery::embedding(src, dst);
        for (const auto& [la, rb] : pins) {
            if (left_to_right)
                q.pins.push_back({a_.id_of(la), b_.id_of(rb)});
            else
                q.pins.push_back({b_.id_of(rb), a_.id_of(la)});
        }
        q.limit = limits_.max_embeddings_per_side + 1;
        auto maps = enumerate_morphisms(q);
        if (static_cast<long long>(maps.size()) > limits_.max_embeddings_per_side)
            throw CapError("game: embedding enumeration cap exceeded");
        return maps;
    }

    // Child position after Spoiler picks element set `mask` on the given
    // board, with the chosen embedding supplying the images.
    PinSet child_pins(const PinSet& pins, const PartialMap& map, bool left_board,
                      unsigned long long mask) {
        PinSet next = pins;
        const Structure& board = left_board ? a_ : b_;
        const Structure& other = left_board ? b_ : a_;
        for (int e = 0; e < board.size(); ++e) {
            if (!(mask & (1ULL << e))) continue;
            int img = other.index_of(map[e].second);
            if (left_board)
                next.insert({e, img});
            else
                next.insert({img, e});
        }
        return next;
    }

    // Survival is antitone in the pin set: a Duplicator strategy for a
    // superset of pins works verbatim for a subset. Hence Spoiler's
    // strongest move through a fixed embedding pins the whole board, and
    // one child per embedding decides the side.
    bool good_side(const PinSet& pins, int n, bool left_to_right) {
        auto maps = side_embeddings(pins, left_to_right);
        if (maps.empty()) return false;
        const int board_size = left_to_right ? a_.size() : b_.size();
        if (board_size == 0) return true; // no move exists on this board
        const unsigned long long full = (1ULL << board_size) - 1;
        for (const auto& f : maps) {
            if (survives(child_pins(pins, f, left_to_right, full), n - 1)) return true;
        }
        return false;
    }

    const Structure& a_;
    const Structure& b_;
    GameLimits limits_;
    std::unordered_map<std::string, bool> memo_;
};

TupleAssignment mask_elements(const Structure& board, unsigned long long mask) {
    TupleAssignment out;
    for (int e = 0; e < board.size(); ++e)
        if (mask & (1ULL << e)) out.push_back(board.id_of(e));
    return out;
}

TupleAssignment mask_images(const PartialMap& map, const Structure& board, unsigned long long mask) {
    TupleAssignment out;
    for (int e = 0; e < board.size(); ++e)
        if (mask & (1ULL << e)) out.push_back(map[e].second);
    return out;
}

} // namespace

GameOutcome duplicator_survives(const Position& p, int rounds, const GameLimits& limits) {
    if (!p.left || !p.right) throw UsageError("game: missing structures");
    if (rounds < 0) throw UsageError("game: rounds must be >= 0");
    if (p.left_tuple.size() != p.right_tuple.size())
        throw UsageError("game: position tuples must have equal length");

    GameSolver solver(*p.left, *p.right, limits);
    PinSet pins;
    for (size_t i = 0; i < p.left_tuple.size(); ++i)
        pins.insert({p.left->index_of(p.left_tuple[i]), p.right->index_of(p.right_tuple[i])});

    GameOutcome outcome;
    outcome.rounds = rounds;
    outcome.survives = solver.survives(pins, rounds);

    // Principal line, derived from the memo table.
    PinSet cur = pins;
    for (int n = rounds; n > 0;) {
        auto fs = solver.side_embeddings(cur, true);
        auto gs = solver.side_embeddings(cur, false);
        if (fs.empty() || gs.empty()) {
            GameRound r;
            r.duplicator_stuck = true;
            outcome.witness.push_back(std::move(r));
            break;
        }
        auto pick_good = [&](const std::vector<PartialMap>& maps, bool left) -> const PartialMap* {
            const int board_size = left ? p.left->size() : p.right->size();
            if (board_size == 0) return maps.empty() ? nullptr : &maps.front();
            const unsigned long long full = (1ULL << board_size) - 1;
            for (const auto& m : maps) {
                if (solver.survives(solver.child_pins(cur, m, left, full), n - 1)) return &m;
            }
            return nullptr;
        };
        const PartialMap* good_f = pick_good(fs, true);
        const PartialMap* good_g = pick_good(gs, false);

        GameRound r;
        r.f = good_f ? *good_f : fs.front();
        r.g = good_g ? *good_g : gs.front();
        bool done = false;
        if (good_f && good_g) {
            // Duplicator holds; Spoiler plays the first available element.
            if (p.left->size() > 0) {
                r.spoiler_left = true;
                r.picked = mask_elements(*p.left, 1);
                r.images = mask_images(r.f, *p.left, 1);
                cur = solver.child_pins(cur, r.f, true, 1);
            } else if (p.right->size() > 0) {
                r.spoiler_left = false;
                r.picked = mask_elements(*p.right, 1);
                r.images = mask_images(r.g, *p.right, 1);
                cur = solver.child_pins(cur, r.g, false, 1);
            }
        } else {
            // Spoiler refutes the weaker side of the chosen pair by pinning
            // the whole board (the strongest move, by antitonicity).
            bool left = good_f == nullptr;
            const PartialMap& m = left ? r.f : r.g;
            const Structure& board = left ? *p.left : *p.right;
            const unsigned long long full = board.size() > 0 ? (1ULL << board.size()) - 1 : 0;
            r.spoiler_left = left;
            r.picked = mask_elements(board, full);
            r.images = mask_images(m, board, full);
            cur = solver.child_pins(cur, m, left, full);
            done = full == 0; // defensive; a losing side has a nonempty board
        }
        outcome.witness.push_back(std::move(r));
        --n;
        if (done) break;
    }
    return outcome;
}

bool replay_witness(const Position& p, const GameOutcome& outcome) {
    PinSet pins;
    for (size_t i = 0; i < p.left_tuple.size(); ++i)
        pins.insert({p.left->index_of(p.left_tuple[i]), p.right->index_of(p.right_tuple[i])});

    auto extends_pins = [&](const PartialMap& m, bool left_to_right) {
        for (const auto& [la, rb] : pins) {
            const std::string& src = left_to_right ? p.left->id_of(la) : p.right->id_of(rb);
            const std::string& dst = left_to_right ? p.right->id_of(rb) : p.left->id_of(la);
            bool found = false;
            for (const auto& [s, d] : m)
                if (s == src) { found = d == dst; break; }
            if (!found) return false;
        }
        return true;
    };

    int played = 0;
    bool stuck = false;
    for (const auto& r : outcome.witness) {
        if (r.duplicator_stuck) {
            // Verify: no embedding pair exists here.
            GameSolver solver(*p.left, *p.right, GameLimits{});
            bool f_exists = !solver.side_embeddings(pins, true).empty();
            bool g_exists = !solver.side_embeddings(pins, false).empty();
            if (f_exists && g_exists) return false;
            stuck = true;
            ++played;
            break;
        }
        if (!check_embedding(*p.left, *p.right, r.f) || !extends_pins(r.f, true)) return false;
        if (!check_embedding(*p.right, *p.left, r.g) || !extends_pins(r.g, false)) return false;
        if (r.picked.size() != r.images.size()) return false;
        const PartialMap& m = r.spoiler_left ? r.f : r.g;
        for (size_t i = 0; i < r.picked.size(); ++i) {
            bool found = false;
            for (const auto& [s, d] : m)
                if (s == r.picked[i]) { found = d == r.images[i]; break; }
            if (!found) return false;
            int la = r.spoiler_left ? p.left->index_of(r.picked[i]) : p.left->index_of(r.images[i]);
            int rb = r.spoiler_left ? p.right->index_of(r.images[i]) : p.right->index_of(r.picked[i]);
            pins.insert({la, rb});
        }
        ++played;
    }
    if (outcome.survives) return !stuck && played == outcome.rounds;
    return stuck && played <= outcome.rounds;
}

DistinguishResult min_distinguishing_round(const Structure& a, const Structure& b, int cap,
                                           const GameLimits& limits) {
    for (int n = 1; n <= cap; ++n) {
        Position p{&a, {}, &b, {}};
        if (!duplicator_survives(p, n, limits).survives) return {n, false};
    }
    return {std::nullopt, true};
}

} // namespace embq
