#pragma once

#include "embq/morphism.hpp"
#include "embq/structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embq {

/// Game position: matched tuples over the two boards.
struct Position {
    const Structure* left = nullptr;
    TupleAssignment left_tuple;
    const Structure* right = nullptr;
    TupleAssignment right_tuple;
};

/// One recorded round of the principal line.
struct GameRound {
    bool duplicator_stuck = false; // no embedding pair existed this round
    PartialMap f;                  // left -> right embedding chosen
    PartialMap g;                  // right -> left embedding chosen
    bool spoiler_left = true;      // which board Spoiler picked elements on
    TupleAssignment picked;        // Spoiler's elements on that board
    TupleAssignment images;        // their images under f (resp. g)
};

struct GameOutcome {
    bool survives = false;
    int rounds = 0;
    /// Principal line: both sides playing optimally. For a Spoiler win the
    /// line ends in a round with no embedding pair; for a Duplicator win it
    /// shows `rounds` completed rounds.
    std::vector<GameRound> witness;
};

struct GameLimits {
    long long max_positions = 2000000;
    long long max_embeddings_per_side = 200000;
};

/// Exact value of the n-round embedding game, by minimax with memoization
/// on the pin set. Spoiler's tuple moves are realized as nonempty element
/// subsets of a board: a tuple constrains future play only through the pin
/// map it induces, which depends only on the set of its entries.
GameOutcome duplicator_survives(const Position& p, int rounds, const GameLimits& limits = {});

/// Replays a recorded witness through the move rules; true iff every move
/// is legal and the terminal state matches the claimed outcome.
bool replay_witness(const Position& p, const GameOutcome& outcome);

struct DistinguishResult {
    std::optional<int> round; // least n at which Spoiler wins
    bool cap_hit = false;
};

DistinguishResult min_distinguishing_round(const Structure& a, const Structure& b, int cap,
                                           const GameLimits& limits = {});

} // namespace embq
