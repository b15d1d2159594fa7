#pragma once

#include "embq/game.hpp"
#include "embq/symgame.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace embq {

struct PlaySetup {
    bool human_is_spoiler = true;
    int rounds = 3;
    GameLimits limits;
};

struct PlayResult {
    bool duplicator_survived = false;
    int rounds_played = 0;
    std::vector<std::string> human_moves; // raw accepted input lines, replayable
};

/// Terminal loop for the finite embedding game. The engine plays optimally
/// from the memoized game table; invalid human moves re-prompt. Moves are
/// read from `in` (stdin or a saved transcript) and all prompts go to `out`.
PlayResult play_interactive(const Structure& left, const Structure& right, const PlaySetup& setup,
                            std::istream& in, std::ostream& out);

/// Same loop on symbolic equivalence structures.
PlayResult play_interactive_symbolic(const SymEqStructure& left, const SymEqStructure& right,
                                     const PlaySetup& setup, std::istream& in, std::ostream& out,
                                     const SymGameLimits& limits = {});

std::string transcript_to_json(const PlayResult& result, const PlaySetup& setup);
/// Extracts the recorded human moves; used by --replay.
std::vector<std::string> transcript_moves_from_json(const std::string& text);

} // namespace embq
