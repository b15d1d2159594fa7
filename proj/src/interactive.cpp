#include "embq/interactive.hpp"

#include "embq/errors.hpp"

#include <iostream>
#include <sstream>

#include <json.hpp>

namespace embq {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// Reads the next nonempty line; empty optional on EOF.
std::optional<std::string> next_line(std::istream& in, std::ostream& out, const std::string& prompt) {
    std::string line;
    while (true) {
        out << prompt << std::flush;
        if (!std::getline(in, line)) return std::nullopt;
        if (!split_ws(line).empty()) return line;
    }
}

PartialMap parse_map_line(const std::string& text) {
    // "a->x,b->y"
    PartialMap map;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t arrow = item.find("->");
        if (arrow == std::string::npos) throw UsageError("expected 'src->dst' pairs");
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t");
            size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        map.push_back({trim(item.substr(0, arrow)), trim(item.substr(arrow + 2))});
    }
    return map;
}

std::string map_to_string(const PartialMap& m) {
    std::string out;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) out += ",";
        out += m[i].first + "->" + m[i].second;
    }
    return out.empty() ? "(empty)" : out;
}

bool extends_pins(const PartialMap& m, const std::vector<std::pair<std::string, std::string>>& pins) {
    for (const auto& [src, dst] : pins) {
        bool ok = false;
        for (const auto& [s, d] : m)
            if (s == src) { ok = d == dst; break; }
        if (!ok) return false;
    }
    return true;
}

} // namespace

PlayResult play_interactive(const Structure& left, const Structure& right, const PlaySetup& setup,
                            std::istream& in, std::ostream& out) {
    PlayResult result;
    std::vector<std::pair<std::string, std::string>> pins; // (left id, right id)

    auto position = [&]() {
        Position p{&left, {}, &right, {}};
        for (const auto& [a, b] : pins) {
            p.left_tuple.push_back(a);
            p.right_tuple.push_back(b);
        }
        return p;
    };

    out << "embedding game: " << setup.rounds << " rounds, you play "
        << (setup.human_is_spoiler ? "Spoiler" : "Duplicator") << "\n";

    for (int n = setup.rounds; n > 0; --n) {
        const int round_no = setup.rounds - n + 1;
        GameOutcome value = duplicator_survives(position(), n, setup.limits);
        if (setup.human_is_spoiler) {
            if (value.witness.empty() || value.witness.front().duplicator_stuck) {
                out << "round " << round_no << ": engine (Duplicator) concedes: no embedding pair exists\n";
                result.duplicator_survived = false;
                result.rounds_played = round_no;
                return result;
            }
            const GameRound& engine = value.witness.front();
            out << "round " << round_no << ": Duplicator plays\n  f: " << map_to_string(engine.f)
                << "\n  g: " << map_to_string(engine.g) << "\n";
            while (true) {
                auto line = next_line(in, out, "spoiler> ");
                if (!line) {
                    result.duplicator_survived = true;
                    result.rounds_played = round_no - 1;
                    return result;
                }
                auto toks = split_ws(*line);
                if (toks[0] != "l" && toks[0] != "r") {
                    out << "invalid move: use 'l <elem> [<elem>...]' or 'r <elem> ...'\n";
                    continue;
                }
                const bool on_left = toks[0] == "l";
                const Structure& board = on_left ? left : right;
                const PartialMap& via = on_left ? engine.f : engine.g;
                std::vector<std::string> picked(toks.begin() + 1, toks.end());
                bool ok = !picked.empty();
                for (const auto& id : picked)
                    if (!board.try_index_of(id)) ok = false;
                if (!ok) {
                    out << "invalid move: pick at least one element of the "
                        << (on_left ? "left" : "right") << " universe\n";
                    continue;
                }
                for (const auto& id : picked) {
                    std::string img;
                    for (const auto& [s, d] : via)
                        if (s == id) img = d;
                    out << "  " << id << " |-> " << img << "\n";
                    if (on_left)
                        pins.push_back({id, img});
                    else
                        pins.push_back({img, id});
                }
                result.human_moves.push_back(*line);
                break;
            }
        } else {
            // Human is Duplicator: collect f then g, validated.
            PartialMap f, g;
            bool conceded = false;
            for (int which = 0; which < 2 && !conceded; ++which) {
                const bool is_f = which == 0;
                while (true) {
                    auto line = next_line(in, out, is_f ? "duplicator f (left->right)> "
                                                        : "duplicator g (right->left)> ");
                    if (!line || *line == "concede") {
                        conceded = true;
                        break;
                    }
                    try {
                        PartialMap m = parse_map_line(*line);
                        const Structure& src = is_f ? left : right;
                        const Structure& dst = is_f ? right : left;
                        std::vector<std::pair<std::string, std::string>> need = pins;
                        if (!is_f)
                            for (auto& [a, b] : need) std::swap(a, b);
                        if (!check_embedding(src, dst, m) || !extends_pins(m, need)) {
                            out << "not an embedding extending the pins; try again\n";
                            continue;
                        }
                        (is_f ? f : g) = m;
                        result.human_moves.push_back(*line);
                        break;
                    } catch (const UsageError& e) {
                        out << "invalid input: " << e.what() << "; try again\n";
                    }
                }
            }
            if (conceded) {
                out << "round " << round_no << ": Duplicator concedes\n";
                result.duplicator_survived = false;
                result.rounds_played = round_no;
                return result;
            }
            // Engine Spoiler: pick a refuting element set if one exists.
            bool played = false;
            for (int side = 0; side < 2 && !played; ++side) {
                const bool on_left = side == 0;
                const Structure& board = on_left ? left : right;
                const PartialMap& via = on_left ? f : g;
                for (unsigned long long mask = 1; mask < (1ULL << board.size()) && !played; ++mask) {
                    auto next = pins;
                    for (int e = 0; e < board.size(); ++e) {
                        if (!(mask & (1ULL << e))) continue;
                        std::string img;
                        for (const auto& [s, d] : via)
                            if (s == board.id_of(e)) img = d;
                        if (on_left)
                            next.push_back({board.id_of(e), img});
                        else
                            next.push_back({img, board.id_of(e)});
                    }
                    Position child{&left, {}, &right, {}};
                    for (const auto& [a, b] : next) {
                        child.left_tuple.push_back(a);
                        child.right_tuple.push_back(b);
                    }
                    if (!duplicator_survives(child, n - 1, setup.limits).survives) {
                        out << "round " << round_no << ": Spoiler picks "
                            << (on_left ? "left" : "right") << " elements:";
                        for (int e = 0; e < board.size(); ++e)
                            if (mask & (1ULL << e)) out << " " << board.id_of(e);
                        out << "\n";
                        pins = next;
                        played = true;
                    }
                }
            }
            if (!played) {
                // No refutation: keep the game moving with the first element.
                const Structure& board = left.size() > 0 ? left : right;
                const bool on_left = left.size() > 0;
                if (board.size() > 0) {
                    const PartialMap& via = on_left ? f : g;
                    std::string id = board.id_of(0);
                    std::string img;
                    for (const auto& [s, d] : via)
                        if (s == id) img = d;
                    out << "round " << round_no << ": Spoiler picks " << (on_left ? "left" : "right")
                        << " element: " << id << "\n";
                    if (on_left)
                        pins.push_back({id, img});
                    else
                        pins.push_back({img, id});
                }
            }
        }
    }
    out << "game over: Duplicator survived " << setup.rounds << " rounds\n";
    result.duplicator_survived = true;
    result.rounds_played = setup.rounds;
    return result;
}

PlayResult play_interactive_symbolic(const SymEqStructure& left, const SymEqStructure& right,
                                     const PlaySetup& setup, std::istream& in, std::ostream& out,
                                     const SymGameLimits& limits) {
    PlayResult result;
    SymPosition pos{left, right, {}};

    out << "symbolic embedding game: " << setup.rounds << " rounds, you play "
        << (setup.human_is_spoiler ? "Spoiler" : "Duplicator") << "\n";
    out << "left profile:  " << profile_to_string(left) << "\n";
    out << "right profile: " << profile_to_string(right) << "\n";

    for (int n = setup.rounds; n > 0; --n) {
        const int round_no = setup.rounds - n + 1;
        if (!sym_position_feasible(pos, true) || !sym_position_feasible(pos, false)) {
            std::string dir = !sym_position_feasible(pos, true) ? "left-to-right" : "right-to-left";
            out << "round " << round_no << ": engine (Duplicator) concedes: no " << dir
                << " embedding extends the pins\n";
            result.duplicator_survived = false;
            result.rounds_played = round_no;
            return result;
        }
        if (setup.human_is_spoiler) {
            out << "round " << round_no << ": Duplicator commits to mutual embeddings\n";
            while (true) {
                auto line = next_line(in, out,
                                      "spoiler (pair <i> | l <size> <image-size> | r <size> <image-size>)> ");
                if (!line) {
                    result.duplicator_survived = true;
                    result.rounds_played = round_no - 1;
                    return result;
                }
                auto toks = split_ws(*line);
                try {
                    if (toks[0] == "pair" && toks.size() == 2) {
                        size_t i = std::stoul(toks[1]);
                        if (i >= pos.pairs.size()) throw UsageError("no such pair");
                        auto& [l, r, pc] = pos.pairs[i];
                        if (!(SymCard::finite(pc) < l)) throw UsageError("class fully pinned");
                        ++pc;
                    } else if ((toks[0] == "l" || toks[0] == "r") && toks.size() == 3) {
                        SymCard s = SymCard::parse(toks[1]); // picked class size
                        SymCard t = SymCard::parse(toks[2]); // image class size
                        if (t < s) throw UsageError("image class must be at least as large");
                        const bool on_left = toks[0] == "l";
                        SymCard l_size = on_left ? s : t;
                        SymCard r_size = on_left ? t : s;
                        SymPosition child = pos;
                        child.pairs.push_back({l_size, r_size, 1});
                        // Validity of the consumption is checked inside.
                        sym_game_from(child, 0, limits);
                        pos = child;
                    } else {
                        throw UsageError("unrecognized move");
                    }
                    result.human_moves.push_back(*line);
                    break;
                } catch (const UsageError& e) {
                    out << "invalid move: " << e.what() << "; try again\n";
                }
            }
        } else {
            // Engine Spoiler from the solved game.
            SymGameOutcome value = sym_game_from(pos, n, limits);
            if (value.witness.empty()) {
                out << "round " << round_no << ": Spoiler has no progressive move; position repeats\n";
                continue;
            }
            const SymGameMove& mv = value.witness.front();
            if (mv.kind == SymGameMove::Kind::FreshInTouchedPair) {
                out << "round " << round_no << ": Spoiler pins a fresh element in pair "
                    << mv.pair_index << "\n";
                ++std::get<2>(pos.pairs[mv.pair_index]);
            } else {
                out << "round " << round_no << ": Spoiler pins a fresh element in an untouched "
                    << (mv.spoiler_left ? "left" : "right") << " class of size "
                    << mv.class_size.to_string() << " (image class size "
                    << mv.image_class_size.to_string() << ")\n";
                SymCard l_size = mv.spoiler_left ? mv.class_size : mv.image_class_size;
                SymCard r_size = mv.spoiler_left ? mv.image_class_size : mv.class_size;
                pos.pairs.push_back({l_size, r_size, 1});
            }
            // Human Duplicator is only consulted implicitly: the abstraction
            // already quantifies over all embedding schemas.
            result.human_moves.push_back("(engine move)");
        }
    }
    out << "game over: Duplicator survived " << setup.rounds << " rounds\n";
    result.duplicator_survived = true;
    result.rounds_played = setup.rounds;
    return result;
}

std::string transcript_to_json(const PlayResult& result, const PlaySetup& setup) {
    nlohmann::json j;
    j["rounds"] = setup.rounds;
    j["human_is_spoiler"] = setup.human_is_spoiler;
    j["duplicator_survived"] = result.duplicator_survived;
    j["rounds_played"] = result.rounds_played;
    j["moves"] = result.human_moves;
    return j.dump(2);
}

std::vector<std::string> transcript_moves_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("transcript: ") + e.what());
    }
    std::vector<std::string> moves;
    for (const auto& m : j.value("moves", nlohmann::json::array())) moves.push_back(m.get<std::string>());
    return moves;
}

} // namespace embq
