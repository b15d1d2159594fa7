#include "embq/cli.hpp"

#include "embq/catalog.hpp"
#include "embq/chain.hpp"
#include "embq/errors.hpp"
#include "embq/evaluate.hpp"
#include "embq/game.hpp"
#include "embq/interactive.hpp"
#include "embq/morphism.hpp"
#include "embq/parser.hpp"
#include "embq/qelim.hpp"
#include "embq/symgame.hpp"
#include "embq/zeroone.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace embq {

namespace {

using nlohmann::json;

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

struct RunConfig {
    std::string format = "json";
    int cap_size = 0;       // 0: library defaults
    long long cap_enum = 0; // 0: library defaults
    uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
};

uint64_t env_or(const char* name, uint64_t fallback, bool* found = nullptr) {
    const char* v = std::getenv(name);
    if (found) *found = v != nullptr;
    if (!v) return fallback;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw UsageError(std::string(name) + ": not an integer");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Vocabulary vocab_from_json_file(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
    if (j.contains("vocabulary")) j = j["vocabulary"];
    std::map<std::string, int> rels;
    for (const auto& [name, ar] : j.items()) {
        if (!ar.is_number_integer()) throw UsageError(path + ": arities must be integers");
        rels[name] = ar.get<int>();
    }
    return Vocabulary(std::move(rels));
}

PartialMap parse_pin_option(const std::string& text) {
    // "x=y,a=b"
    PartialMap pins;
    if (text.empty()) return pins;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("--pin expects 'src=dst' pairs");
        pins.push_back({item.substr(0, eq), item.substr(eq + 1)});
    }
    return pins;
}

json map_to_json(const PartialMap& m) {
    json obj = json::object();
    for (const auto& [src, dst] : m) obj[src] = dst;
    return json{{"map", obj}};
}

json type_to_json(const AtomicType& t) {
    json eq_classes = json::array();
    for (int c = 0; c < t.num_classes(); ++c) {
        json cls = json::array();
        for (int i = 0; i < t.arity; ++i)
            if (t.eq[i] == c) cls.push_back(i + 1); // 1-based positions
        eq_classes.push_back(cls);
    }
    json facts = json::array();
    for (const auto& [rel, tup] : t.facts) {
        json positions = json::array();
        for (int c : tup) {
            // representative position of the class, 1-based
            for (int i = 0; i < t.arity; ++i)
                if (t.eq[i] == c) { positions.push_back(i + 1); break; }
        }
        facts.push_back(json{{"relation", rel}, {"positions", positions}});
    }
    return json{{"arity", t.arity}, {"eq_classes", eq_classes}, {"facts", facts}};
}

json disjunction_to_json(const TypeDisjunction& d) {
    json types = json::array();
    for (const auto& t : d.types) types.push_back(type_to_json(t));
    return json{{"variables", d.vars}, {"types", types}, {"formula", print_formula(d.to_formula())}};
}

void emit(std::ostream& out, const RunConfig& cfg, const json& j, const std::string& text_form) {
    if (cfg.format == "json")
        out << j.dump(2) << "\n";
    else
        out << text_form << "\n";
}

json game_witness_json(const GameOutcome& outcome) {
    json rounds = json::array();
    for (const auto& r : outcome.witness) {
        if (r.duplicator_stuck) {
            rounds.push_back(json{{"duplicator_stuck", true}});
            continue;
        }
        json jr;
        jr["f"] = map_to_json(r.f)["map"];
        jr["g"] = map_to_json(r.g)["map"];
        jr["spoiler_side"] = r.spoiler_left ? "left" : "right";
        jr["picked"] = r.picked;
        jr["images"] = r.images;
        rounds.push_back(jr);
    }
    return rounds;
}

json sym_witness_json(const SymGameOutcome& outcome) {
    json moves = json::array();
    for (const auto& m : outcome.witness) {
        json jm;
        jm["side"] = m.spoiler_left ? "left" : "right";
        if (m.kind == SymGameMove::Kind::FreshInTouchedPair) {
            jm["move"] = "fresh-in-touched-pair";
            jm["pair"] = m.pair_index;
        } else {
            jm["move"] = "fresh-untouched";
            jm["class_size"] = m.class_size.to_string();
            jm["image_class_size"] = m.image_class_size.to_string();
        }
        moves.push_back(jm);
    }
    json j{{"moves", moves}};
    if (!outcome.blocked_direction.empty()) j["blocked"] = outcome.blocked_direction;
    return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
    CLI::App app{"embq: embedding-closed quantifier toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    bool env_seed_found = false;
    cfg.seed = env_or("EMBQ_SEED", 0, &env_seed_found);
    cfg.seed_set = env_seed_found;
    cfg.cap_size = static_cast<int>(env_or("EMBQ_CAP_SIZE", 0));
    app.add_option("--format", cfg.format, "json|text")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cap-size", cfg.cap_size, "structure size cap for canonicalization/homogeneity");
    app.add_option("--cap-enum", cfg.cap_enum, "enumeration cap");

    // embed
    auto* embed = app.add_subcommand("embed", "search for a morphism between two structures");
    std::string embed_from, embed_to, embed_kind = "embedding", embed_pin;
    long long embed_enumerate = 0;
    embed->add_option("--from", embed_from)->required();
    embed->add_option("--to", embed_to)->required();
    embed->add_option("--kind", embed_kind)->check(CLI::IsMember({"embedding", "hom", "iso"}));
    embed->add_option("--pin", embed_pin, "comma separated src=dst pairs");
    embed->add_option("--enumerate", embed_enumerate, "list up to N morphisms");

    // check
    auto* check = app.add_subcommand("check", "model-check a sentence on a structure");
    std::string check_structure, check_formula, check_quantifiers;
    check->add_option("--structure", check_structure)->required();
    check->add_option("--formula", check_formula)->required();
    check->add_option("--quantifiers", check_quantifiers);

    // qe
    auto* qe = app.add_subcommand("qe", "quantifier elimination on a quasi-homogeneous structure");
    std::string qe_structure, qe_formula, qe_quantifiers;
    qe->add_option("--structure", qe_structure)->required();
    qe->add_option("--formula", qe_formula)->required();
    qe->add_option("--quantifiers", qe_quantifiers);

    // homog
    auto* homog = app.add_subcommand("homog", "quasi-homogeneity check");
    std::string homog_structure;
    homog->add_option("--structure", homog_structure)->required();

    // chain
    auto* chain_cmd = app.add_subcommand("chain", "realized-type chain report");
    std::vector<std::string> chain_files;
    std::string chain_formula, chain_quantifiers;
    chain_cmd->add_option("--structures", chain_files)->required()->expected(-1);
    chain_cmd->add_option("--formula", chain_formula)->required();
    chain_cmd->add_option("--quantifiers", chain_quantifiers);

    // game (+ play)
    auto* game = app.add_subcommand("game", "embedding game solver");
    std::string game_left, game_right, game_left_profile, game_right_profile;
    int game_rounds = 1;
    bool game_symbolic = false, game_witness = false;
    game->add_option("--left", game_left);
    game->add_option("--right", game_right);
    game->add_option("--rounds", game_rounds)->required();
    game->add_flag("--symbolic", game_symbolic);
    game->add_option("--left-profile", game_left_profile);
    game->add_option("--right-profile", game_right_profile);
    game->add_flag("--witness", game_witness);

    auto* play = game->add_subcommand("play", "interactive play against the engine");
    std::string play_as = "spoiler", play_save, play_replay;
    play->add_option("--as", play_as)->check(CLI::IsMember({"spoiler", "duplicator"}));
    play->add_option("--save-transcript", play_save);
    play->add_option("--replay", play_replay);

    // zeroone
    auto* zeroone = app.add_subcommand("zeroone", "asymptotic probability estimation");
    std::string zo_vocab, zo_formula, zo_sizes = "10,20,40", zo_quantifiers;
    int zo_samples = 400;
    double zo_p = 0.5;
    uint64_t zo_seed = cfg.seed;
    int zo_jobs = 1;
    zeroone->add_option("--vocab", zo_vocab)->required();
    zeroone->add_option("--formula", zo_formula)->required();
    zeroone->add_option("--sizes", zo_sizes);
    zeroone->add_option("--samples", zo_samples);
    zeroone->add_option("--seed", zo_seed);
    zeroone->add_option("--jobs", zo_jobs);
    zeroone->add_option("--p", zo_p);
    zeroone->add_option("--quantifiers", zo_quantifiers);

    // catalog gen
    auto* catalog = app.add_subcommand("catalog", "stock structures");
    auto* gen = catalog->add_subcommand("gen", "generate a catalog structure");
    std::string gen_name, gen_params, gen_out;
    gen->add_option("--name", gen_name)->required();
    gen->add_option("--params", gen_params, "semicolon separated key=value");
    gen->add_option("-o,--out", gen_out);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help() << std::flush;
            return kExitPositive;
        }
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    auto load_registry = [&](const std::string& path) -> QuantifierRegistry {
        if (path.empty()) return QuantifierRegistry{};
        return registry_from_json_file(path);
    };

    if (*embed) {
        Structure a = structure_from_json_file(embed_from);
        Structure b = structure_from_json_file(embed_to);
        MorphismQuery q;
        q.kind = embed_kind == "hom" ? MorphKind::Homomorphism
                                     : embed_kind == "iso" ? MorphKind::Isomorphism
                                                           : MorphKind::Embedding;
        q.source = &a;
        q.target = &b;
        q.pins = parse_pin_option(embed_pin);
        if (embed_enumerate > 0) {
            q.limit = embed_enumerate;
            auto maps = enumerate_morphisms(q);
            json arr = json::array();
            for (const auto& m : maps) arr.push_back(map_to_json(m));
            emit(out, cfg, json{{"count", maps.size()}, {"morphisms", arr}},
                 "found " + std::to_string(maps.size()) + " morphisms");
            return maps.empty() ? kExitNegative : kExitPositive;
        }
        auto m = find_morphism(q);
        if (!m) {
            emit(out, cfg, json{{"found", false}}, "no morphism");
            return kExitNegative;
        }
        emit(out, cfg, map_to_json(*m), "found");
        return kExitPositive;
    }

    if (*check) {
        Structure a = structure_from_json_file(check_structure);
        QuantifierRegistry reg = load_registry(check_quantifiers);
        FormulaPtr f = parse_formula(check_formula, a.vocab(), &reg);
        if (!free_variables(f).empty())
            throw UsageError("check: formula has free variables; provide a sentence");
        bool value = evaluate(a, f, {}, &reg);
        emit(out, cfg, json{{"value", value}}, value ? "true" : "false");
        return value ? kExitPositive : kExitNegative;
    }

    if (*qe) {
        Structure a = structure_from_json_file(qe_structure);
        QuantifierRegistry reg = load_registry(qe_quantifiers);
        FormulaPtr f = parse_formula(qe_formula, a.vocab(), &reg);
        HomogeneityOptions opts;
        if (cfg.cap_size > 0) opts.max_size = cfg.cap_size;
        TypeDisjunction theta = eliminate_quantifiers(a, f, &reg, opts);
        emit(out, cfg, disjunction_to_json(theta), print_formula(theta.to_formula()));
        return kExitPositive;
    }

    if (*homog) {
        Structure a = structure_from_json_file(homog_structure);
        HomogeneityOptions opts;
        if (cfg.cap_size > 0) opts.max_size = cfg.cap_size;
        HomogeneityReport report = is_quasi_homogeneous(a, opts);
        json j{{"quasi_homogeneous", report.homogeneous}};
        if (report.counterexample) {
            j["counterexample"] = json{{"first", report.counterexample->first},
                                       {"second", report.counterexample->second}};
        }
        emit(out, cfg, j, report.homogeneous ? "quasi-homogeneous" : "not quasi-homogeneous");
        return report.homogeneous ? kExitPositive : kExitNegative;
    }

    if (*chain_cmd) {
        std::vector<Structure> members;
        for (const auto& path : chain_files) members.push_back(structure_from_json_file(path));
        Chain chain = Chain::build(std::move(members));
        QuantifierRegistry reg = load_registry(chain_quantifiers);
        FormulaPtr f = parse_formula(chain_formula, chain.members().front().vocab(), &reg);
        HomogeneityOptions opts;
        if (cfg.cap_size > 0) opts.max_size = cfg.cap_size;
        TypeChainReport report = type_chain(chain, f, &reg, opts);
        json sets = json::array();
        for (const auto& ts : report.type_sets) {
            json arr = json::array();
            for (const auto& t : ts) arr.push_back(type_to_json(t));
            sets.push_back(arr);
        }
        json j{{"variables", report.vars},
               {"monotone", report.monotone},
               {"stabilization_index", report.stabilization_index},
               {"type_sets", sets},
               {"theta", print_formula(report.theta.to_formula())}};
        emit(out, cfg, j,
             "stabilizes at index " + std::to_string(report.stabilization_index));
        return kExitPositive;
    }

    if (*game) {
        PlaySetup setup;
        setup.rounds = game_rounds;
        if (*play) {
            setup.human_is_spoiler = play_as == "spoiler";
            std::istringstream replay_stream;
            std::istream* source = &in;
            if (!play_replay.empty()) {
                auto moves = transcript_moves_from_json(read_file(play_replay));
                std::string text;
                for (const auto& m : moves) text += m + "\n";
                replay_stream.str(text);
                source = &replay_stream;
            }
            PlayResult result;
            if (game_symbolic) {
                SymEqStructure l = parse_profile(game_left_profile);
                SymEqStructure r = parse_profile(game_right_profile);
                result = play_interactive_symbolic(l, r, setup, *source, out);
            } else {
                Structure l = structure_from_json_file(game_left);
                Structure r = structure_from_json_file(game_right);
                result = play_interactive(l, r, setup, *source, out);
            }
            if (!play_save.empty()) {
                std::ofstream save(play_save);
                if (!save) throw UsageError("cannot write transcript '" + play_save + "'");
                save << transcript_to_json(result, setup);
            }
            return result.duplicator_survived ? kExitPositive : kExitNegative;
        }
        if (game_symbolic) {
            if (game_left_profile.empty() || game_right_profile.empty())
                throw UsageError("game --symbolic needs --left-profile and --right-profile");
            SymEqStructure l = parse_profile(game_left_profile);
            SymEqStructure r = parse_profile(game_right_profile);
            SymGameOutcome outcome = sym_game(l, r, game_rounds);
            json j{{"survives", outcome.survives}, {"rounds", outcome.rounds}};
            if (game_witness || !outcome.survives) j["witness"] = sym_witness_json(outcome);
            emit(out, cfg, j, outcome.survives ? "duplicator survives" : "spoiler wins");
            return outcome.survives ? kExitPositive : kExitNegative;
        }
        Structure l = structure_from_json_file(game_left);
        Structure r = structure_from_json_file(game_right);
        Position p{&l, {}, &r, {}};
        GameOutcome outcome = duplicator_survives(p, game_rounds);
        json j{{"survives", outcome.survives}, {"rounds", outcome.rounds}};
        if (game_witness) j["witness"] = game_witness_json(outcome);
        emit(out, cfg, j, outcome.survives ? "duplicator survives" : "spoiler wins");
        return outcome.survives ? kExitPositive : kExitNegative;
    }

    if (*zeroone) {
        Vocabulary vocab = vocab_from_json_file(zo_vocab);
        QuantifierRegistry reg = load_registry(zo_quantifiers);
        FormulaPtr f = parse_formula(zo_formula, vocab, &reg);
        std::vector<int> sizes;
        std::stringstream ss(zo_sizes);
        std::string tok;
        while (std::getline(ss, tok, ',')) sizes.push_back(std::stoi(tok));
        json rows = json::array();
        std::string text;
        for (int n : sizes) {
            SampleConfig sample_cfg{vocab, n, zo_samples, zo_seed, zo_p};
            MuEstimate est = estimate_mu(f, sample_cfg, &reg, zo_jobs);
            rows.push_back(json{{"size", n},
                                {"estimate", est.estimate},
                                {"ci_low", est.ci_low},
                                {"ci_high", est.ci_high},
                                {"samples", est.samples}});
            text += "n=" + std::to_string(n) + " estimate=" + std::to_string(est.estimate) + "\n";
        }
        emit(out, cfg, json{{"rows", rows}}, text);
        return kExitPositive;
    }

    if (*gen) {
        std::map<std::string, std::string> params;
        if (!gen_params.empty()) {
            std::stringstream ss(gen_params);
            std::string item;
            while (std::getline(ss, item, ';')) {
                size_t eq = item.find('=');
                if (eq == std::string::npos) throw UsageError("--params expects key=value entries");
                params[item.substr(0, eq)] = item.substr(eq + 1);
            }
        }
        Structure s = catalog_generate(gen_name, params);
        std::string text = structure_to_json_text(s);
        if (gen_out.empty()) {
            out << text << "\n";
        } else {
            std::ofstream file(gen_out);
            if (!file) throw UsageError("cannot write '" + gen_out + "'");
            file << text;
        }
        return kExitPositive;
    }

    err << "error: no subcommand\n";
    return kExitUsage;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             std::istream& in) {
    try {
        return run(args, out, err, in);
    } catch (const CapError& e) {
        err << "resource cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EngineError& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

} // namespace embq
