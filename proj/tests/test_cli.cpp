#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "embq/catalog.hpp"
#include "embq/cli.hpp"
#include "embq/structure.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace embq;
using nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
    std::ostringstream out, err;
    std::istringstream in(stdin_text);
    int code = dispatch(args, out, err, in);
    return {code, out.str(), err.str()};
}

class TempDir {
  public:
    TempDir() {
        dir_ = std::filesystem::temp_directory_path() /
               ("embq_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() { std::filesystem::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& content) const {
        auto path = dir_ / name;
        std::ofstream f(path);
        f << content;
        return path.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

  private:
    std::filesystem::path dir_;
    static inline int counter_ = 0;
};

std::string structure_file(const TempDir& tmp, const std::string& name, const Structure& s) {
    return tmp.file(name, structure_to_json_text(s));
}

} // namespace

TEST_CASE("embed subcommand exit codes and output") {
    TempDir tmp;
    std::string k2 = structure_file(tmp, "k2.json", im_kn(1, 2));
    std::string k3 = structure_file(tmp, "k3.json", im_kn(1, 3));

    RunResult found = run({"embed", "--from", k2, "--to", k3});
    CHECK(found.code == 0);
    json j = json::parse(found.out);
    CHECK(j.contains("map"));
    CHECK(j["map"].size() == 2);

    RunResult none = run({"embed", "--from", k3, "--to", k2});
    CHECK(none.code == 1);

    RunResult bad = run({"embed", "--from", tmp.path("missing.json"), "--to", k2});
    CHECK(bad.code == 2);

    RunResult listed = run({"embed", "--from", k2, "--to", k3, "--enumerate", "10"});
    CHECK(listed.code == 0);
    CHECK(json::parse(listed.out)["count"].get<int>() == 6);

    RunResult hom = run({"embed", "--from", k2, "--to", k3, "--kind", "hom", "--pin", "0.0=0.1"});
    CHECK(hom.code == 0);
    CHECK(json::parse(hom.out)["map"]["0.0"] == "0.1");
}

TEST_CASE("check subcommand") {
    TempDir tmp;
    std::string k3 = structure_file(tmp, "k3.json", im_kn(1, 3));
    CHECK(run({"check", "--structure", k3, "--formula", "forall x. exists y. E(x,y)"}).code == 0);
    CHECK(run({"check", "--structure", k3, "--formula", "exists x. E(x,x)"}).code == 1);
    CHECK(run({"check", "--structure", k3, "--formula", "E(x,"}).code == 2);
    CHECK(run({"check", "--structure", k3, "--formula", "E(x,y)"}).code == 2); // free variables

    std::string gen = structure_file(tmp, "gen.json", im_kn(1, 2));
    std::string reg = tmp.file("reg.json", R"([{"name": "Qedge", "sigma": {"E": 2},
        "kind": "embedding_closure", "generators": ["gen.json"]}])");
    RunResult q = run({"check", "--structure", k3, "--formula", "Qedge[a,b: E(a,b)]",
                       "--quantifiers", reg});
    CHECK(q.code == 0);
}

TEST_CASE("registry validation errors") {
    TempDir tmp;
    std::string k3 = structure_file(tmp, "k3.json", im_kn(1, 3));
    std::string broken = tmp.file("broken.json", R"({"name": "Q", "sigma": {"E": 2},
        "kind": "embedding_closure", "generators": ["no_such_file.json"]})");
    RunResult missing_gen = run({"check", "--structure", k3, "--formula", "true",
                                 "--quantifiers", broken});
    CHECK(missing_gen.code == 2);
    CHECK(missing_gen.err.find("no_such_file.json") != std::string::npos);

    RunResult unknown_q = run({"check", "--structure", k3, "--formula", "Qzzz[a,b: E(a,b)]"});
    CHECK(unknown_q.code == 2);
    CHECK(unknown_q.err.find("Qzzz") != std::string::npos);
}

TEST_CASE("qe and homog subcommands") {
    TempDir tmp;
    std::string pe = structure_file(tmp, "pe.json", pentagon());
    std::string p3 = structure_file(tmp, "p3.json", path_graph(3));

    RunResult qe = run({"qe", "--structure", pe, "--formula", "exists y. E(x,y)"});
    CHECK(qe.code == 0);
    json j = json::parse(qe.out);
    CHECK(j["types"].size() == 1);

    RunResult not_homog = run({"qe", "--structure", p3, "--formula", "exists y. E(x,y)"});
    CHECK(not_homog.code == 2);
    CHECK(not_homog.err.find("not quasi-homogeneous") != std::string::npos);

    CHECK(run({"homog", "--structure", pe}).code == 0);
    RunResult hp3 = run({"homog", "--structure", p3});
    CHECK(hp3.code == 1);
    CHECK(json::parse(hp3.out).contains("counterexample"));
}

TEST_CASE("chain subcommand emits the type chain report") {
    TempDir tmp;
    std::vector<std::string> files;
    for (int i = 0; i <= 6; ++i)
        files.push_back(structure_file(tmp, "h" + std::to_string(i) + ".json", haertig_chain(i)));
    std::string gen = tmp.file("u3.json", structure_to_json_text(Structure::make(
                                              Vocabulary::of({{"U", 1}}), {"a", "b", "c"},
                                              {{"U", {{"a"}, {"b"}, {"c"}}}})));
    std::string reg = tmp.file("reg.json", R"({"name": "QhasU3", "sigma": {"U": 1},
        "kind": "embedding_closure", "generators": ["u3.json"]})");

    std::vector<std::string> args{"chain", "--structures"};
    for (const auto& f : files) args.push_back(f);
    args.insert(args.end(), {"--formula", "QhasU3[x: U(x)]", "--quantifiers", reg});
    RunResult r = run(args);
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["monotone"] == true);
    CHECK(j["stabilization_index"] == 4);
}

TEST_CASE("game subcommand, concrete and symbolic") {
    TempDir tmp;
    std::string k3 = structure_file(tmp, "k3.json", im_kn(1, 3));
    std::string k2 = structure_file(tmp, "k2.json", im_kn(1, 2));

    CHECK(run({"game", "--left", k3, "--right", k3, "--rounds", "3"}).code == 0);
    RunResult lost = run({"game", "--left", k2, "--right", k3, "--rounds", "1", "--witness"});
    CHECK(lost.code == 1);
    CHECK(json::parse(lost.out)["witness"].size() == 1);

    RunResult sym = run({"game", "--symbolic", "--left-profile", "(aleph1 x aleph0)",
                         "--right-profile", "(aleph1 x aleph0),(aleph0 x 1)", "--rounds", "2"});
    CHECK(sym.code == 1);
    json sj = json::parse(sym.out);
    CHECK(sj["survives"] == false);
    CHECK(sj["witness"]["moves"][0]["side"] == "right");
    CHECK(sj["witness"]["moves"][0]["class_size"] == "aleph0");

    RunResult sym1 = run({"game", "--symbolic", "--left-profile", "(aleph1 x aleph0)",
                          "--right-profile", "(aleph1 x aleph0),(aleph0 x 1)", "--rounds", "1"});
    CHECK(sym1.code == 0);
}

TEST_CASE("interactive play over piped moves, with transcript replay") {
    TempDir tmp;
    std::string k3 = structure_file(tmp, "k3.json", im_kn(1, 3));
    std::string transcript = tmp.path("t.json");

    // Human Spoiler cannot beat the engine on isomorphic boards.
    RunResult played = run({"game", "play", "--left", k3, "--right", k3, "--rounds", "2", "--as",
                            "spoiler", "--save-transcript", transcript},
                           "l 0.0\nr 0.1\n");
    CHECK(played.code == 0);
    CHECK(played.out.find("Duplicator survived") != std::string::npos);

    RunResult replayed = run({"game", "play", "--left", k3, "--right", k3, "--rounds", "2", "--as",
                              "spoiler", "--replay", transcript});
    CHECK(replayed.code == played.code);
    CHECK(replayed.out == played.out);

    // The paper's symbolic play: Spoiler picks the reverse embedding and an
    // element of the small class; the engine concedes next round.
    RunResult sym = run({"game", "play", "--symbolic", "--left-profile", "(aleph1 x aleph0)",
                         "--right-profile", "(aleph1 x aleph0),(aleph0 x 1)", "--rounds", "2",
                         "--as", "spoiler"},
                        "r aleph0 aleph1\n");
    CHECK(sym.code == 1);
    CHECK(sym.out.find("concedes") != std::string::npos);

    // Invalid moves re-prompt instead of failing.
    RunResult retry = run({"game", "play", "--left", k3, "--right", k3, "--rounds", "1", "--as",
                           "spoiler"},
                          "bogus\nl zz\nl 0.0\n");
    CHECK(retry.code == 0);
    CHECK(retry.out.find("invalid move") != std::string::npos);
}

TEST_CASE("zeroone subcommand is seed deterministic, including with jobs") {
    TempDir tmp;
    std::string vocab = tmp.file("vocab.json", R"({"E": 2})");
    std::vector<std::string> base{"zeroone", "--vocab", vocab, "--formula",
                                  "exists x. exists y. (x != y & E(x,y))", "--sizes", "8,12",
                                  "--samples", "80", "--seed", "42"};
    RunResult serial = run(base);
    CHECK(serial.code == 0);
    auto with_jobs = base;
    with_jobs.insert(with_jobs.end(), {"--jobs", "3"});
    RunResult parallel = run(with_jobs);
    CHECK(serial.out == parallel.out);

    json j = json::parse(serial.out);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["size"] == 8);
    CHECK(j["rows"][0]["estimate"].get<double>() >= 0.9);
}

TEST_CASE("catalog gen and JSON output fixpoint") {
    TempDir tmp;
    RunResult pe = run({"catalog", "gen", "--name", "pentagon"});
    CHECK(pe.code == 0);
    Structure parsed = structure_from_json_text(pe.out);
    CHECK(parsed.size() == 5);
    // Emit -> parse -> emit is a fixpoint.
    CHECK(structure_to_json_text(parsed) + "\n" == pe.out);

    std::string out_path = tmp.path("imkn.json");
    RunResult gen = run({"catalog", "gen", "--name", "ImKn", "--params", "m=2;n=3", "-o", out_path});
    CHECK(gen.code == 0);
    CHECK(structure_from_json_file(out_path).size() == 6);

    CHECK(run({"catalog", "gen", "--name", "bogus"}).code == 2);
    CHECK(run({"catalog", "gen", "--name", "ImKn", "--params", "m=oops;n=1"}).code == 2);
}

TEST_CASE("unknown subcommands and caps") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);

    TempDir tmp;
    std::string big = structure_file(tmp, "rook.json", k3_times_k3());
    RunResult capped = run({"--cap-size", "4", "homog", "--structure", big});
    CHECK(capped.code == 3);
}
