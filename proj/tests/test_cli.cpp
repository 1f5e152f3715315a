#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stablecrd/cli.hpp"
#include "support.hpp"

using namespace stablecrd;
using namespace testsupport;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("stablecrd_test_" + name);
    std::ofstream(path) << content;
    return path.string();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("validate") {
    Run r = run({"validate", corpus("existence.crd")});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "bimolecular, 3 species, 1 reaction"));

    r = run({"validate", corpus("parity.pp")});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "imported protocol, bimolecular"));

    std::string bad = temp_file("novote.crd", "species: A, B, Y\ninputs: A\nyes: A\nno: B\nreactions:\n");
    r = run({"validate", bad});
    CHECK(r.code == cli::kParseError);
    CHECK(contains(r.err, ":1:16: error: species Y has no vote"));

    r = run({"validate", corpus("existence.crd"), "--format", "json"});
    CHECK(r.code == cli::kOk);
    CHECK(Json::parse(r.out)["class"] == "bimolecular");

    CHECK(run({"validate", "/nonexistent/file.crd"}).code == cli::kParseError);
    CHECK(run({}).code == cli::kParseError);
    CHECK(run({"frobnicate"}).code == cli::kParseError);
}

TEST_CASE("minu") {
    Run r = run({"minu", corpus("existence.crd"), "--format", "json"});
    CHECK(r.code == cli::kOk);
    Json j = Json::parse(r.out);
    CHECK(j["min_unstable"].dump() == R"([{"B":1,"Y":1},{"A":1,"B":1}])");
    CHECK(j["stats"]["layers"].dump() == "[[2,2]]");
    CHECK(contains(r.err, "assumed, not checked"));

    CHECK(run({"minu", corpus("increasing.crd")}).code == cli::kUnsupportedClass);

    r = run({"minu", corpus("parity.crd"), "--element-cap", "1", "--format", "json"});
    CHECK(r.code == cli::kCapExceeded);
    CHECK(Json::parse(r.out)["truncated"] == true);

    std::string out = temp_file("minu.json", "");
    r = run({"minu", corpus("threshold2.crd"), "--index", "naive", "--format", "json", "-o", out});
    CHECK(r.code == cli::kOk);
    Json written = Json::parse(read_file(out));
    CHECK(written["index"] == "naive");
    CHECK(written["min_unstable"].size() == 3);
}

TEST_CASE("check") {
    Run r = run({"check", corpus("existence.crd"), "A + 3Y", "2A + B"});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "A + 3Y: o-stable"));
    CHECK(contains(r.out, "2A + B: o-unstable"));

    r = run({"check", corpus("existence.crd"), "A + Y", "--mode", "t", "--format", "json"});
    CHECK(r.code == cli::kOk);
    CHECK(Json::parse(r.out).dump() == R"({"config":{"A":1,"Y":1},"t_stable":true})");

    r = run({"check", corpus("existence.crd"), "5X"});
    CHECK(r.code == cli::kParseError);

    r = run({"check", corpus("parity.crd"), "3F1", "--size-cap", "1"});
    CHECK(r.code == cli::kUncertifiable);

    std::string cache = temp_file("cache.json", "");
    REQUIRE(run({"minu", corpus("existence.crd"), "--format", "json", "-o", cache}).code == 0);
    r = run({"check", corpus("existence.crd"), "7B", "--minu", cache});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "7B: o-stable"));
    r = run({"check", corpus("threshold2.crd"), "A", "--minu", cache});
    CHECK(r.code != cli::kOk);
}

TEST_CASE("oracle") {
    Run r = run({"oracle", corpus("existence.crd"), "--max-size", "6", "--what", "minu",
                 "--format", "json"});
    CHECK(r.code == cli::kOk);
    CHECK(Json::parse(r.out)["min_unstable"].dump() == R"([{"B":1,"Y":1},{"A":1,"B":1}])");

    r = run({"oracle", corpus("existence.crd"), "--max-size", "4", "--what", "stability"});
    CHECK(r.code == cli::kOk);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3 + 6 + 10 + 15);

    r = run({"oracle", corpus("existence.crd"), "--max-size", "5", "--what", "decides",
             "--format", "json"});
    CHECK(r.code == cli::kOk);
    Json d = Json::parse(r.out);
    CHECK(d["decides"] == true);
    for (const auto& row : d["table"])
        CHECK(row["verdict"] == (row["input"].contains("A") ? "yes" : "no"));

    r = run({"oracle", corpus("parity.crd"), "--max-size", "6", "--cap", "2"});
    CHECK(r.code == cli::kCapExceeded);
    CHECK(run({"oracle", corpus("increasing.crd"), "--max-size", "3"}).code ==
          cli::kUnsupportedClass);
}

TEST_CASE("compare") {
    Run r = run({"compare", corpus("existence.crd"), "--max-size", "6"});
    CHECK(r.code == cli::kOk);
    CHECK(contains(r.out, "PASS"));

    r = run({"compare", corpus("parity.crd"), "--max-size", "8", "--golden",
             corpus("expected/parity.json")});
    CHECK(r.code == cli::kOk);

    // The threshold golden checked against a CRD with a mutated reaction.
    std::string mutated = temp_file(
        "mutated.crd", "species: A, B, Y\ninputs: A, B\nyes: Y\nno: A, B\nreactions:\n"
                       "2A -> 2B\nA + Y -> 2Y\nB + Y -> 2Y\n");
    r = run({"compare", mutated, "--max-size", "6", "--golden", corpus("expected/threshold2.json")});
    CHECK(r.code == cli::kMismatch);
    CHECK(contains(r.out, "FAIL"));
    CHECK(contains(r.out, "golden only: 2A"));

    r = run({"compare", corpus("parity.crd"), "--max-size", "8", "--size-cap", "1"});
    CHECK(r.code == cli::kCapExceeded);
}
