#include "qplane/cli.hpp"
#include "qplane/parser.hpp"

#include "support/generators.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace qplane;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kGrid = R"j({"q":0.5,"n_sigma":8,"cells":16,"k_range":[-6,6],"epsilon":1})j";
const char* kSmallGrid = R"j({"q":0.5,"n_sigma":6,"cells":3,"k_range":[-4,4],"epsilon":1})j";

}  // namespace

TEST_CASE("normalize") {
    CHECK(run({"normalize", "z2 z1"}).out == "q * z1 z2\n");
    CHECK(run({"normalize", "z1' z1", "--q", "0.5"}).out == "4 * z1 z1' + 12 * z2 z2'\n");
    CHECK(run({"normalize", ""}).out == "1\n");
    CHECK(run({"normalize", "z1' z1"}).out == "q^-2 * z1 z1' + (q^-4 - q^-2) * z2 z2'\n");

    const Run bad = run({"normalize", "z1 + * z2"});
    CHECK(bad.code == exit_usage);
    CHECK(bad.err.find("position 5") != std::string::npos);
    CHECK(run({"normalize", "z1", "--q", "1.5"}).code == exit_usage);
    CHECK(run({"normalize", "z1", "--q", "0"}).code == exit_usage);

    const json doc = json::parse(run({"normalize", "z2 z1", "--json"}).out);
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["normal_form"] == "q * z1 z2");
}

TEST_CASE("normalize output re-parses to the same element") {
    testing::Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Word w = testing::random_word(rng, 6);
        const Run r = run({"normalize", to_string(w)});
        REQUIRE(r.code == exit_ok);
        CHECK(parse_element(r.out) == normalize(w));
    }
}

TEST_CASE("rep-check") {
    const Run n = run({"rep-check", R"j({"type":"N","q":0.5,"atoms":2})j"});
    CHECK(n.code == exit_ok);
    const json nd = json::parse(n.out);
    CHECK(nd["schema_version"] == kSchemaVersion);
    for (const auto& r : nd["relations"]) CHECK(r["residual"] == 0.0);

    const Run h = run({"rep-check", R"j({"type":"H","q":0.5,"b":[0.6,0.9],"n_range":[-4,4],"m_max":8})j"});
    CHECK(h.code == exit_ok);
    CHECK(json::parse(h.out)["passed"] == true);

    CHECK(run({"rep-check", R"j({"type":"H","q":0.5,"b":[1.5],"n_range":[-4,4],"m_max":8})j"}).code == exit_usage);
    CHECK(run({"rep-check", R"j({"type":"X","q":0.5})j"}).code == exit_usage);
    CHECK(run({"rep-check", "{not json"}).code == exit_usage);
    CHECK(run({"rep-check", "/nonexistent/config.json"}).code == exit_usage);
    // a q override that invalidates the spectral values
    CHECK(run({"rep-check", R"j({"type":"K","q":0.5,"a":[0.6]})j", "--q", "0.7"}).code == exit_usage);
}

TEST_CASE("grid-check") {
    const Run r = run({"grid-check", kSmallGrid});
    CHECK(r.code == exit_ok);
    const json doc = json::parse(r.out);
    CHECK(doc["q_invariance"]["passed"] == true);
    CHECK(doc["partial_isometries"].size() == 8);
    CHECK(run({"grid-check", R"j({"q":0.5,"n_sigma":1,"cells":3,"k_range":[-4,4]})j"}).code == exit_usage);
}

TEST_CASE("norm") {
    const Run e = run({"norm", R"j({"terms":[{"n":0,"m":0,"f":"exp(-x-y)"}]})j", kGrid});
    CHECK(e.code == exit_ok);
    CHECK(e.out.rfind("norm 1\ngrid_sup 1\n", 0) == 0);

    const Run zero = run({"norm", R"j({"terms":[]})j", kGrid});
    CHECK(zero.code == exit_ok);
    CHECK(zero.out.rfind("norm 0\n", 0) == 0);

    const json bump = json::parse(run({"norm", R"j({"terms":[{"f":"max(0, 2.5 - x - y)"}]})j", kGrid, "--json"}).out);
    CHECK(std::abs(bump["norm"].get<double>() - 2.5) <= 1e-10);
    CHECK(bump["grid_sup"] == 2.5);

    CHECK(run({"norm", R"j({"terms":[{"n":1,"f":"exp(-x-y)"}]})j", kGrid}).code == exit_usage);
    CHECK(run({"norm", R"j({"terms":[{"f":"exp(-x-"}]})j", kGrid}).code == exit_usage);
    const Run capped = run({"norm", R"j({"terms":[{"f":"x*exp(-x-y)"}]})j", kSmallGrid, "--max-iterations", "2"});
    CHECK(capped.code == exit_check_failed);
    CHECK(capped.out.find("not converged") != std::string::npos);
}

TEST_CASE("character") {
    CHECK(run({"character", R"j({"terms":[{"f":"exp(-x-y)"}]})j"}).out == "1\n");
    CHECK(run({"character", R"j({"terms":[{"n":1,"f":"x*exp(-x-y)"}]})j"}).out == "0\n");
    const json doc = json::parse(run({"character", R"j({"terms":[{"f":"3*exp(-x-y)"}]})j", "--json"}).out);
    CHECK(doc["value"]["re"] == 3.0);
}

TEST_CASE("p-function") {
    const Run r = run({"p-function", "z2", "--at", "4,0.75"});
    CHECK(r.code == exit_ok);
    CHECK(r.out == "bidegree (0,1)\np(4,0.75) = 0.375\n");
    const Run g = run({"p-function", "z1 z1' z2", "--grid", kSmallGrid});
    CHECK(g.code == exit_ok);
    CHECK(g.out.find("grid difference 0") != std::string::npos);
    CHECK(run({"p-function", "z1' z1"}).code == exit_usage);
    CHECK(run({"p-function", "z1", "--at", "4"}).code == exit_usage);
}

TEST_CASE("usage errors and output files") {
    CHECK(run({}).code == exit_usage);
    CHECK(run({"frobnicate"}).code == exit_usage);
    CHECK(run({"normalize"}).code == exit_usage);
    CHECK(run({"--help"}).code == exit_ok);

    const std::string path = "test_cli_output.txt";
    CHECK(run({"normalize", "z2 z1", "--out", path}).out.empty());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "q * z1 z2");
    std::remove(path.c_str());
}
