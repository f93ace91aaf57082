#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "quadconj/cli.hpp"

using namespace quadconj;
using nlohmann::json;

namespace {

struct RunResult {
    int code;
    json body;
    std::string raw_out;
    std::string raw_err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    RunResult r{code, json(), out.str(), err.str()};
    if (!r.raw_out.empty() && r.raw_out[0] == '{')
        r.body = json::parse(r.raw_out.substr(0, r.raw_out.find('\n')));
    return r;
}

}  // namespace

TEST_CASE("classify subcommand") {
    auto r = run_cli({"classify", "2z + 5/z"});
    REQUIRE(r.code == 0);
    CHECK(r.body["schema"] == 1);
    CHECK(r.body["command"] == "classify");
    CHECK(r.body["aut_class"] == "c2");
    CHECK(r.body["normal_form"]["case"] == "c2");
    CHECK(r.body["normal_form"]["params"]["k"] == "2");
    CHECK(r.body["normal_form"]["params"]["b"] == "5");
    CHECK(r.body["errors"].empty());
}

TEST_CASE("invariants subcommand") {
    auto r = run_cli({"invariants", "(2z^2+2z+2)/(-z^2+2z+2)"});
    REQUIRE(r.code == 0);
    CHECK(r.body["sigma"] == json::array({"0", "0"}));
    CHECK(r.body["aut_class"] == "trivial");
    CHECK(r.body["symmetry_locus"] == "36");
}

TEST_CASE("same-class subcommand") {
    auto r = run_cli({"same-class", "1/z^2", "2/z^2", "--witness"});
    REQUIRE(r.code == 0);  // the boolean is in the JSON, not the exit code
    CHECK(r.body["conjugate"] == false);
    CHECK(r.body["kbar_conjugate"] == true);

    r = run_cli({"same-class", "z^2", "z/2 + 2/z", "--witness"});
    REQUIRE(r.code == 0);
    CHECK(r.body["conjugate"] == true);
    REQUIRE(r.body.contains("witness"));
    // the witness in the output verifies by exact conjugation
    const Rational one(1);
    auto w = parse_moebius(r.body["witness"]["map"].get<std::string>(), one);
    CHECK(conjugate(parse_map("z^2", one), w) == parse_map("z/2 + 2/z", one));
}

TEST_CASE("normalize subcommand emits a representative that round-trips") {
    auto r = run_cli({"normalize", "z^2", "--witness"});
    REQUIRE(r.code == 0);
    CHECK(r.body["normal_form"]["case"] == "c2");
    const Rational one(1);
    auto rep = parse_map(r.body["normal_form"]["map"].get<std::string>(), one);
    CHECK(rep == c2_representative(Rational(1, 2), Rational(2)));
    auto w = parse_moebius(r.body["witness"]["map"].get<std::string>(), one);
    CHECK(conjugate(parse_map("z^2", one), w) == rep);
}

TEST_CASE("every map string in the output re-parses canonically") {
    for (const char* text : {"2z + 5/z", "(2z^2+2z+2)/(-z^2+2z+2)", "1/z^2"}) {
        auto r = run_cli({"normalize", text});
        REQUIRE(r.code == 0);
        const Rational one(1);
        for (const auto& in : r.body["inputs"]) {
            auto m = parse_map(in.get<std::string>(), one);
            CHECK(format_map(m) == in.get<std::string>());
        }
    }
}

TEST_CASE("prime field flag") {
    auto r = run_cli({"classify", "1/z^2", "--field", "fp", "--p", "7"});
    REQUIRE(r.code == 0);
    CHECK(r.body["field"]["type"] == "Fp");
    CHECK(r.body["aut_class"] == "s3");
    CHECK(r.body["normal_form"]["params"]["t"] == "1");

    r = run_cli({"classify", "z^2", "--field", "fp"});
    CHECK(r.code == 1);  // missing --p

    r = run_cli({"classify", "z^2", "--field", "fp", "--p", "4"});
    CHECK(r.code == 1);  // not prime

    r = run_cli({"classify", "z^2", "--field", "fp", "--p", "3"});
    CHECK(r.code == 1);  // p > 3 required
}

TEST_CASE("user errors exit 1 with positioned diagnostics") {
    auto r = run_cli({"classify", "(z^2+1"});
    CHECK(r.code == 1);
    CHECK(r.body["errors"].size() == 1);
    CHECK(r.body["errors"][0]["position"] == 6);
    CHECK(r.raw_err.find("position 6") != std::string::npos);

    r = run_cli({"classify", "z"});  // degree 1: validation failure
    CHECK(r.code == 1);

    r = run_cli({"unknown-subcommand"});
    CHECK(r.code == 1);
}

TEST_CASE("deterministic output") {
    auto a = run_cli({"classify", "2z + 5/z"});
    auto b = run_cli({"classify", "2z + 5/z"});
    CHECK(a.raw_out == b.raw_out);
}

TEST_CASE("census subcommand") {
    auto r = run_cli({"census", "--p", "5", "--jobs", "2"});
    REQUIRE(r.code == 0);
    auto row = r.body["results"][0];
    CHECK(row["p"] == 5);
    CHECK(row["maps"] == 3000);
    CHECK(row["orbits"] == 30);
    CHECK(row["orbits_trivial"] == 21);
    CHECK(row["orbits_c2"] == 6);
    CHECK(row["orbits_s3"] == 3);
    CHECK(row["mismatches"].empty());

    auto pretty = run_cli({"census", "--p", "5", "--pretty"});
    CHECK(pretty.raw_out.find("orbits_trivial") != std::string::npos);
    CHECK(pretty.raw_out.find("3000") != std::string::npos);
}

TEST_CASE("selftest subcommand passes") {
    auto r = run_cli({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.body["passed"] == true);
}

TEST_CASE("batch mode processes lines independently") {
    std::istringstream in(
        "classify \"2z + 5/z\"\n"
        "\n"
        "classify \"(z^2+1\"\n"
        "invariants \"1/z^2\" --field fp --p 11\n");
    std::ostringstream out, err;
    auto saved = std::cin.rdbuf(in.rdbuf());
    int code = cli::run({"batch"}, out, err);
    std::cin.rdbuf(saved);
    CHECK(code == 0);
    std::vector<json> lines;
    std::istringstream reader(out.str());
    std::string line;
    while (std::getline(reader, line)) {
        if (!line.empty() && line[0] == '{') lines.push_back(json::parse(line));
    }
    REQUIRE(lines.size() == 3);
    CHECK(lines[0]["aut_class"] == "c2");
    CHECK_FALSE(lines[1]["errors"].empty());
    CHECK(lines[2]["field"]["p"] == 11);
}
