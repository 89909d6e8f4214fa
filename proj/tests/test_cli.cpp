// Copyright 2026 The mindisc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oracles.hpp"

#include <mindisc/cli.hpp>
#include <mindisc/io.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <unistd.h>
#include <sstream>

using namespace mindisc;
using namespace mindisc::testing;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "mindisc");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), {out, err});
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("mindisc_cli_test_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    [[nodiscard]] std::string file(const std::string &name) const {
        return (path_ / name).string();
    }

private:
    fs::path path_;
};

std::string write(const TempDir &d, const std::string &name, const std::string &text) {
    const std::string p = d.file(name);
    write_file(p, text);
    return p;
}

Json report_of(const Result &r) { return Json::parse(r.out); }

} // namespace

TEST_CASE("generate", "[cli]") {
    SECTION("trine parses back to the trine ensemble") {
        const Result r = call({"generate", "--kind", "trine"});
        REQUIRE(r.code == 0);
        const ProblemFile p = parse_problem(r.out);
        CHECK(p.dim == 2);
        REQUIRE(p.ensemble.size() == 3);
        const Ensemble t = generate(Trine{});
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK((p.ensemble.state(i).matrix() - t.state(i).matrix()).norm() <= 1e-15);
        }
    }
    SECTION("orthogonal pair") {
        const Result r = call({"generate", "--kind", "pair", "--overlap", "0",
                               "--priors", "0.3,0.7"});
        REQUIRE(r.code == 0);
        const ProblemFile p = parse_problem(r.out);
        CHECK(p.ensemble.prior(0) == 0.3);
        CHECK(p.ensemble.prior(1) == 0.7);
        CHECK(std::abs((p.ensemble.state(0).matrix() * p.ensemble.state(1).matrix()).trace()) <=
              1e-15);
    }
    SECTION("random is seeded") {
        const std::vector<std::string> a{"generate", "--kind", "random", "--dim", "3",
                                         "--n",      "4",      "--seed", "11"};
        const Result r1 = call(a);
        const Result r2 = call(a);
        REQUIRE(r1.code == 0);
        CHECK(r1.out == r2.out);
        CHECK(parse_problem(r1.out).ensemble.size() == 4);
        auto b = a;
        b.back() = "12";
        CHECK(call(b).out != r1.out);
    }
    SECTION("round trip is byte-stable") {
        for (const auto &args : std::vector<std::vector<std::string>>{
                 {"generate", "--kind", "trine"},
                 {"generate", "--kind", "pair", "--overlap", "0.3"},
                 {"generate", "--kind", "random", "--dim", "4", "--n", "3", "--seed", "2"}}) {
            const std::string text = call(args).out;
            CHECK(serialize_problem(parse_problem(text)) == text);
        }
    }
    SECTION("writes to a file") {
        TempDir d;
        const Result r = call({"generate", "--kind", "trine", "--output", d.file("t.json")});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        CHECK(parse_problem(read_file(d.file("t.json"))).ensemble.size() == 3);
    }
    SECTION("bad arguments") {
        CHECK(call({"generate", "--kind", "square"}).code == cli::kUsage);
        CHECK(call({"generate", "--kind", "pair", "--overlap", "1.5"}).code == cli::kValidation);
        CHECK(call({"generate", "--kind", "pair", "--priors", "0.5"}).code == cli::kValidation);
    }
}

TEST_CASE("certify", "[cli]") {
    TempDir d;
    SECTION("optimal measurement") {
        const std::string f = write(d, "p.json", R"({"dim": 2, "states": [
            {"prior": 0.5, "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]},
            {"prior": 0.5, "matrix": [[[0,0],[0,0]],[[0,0],[1,0]]]}],
          "povm": [ [[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[0,0],[1,0]]] ]})");
        const Result r = call({"certify", f});
        CHECK(r.code == cli::kOptimal);
        CHECK_THAT(r.out, ContainsSubstring("verdict:                    Optimal"));
        const Json j = Json::parse(r.out.substr(r.out.find("\n{") + 1));
        CHECK(j["p_corr"].get<double>() == 1.0);
        CHECK(j["certificate"]["verdict"] == "Optimal");
        CHECK(j["input_digest"].get<std::string>().rfind("sha256:", 0) == 0);
    }
    SECTION("suboptimal trine measurement reports a witness") {
        ProblemFile p{2, Trine{}, generate(Trine{}), uniform_povm(3, 2)};
        const std::string f = write(d, "t.json", serialize_problem(p));
        const Result r = call({"certify", f, "--json"});
        CHECK(r.code == cli::kNotOptimal);
        const Json j = report_of(r);
        CHECK(j["certificate"]["verdict"] == "NotOptimal");
        CHECK(j["certificate"]["witness"]["outcome"] == 0);
        CHECK_THAT(j["certificate"]["witness"]["eigenvalue"].get<double>(),
                   WithinAbs(-1.0 / 6.0, 1e-14));
        CHECK_THAT(j["p_corr"].get<double>(), WithinAbs(1.0 / 3.0, 1e-15));
    }
    SECTION("report file matches stdout") {
        ProblemFile p{2, Trine{}, generate(Trine{}), square_root_measurement(generate(Trine{}))};
        const std::string f = write(d, "t.json", serialize_problem(p));
        const Result r = call({"certify", f, "--json", "--report", d.file("r.json")});
        CHECK(r.code == cli::kOptimal);
        CHECK(read_file(d.file("r.json")) == r.out);
    }
    SECTION("tolerance flag") {
        ProblemFile p{2, Trine{}, generate(Trine{}), uniform_povm(3, 2)};
        const std::string f = write(d, "t.json", serialize_problem(p));
        CHECK(call({"certify", f, "--tol", "0.2"}).code == cli::kOptimal);
        CHECK(call({"certify", f, "--tol", "0.2", "--strict"}).code == cli::kOptimal);
        CHECK(call({"certify", f, "--tol", "0.01", "--strict"}).code == cli::kNotOptimal);
        CHECK(call({"certify", f, "--tol", "-1"}).code == cli::kUsage);
    }
    SECTION("errors map to exit codes") {
        CHECK(call({"certify", d.file("missing.json")}).code == cli::kIo);

        const Result syntax = call({"certify", write(d, "s.json", "{\n\"dim\": 2,\n oops}")});
        CHECK(syntax.code == cli::kParse);
        CHECK_THAT(syntax.err, ContainsSubstring("line 3"));

        const std::string nonsquare = write(d, "n.json", R"({"dim": 2, "states": [
            {"prior": 1, "matrix": [[[1,0],[0,0]]]}]})");
        const Result ns = call({"certify", nonsquare});
        CHECK(ns.code == cli::kParse);
        CHECK_THAT(ns.err, ContainsSubstring("states[0]"));

        const std::string negative = write(d, "neg.json", R"({"dim": 2, "states": [
            {"prior": 1, "matrix": [[[1.5,0],[0,0]],[[0,0],[-0.5,0]]]}],
          "povm": [ [[[1,0],[0,0]],[[0,0],[1,0]]] ]})");
        const Result neg = call({"certify", negative});
        CHECK(neg.code == cli::kValidation);
        CHECK_THAT(neg.err, ContainsSubstring("-0.5"));

        const std::string nopovm = write(d, "np.json", serialize_problem(
            ProblemFile{2, Trine{}, generate(Trine{}), std::nullopt}));
        CHECK(call({"certify", nopovm}).code == cli::kValidation);

        const std::string bad_povm = write(d, "bp.json", R"({"dim": 2, "states": [
            {"prior": 1, "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}],
          "povm": [ [[[1,0],[0,0]],[[0,0],[0.5,0]]] ]})");
        CHECK(call({"certify", bad_povm}).code == cli::kValidation);
    }
    SECTION("zero prior warns") {
        const std::string f = write(d, "z.json", R"({"dim": 2, "states": [
            {"prior": 1, "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]},
            {"prior": 0, "matrix": [[[0,0],[0,0]],[[0,0],[1,0]]]}],
          "povm": [ [[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[0,0]],[[0,0],[0,0]]] ]})");
        const Result r = call({"certify", f});
        CHECK(r.code == cli::kOptimal);
        CHECK_THAT(r.err, ContainsSubstring("state 1 has zero prior"));
    }
}

TEST_CASE("solve", "[cli]") {
    TempDir d;
    SECTION("pure pair with overlap one half") {
        const std::string f = d.file("pair.json");
        REQUIRE(call({"generate", "--kind", "pair", "--overlap", "0.5", "--output", f}).code == 0);
        const Result r = call({"solve", f, "--json"});
        CHECK(r.code == cli::kOptimal);
        const Json j = report_of(r);
        const double expected = helstrom_binary(parse_problem(read_file(f)).ensemble).p_corr;
        CHECK_THAT(j["p_corr"].get<double>(), WithinAbs(expected, 1e-6));
        CHECK_THAT(j["p_corr"].get<double>(),
                   WithinAbs(0.5 * (1.0 + std::sqrt(3.0) / 2.0), 1e-6));
        CHECK(j["solver"]["converged"] == true);
        CHECK(fs::exists(f + ".solution.json"));
    }
    SECTION("certify agrees with the solve verdict") {
        for (const auto &extra : std::vector<std::vector<std::string>>{
                 {}, {"--start", "srm"}, {"--no-polish", "--max-iter", "3"}}) {
            const std::string f = d.file("r.json");
            REQUIRE(call({"generate", "--kind", "random", "--dim", "3", "--n", "3", "--seed",
                          "5", "--output", f})
                        .code == 0);
            std::vector<std::string> args{"solve", f, "--output", d.file("sol.json"), "--json"};
            args.insert(args.end(), extra.begin(), extra.end());
            const Result s = call(args);
            const Result c = call({"certify", d.file("sol.json"), "--json"});
            CHECK(s.code == c.code);
            CHECK(report_of(s)["certificate"] == report_of(c)["certificate"]);
        }
    }
    SECTION("start from the file's measurement") {
        ProblemFile p{2, Trine{}, generate(Trine{}), uniform_povm(3, 2)};
        const std::string f = write(d, "t.json", serialize_problem(p));
        const Result r = call({"solve", f, "--start", "file", "--json"});
        CHECK(r.code == cli::kOptimal);
        CHECK_THAT(report_of(r)["solver"]["initial_p_corr"].get<double>(),
                   WithinAbs(1.0 / 3.0, 1e-15));
        const std::string nopovm = write(d, "np.json", serialize_problem(
            ProblemFile{2, Trine{}, generate(Trine{}), std::nullopt}));
        CHECK(call({"solve", nopovm, "--start", "file"}).code == cli::kValidation);
    }
    SECTION("iteration limit reports not optimal") {
        const std::string f = d.file("t.json");
        REQUIRE(call({"generate", "--kind", "trine", "--output", f}).code == 0);
        const Result r = call({"solve", f, "--no-polish", "--max-iter", "2", "--json"});
        CHECK(r.code == cli::kNotOptimal);
        CHECK(report_of(r)["solver"]["stop"] == "max_iter");
    }
    SECTION("repeat runs give identical reports") {
        const std::string f = d.file("r.json");
        REQUIRE(call({"generate", "--kind", "random", "--dim", "4", "--n", "3", "--seed", "8",
                      "--output", f})
                    .code == 0);
        const Result a = call({"solve", f, "--seed", "3", "--report", d.file("a.json")});
        const Result b = call({"solve", f, "--seed", "3", "--report", d.file("b.json")});
        CHECK(a.out == b.out);
        CHECK(read_file(d.file("a.json")) == read_file(d.file("b.json")));
    }
}

TEST_CASE("usage", "[cli]") {
    CHECK(call({}).code == cli::kUsage);
    CHECK(call({"frobnicate"}).code == cli::kUsage);
    CHECK(call({"certify"}).code == cli::kUsage);
    CHECK(call({"solve", "x.json", "--start", "sideways"}).code == cli::kUsage);
    const Result h = call({"--help"});
    CHECK(h.code == 0);
    CHECK_THAT(h.out, ContainsSubstring("certify"));
}

TEST_CASE("digest", "[cli]") {
    CHECK(cli::digest("abc") ==
          "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
