#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "soficlab/cli.hpp"
#include "soficlab/error.hpp"

using namespace soficlab;
using oracle::R;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "soficlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return oracle::fixture(name); }

const char* kFixtures[] = {"figblack1_2.json", "figblack1_3.json", "shin.json",          "walters.json",
                           "exliftone.json",   "ex_nosofics.json", "semigroup_wps.json"};

std::string minimal_with_transition(const std::string& row0) {
  return R"({"version": "soficlab-model/1",
  "spaces": {"X": {"alphabet": ["a", "b"], "adjacency": [[1, 1], [1, 1]]}},
  "measures": {"mu": {"space": "X", "order": 1, "transition": [)" +
         row0 + R"(, ["1/2", "1/2"]]}}})";
}

}  // namespace

TEST_CASE("fixtures load") {
  for (const char* f : kFixtures) CHECK_NOTHROW(load_model(fx(f)));
  Model m = load_model(fx("figblack1_2.json"));
  CHECK(m.version == "soficlab-model/1");
  CHECK(m.spaces.size() == 2);
  CHECK(m.codes.size() == 1);
  CHECK(m.measures.size() == 1);
  CHECK(m.measures.at("mu").measure.stationary() == oracle::V({"1/3", "1/3", "1/3"}));
  CHECK(m.potentials.at("G").potential.values.at({0}) == doctest::Approx(std::log(0.5)));
  CHECK(load_model(fx("figblack1_3.json")).measures.at("mu").measure.stationary() == oracle::V({"2/7", "4/7", "1/7"}));

  Model w = load_model(fx("walters.json"));
  const BlockCode& code = w.codes.at("pi").code;
  CHECK(code.memory() == 0);
  CHECK(code.anticipation() == 1);
  CHECK(code.apply({0, 1, 1, 0}) == Word{1, 0, 1});
}

TEST_CASE("load errors") {
  CHECK_THROWS_WITH_AS(parse_model(minimal_with_transition(R"(["1/2", "1/3"])"), "m.json"),
                       "m.json: measures.mu: row 0 sums to 5/6 ≠ 1", Error);
  CHECK_THROWS_WITH_AS(parse_model("{\n  \"spaces\": {,}\n}", "bad.json"), doctest::Contains("bad.json:2:"), Error);
  CHECK_THROWS_WITH_AS(parse_model("{\n  \"spaces\": {,}\n}", "bad.json"), doctest::Contains("JSON syntax error"), Error);
  std::string dangling = R"({"version": "soficlab-model/1",
  "measures": {"mu": {"space": "Z", "order": 1, "transition": [["1"]]}}})";
  CHECK_THROWS_WITH_AS(parse_model(dangling, "d.json"), doctest::Contains("unknown space \"Z\""), Error);
  CHECK_THROWS_WITH_AS(parse_model(dangling, "d.json"), doctest::Contains("measures.mu"), Error);
  CHECK_THROWS_AS(parse_model(R"({"version": "other/9"})"), Error);
  CHECK_THROWS_AS(load_model("/nonexistent/file.json"), Error);
  // decimals and integers parse to the same rationals
  Model dec = parse_model(minimal_with_transition(R"([0.5, "1/2"])"));
  CHECK(dec.measures.at("mu").measure.transition().matrix() == R({{"1/2", "1/2"}, {"1/2", "1/2"}}));
}

TEST_CASE("save and load round trip") {
  for (const char* f : kFixtures) {
    Model m = load_model(fx(f));
    std::string text = save_model(m);
    Model back = parse_model(text, f);
    CHECK(back == m);
    CHECK(save_model(back) == text);
  }
}

TEST_CASE("CLI outputs") {
  Run r = run({"is-markov", "--model", fx("figblack1_2.json"), "--k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"is_k_markov\":true,\"Q\":[[\"0\",\"1\"],[\"1/2\",\"1/2\"]]}\n");

  r = run({"preimages", "--model", fx("ex_nosofics.json"), "--word", "baab"});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"count\":3}\n");

  r = run({"eval", "--model", fx("figblack1_2.json"), "--word", ""});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"value\":\"1\"}\n");
  r = run({"eval", "--model", fx("figblack1_2.json"), "--word", "ab"});
  CHECK(r.out == "{\"value\":\"1/3\"}\n");

  r = run({"is-markov", "--model", fx("figblack1_3.json"), "--k", "1"});
  CHECK(r.code == 1);
  CHECK(r.out.find("\"is_k_markov\":false") != std::string::npos);
  CHECK(r.out.find("\"witness\"") != std::string::npos);
  for (const char* method : {"kernel", "rank"}) {
    Run m = run({"is-markov", "--model", fx("figblack1_3.json"), "--k", "2", "--method", method});
    CHECK(m.code == 1);
    m = run({"is-markov", "--model", fx("figblack1_2.json"), "--k", "1", "--method", method});
    CHECK(m.code == 0);
  }

  r = run({"is-markov", "--model", fx("figblack1_3.json"), "--cap", "10"});
  CHECK(r.code == 1);
  CHECK(r.out.find("\"status\":\"not_markov\"") != std::string::npos);
  r = run({"is-markov", "--model", fx("figblack1_2.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"status\":\"markov\"") != std::string::npos);

  r = run({"order-bound", "--k", "1", "--m", "2", "--n", "3"});
  CHECK(r.out == "{\"N\":\"27\",\"expanded\":true}\n");

  r = run({"resolving", "--model", fx("exliftone.json")});
  CHECK(r.out ==
        "{\"right_resolving\":false,\"left_resolving\":false,\"right_e_resolving\":true,\"left_e_resolving\":true,"
        "\"finite_to_one\":false}\n");

  r = run({"fiber-bound", "--model", fx("ex_nosofics.json")});
  CHECK(r.out == "{\"fiber_bound\":1}\n");

  r = run({"lift", "--model", fx("exliftone.json"), "--from", fx("exliftone.json") + "#nu_prime", "--weights",
           fx("exliftone.json")});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "{\"method\":\"e_resolving\",\"exact\":true,\"P\":[[\"1/3\",\"1/6\",\"1/2\"],[\"1/4\",\"1/4\",\"1/2\"],"
        "[\"1/4\",\"3/8\",\"3/8\"]],\"image_check\":true}\n");
  r = run({"lift", "--model", fx("exliftone.json"), "--from", fx("exliftone.json") + "#nu_prime", "--via",
           fx("exliftone.json") + "#mu"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"method\":\"markovian\"") != std::string::npos);
  CHECK(r.out.find("\"image_check\":true") != std::string::npos);

  r = run({"wps", "--model", fx("figblack1_3.json"), "--cycle", "ab1"});
  CHECK(r.out.find("\"product\":\"2/9\"") != std::string::npos);

  r = run({"equiv", "--model", fx("figblack1_2.json"), "--other", fx("figblack1_2.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "{\"equivalent\":true}\n");
  r = run({"equiv", "--model", fx("figblack1_2.json"), "--other", fx("figblack1_3.json")});
  CHECK(r.code == 1);

  r = run({"reduce", "--model", fx("figblack1_3.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"dim\":3") == 1);

  r = run({"core", "--model", fx("figblack1_2.json")});
  CHECK(r.code == 0);

  r = run({"pressure", "--model", fx("semigroup_wps.json")});
  CHECK(r.code == 0);
  r = run({"comp-ratio", "--model", fx("figblack1_2.json") + "#pi", "--G", fx("figblack1_2.json") + "#G", "--n", "6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"max_ratio\":2.0") != std::string::npos);

  r = run({"entropy", "--model", fx("figblack1_2.json")});
  CHECK(r.code == 0);

  r = run({"eval", "--model", fx("figblack1_2.json"), "--word", "ab", "--output", "pretty"});
  CHECK(r.out == "{\n  \"value\": \"1/3\"\n}\n");
}

TEST_CASE("CLI errors") {
  Run r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  r = run({"eval", "--model", fx("figblack1_2.json"), "--bogus"});
  CHECK(r.code == 2);
  r = run({"eval", "--model", "/nonexistent.json", "--word", "a"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error: ") == 0);
  r = run({"eval", "--model", fx("figblack1_2.json"), "--word", "q"});
  CHECK(r.code == 2);
  r = run({"lift", "--model", fx("shin.json"), "--from", fx("figblack1_2.json")});
  CHECK(r.code == 2);
  r = run({"comp-ratio", "--model", fx("figblack1_2.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("several candidates") != std::string::npos);
}

TEST_CASE("determinism and the installed binary") {
  std::vector<std::string> args{"is-markov", "--model", fx("figblack1_3.json"), "--cap", "10"};
  Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK(a.code == b.code);

  namespace fs = std::filesystem;
  const std::string bin = SOFICLAB_BIN;
  REQUIRE(fs::exists(bin));
  const fs::path tmp = fs::temp_directory_path() / "soficlab_cli_test.json";
  std::string cmd = "\"" + bin + "\" preimages --model \"" + fx("ex_nosofics.json") + "\" --word baaab > \"" +
                    tmp.string() + "\"";
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  std::ifstream in(tmp);
  std::string line;
  std::getline(in, line);
  CHECK(line == "{\"count\":4}");
  cmd = "\"" + bin + "\" is-markov --model \"" + fx("figblack1_3.json") + "\" --k 2 > /dev/null";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
  cmd = "\"" + bin + "\" nonsense > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 2);
  fs::remove(tmp);
}
