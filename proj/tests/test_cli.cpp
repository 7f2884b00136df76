#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "rlie/cartan.hpp"
#include "rlie/errors.hpp"
#include "rlie/io.hpp"

using namespace rlie;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run_command(args, o, e);
  return {code, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "rlie_cli_tests";
  fs::create_directories(d);
  return d / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::string expect_input_error(const std::string& text) {
  try {
    deserialize(text);
  } catch (const InputError& e) {
    return e.what();
  }
  FAIL("accepted malformed file");
  return {};
}

const char* kSmall = R"({
  "format_version": 1,
  "p": 5,
  "dim": 3,
  "basis_labels": ["e","h","f"],
  "brackets": [
    [0, 1, [[0, 3]]],
    [0, 2, [[1, 1]]],
    [1, 2, [[2, 3]]]
  ]
}
)";

}  // namespace

TEST_CASE("algebra files round trip byte for byte") {
  const AlgebraFile f = to_file(witt(2, {1, 1}, 5).as_restricted());
  const std::string text = serialize(f);
  CHECK(serialize(deserialize(text)) == text);
  const LoadedAlgebra A = from_file(deserialize(text));
  CHECK(A.lie == witt(2, {1, 1}, 5).lie);
  REQUIRE(A.pmap);

  const fs::path a = scratch("w21.json");
  REQUIRE(run({"build", "witt", "--m", "2", "--p", "5", "--out", a.string()}).code == 0);
  const Run s = run({"build", "witt", "--m", "2", "--p", "5"});
  CHECK(s.code == 0);
  CHECK(s.out == slurp(a));
  CHECK(serialize(read_algebra_file(a.string())) == slurp(a));
}

TEST_CASE("malformed algebra files are rejected with a location") {
  CHECK_NOTHROW(deserialize(kSmall));
  std::string t = kSmall;
  t.replace(t.find("[[0, 3]]"), 8, "[[0, 5]]");
  CHECK(expect_input_error(t).find("brackets[0]") != std::string::npos);

  t = kSmall;
  t.replace(t.find("[0, 2, [[1, 1]]]"), 16, "[1, 2, [[2, 3]]]");
  t.replace(t.rfind("[1, 2, [[2, 3]]]"), 16, "[0, 2, [[1, 1]]]");
  const std::string unsorted = expect_input_error(t);
  CHECK(unsorted.find("brackets[") != std::string::npos);
  CHECK(unsorted.find("sorted") != std::string::npos);

  t = kSmall;
  t.replace(t.find("\"dim\""), 0, "\"colour\": 1,\n  ");
  CHECK(expect_input_error(t).find("colour") != std::string::npos);

  t = kSmall;
  t.replace(t.find("\"format_version\": 1"), 19, "\"format_version\": 2");
  CHECK_THROWS_AS(deserialize(t), InputError);

  t = kSmall;
  t.replace(t.find("[[0, 3]]"), 8, "[[0, 0]]");
  CHECK_THROWS_AS(deserialize(t), InputError);

  CHECK_THROWS_AS(deserialize("{ not json"), InputError);
}

TEST_CASE("exit codes") {
  const fs::path w = scratch("w11.json");
  REQUIRE(run({"build", "witt", "--m", "1", "--p", "5", "--out", w.string()}).code == 0);

  const Run ok = run({"cohom", w.string(), "--restricted", "--expect-h2-restricted", "1", "--json"});
  CHECK(ok.code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j["h2_restricted"] == 1);

  CHECK(run({"cohom", w.string(), "--restricted", "--expect-h2-restricted", "2"}).code == 1);
  CHECK(run({"verify", w.string(), "--checks", "jacobi,restricted,simple"}).code == 0);

  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"build", "nonsense"}).code == 2);
  CHECK(run({"verify", scratch("missing.json").string()}).code == 2);

  const fs::path bad = scratch("bad.json");
  std::string t = kSmall;
  t.replace(t.find("[[0, 3]]"), 8, "[[0, 5]]");
  spit(bad, t);
  const Run r = run({"--json", "verify", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.out.find("brackets[0]") != std::string::npos);
}

TEST_CASE("catalog output is deterministic without timings") {
  const Run a = run({"catalog", "--reference-table", "--tier", "1", "--json", "--no-timings"});
  const Run b = run({"catalog", "--paper-table", "--tier", "1", "--json", "--no-timings"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["mismatches"] == 0);
  CHECK(a.out.find("seconds") == std::string::npos);
}

TEST_CASE("hopf pipeline through the command line") {
  const fs::path sl2 = scratch("sl2.json"), u = scratch("u.json"), ud = scratch("ud.json");
  REQUIRE(run({"build", "sl", "--size", "2", "--p", "5", "--out", sl2.string()}).code == 0);
  REQUIRE(run({"hopf", "enveloping", sl2.string(), "--out", u.string()}).code == 0);
  CHECK(run({"hopf", "verify", u.string()}).code == 0);
  REQUIRE(run({"hopf", "dual", u.string(), "--out", ud.string()}).code == 0);
  const Run h = run({"hopf", "height", ud.string(), "--json"});
  CHECK(h.code == 0);
  CHECK(nlohmann::json::parse(h.out)["height"] == 1);
}
