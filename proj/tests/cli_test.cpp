#include <doctest.h>

#include <sstream>

#include "relcheck/cli.hpp"
#include "relcheck/report.hpp"
#include "support/gen.hpp"

using namespace relcheck;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string without_timing(const std::string& json) {
  auto r = parse_json(json);
  r.timing_ms = 0;
  return emit_json(r);
}

const std::string kLabels = "c=Low,hi=High,lo=Low";

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({"ifc", "check"}).code == 2);
  auto missing = invoke({"run", testgen::corpus_path("nope.wl")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("ifc check on c_loop") {
  auto r = invoke({"ifc", "check", testgen::corpus_path("c_loop.wl"), "--labels", kLabels});
  CHECK(r.code == 1);
  CHECK(r.out.find("lo := hi + 1") != std::string::npos);
  CHECK(r.out.find("5:3") != std::string::npos);
}

TEST_CASE("prob otp lists every probability") {
  auto r = invoke({"prob", "otp", "--q", "2", "--tape", "1", "--all"});
  CHECK(r.code == 0);
  std::size_t count = 0;
  for (auto pos = r.out.find("1/4"); pos != std::string::npos; pos = r.out.find("1/4", pos + 1)) ++count;
  CHECK(count >= 64);
}

TEST_CASE("run prints the final store") {
  auto r = invoke({"run", testgen::corpus_path("c_loop.wl"), "--store", "c=2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("c=0 hi=3 lo=4") != std::string::npos);
}

TEST_CASE("json output parses and reports the failure") {
  auto r = invoke({"--json", "ifc", "semcheck", testgen::corpus_path("leak.wl"), "--labels", "hi=High,lo=Low",
                   "--values", "0..1"});
  CHECK(r.code == 1);
  auto rep = parse_json(r.out);
  CHECK(rep.status == Status::Fail);
  REQUIRE_FALSE(rep.findings.empty());
  REQUIRE(rep.findings[0].stores.size() == 2);
  CHECK(rep.evidence.kind == "exhaustive");
}

TEST_CASE("machine reports are deterministic") {
  std::vector<std::vector<std::string>> cases = {
      {"--json", "equiv", testgen::corpus_path("set_x.wl"), testgen::corpus_path("x_five.wl")},
      {"--json", "memo", "computes", "--function", "square", "--bound", "10", "--trials", "20"},
      {"--json", "--seed", "7", "unionfind", "refine", "--check", "union-rank", "--n", "6", "--trials", "50"},
      {"--json", "rhl", "check", testgen::corpus_path("hoist.proof")},
      {"--json", "ifc", "declass", testgen::corpus_path("transfer.wl"), "--labels", "k=Low,hi=High,lo=Low"},
      {"--json", "prob", "otp", "--q", "1", "--all"},
  };
  for (const auto& args : cases) {
    auto a = invoke(args);
    auto b = invoke(args);
    CHECK(a.code == b.code);
    CHECK(without_timing(a.out) == without_timing(b.out));
  }
}

TEST_CASE("seed changes randomized evidence") {
  auto refine = [](const char* seed) {
    return parse_json(
        invoke({"--json", "--seed", seed, "unionfind", "refine", "--check", "rank", "--n", "5", "--trials", "30"}).out);
  };
  auto a = refine("1");
  auto b = refine("2");
  CHECK(a.evidence.seed == 1);
  CHECK(b.evidence.seed == 2);
}

TEST_CASE("budget is enforced") {
  auto r = invoke({"--budget", "10", "equiv", testgen::corpus_path("sum_up.wl"), testgen::corpus_path("sum_dn.wl")});
  CHECK(r.code == 2);
}
