#include <doctest.h>

#include "relcheck/report.hpp"

using namespace relcheck;

namespace {

Report failing() {
  Report r;
  r.tool = "ifc semcheck";
  r.status = Status::Fail;
  r.evidence = exhaustive("{0,1}", 2, 16, "store pairs");
  Finding f;
  f.kind = "counterexample";
  f.message = "lo differs";
  f.location = SourceLoc{2, 5};
  f.stores = {StoreRecord{"s0", {{"hi", 0}, {"lo", 0}}}, StoreRecord{"s1", {{"hi", 1}, {"lo", 0}}}};
  r.findings.push_back(f);
  r.notes.push_back("bounded evidence over the test domain");
  r.timing_ms = 3;
  return r;
}

}  // namespace

TEST_CASE("human pass line") {
  Report r;
  r.tool = "footprint";
  r.evidence = exhaustive("{0,1,2}", 3, 27, "stores");
  r.timing_ms = 4;
  CHECK(emit_human(r) == "PASS (exhaustive over {0,1,2}^3, 27 stores, 4 ms)\n");
}

TEST_CASE("human fail report lists the stores") {
  auto text = emit_human(failing());
  CHECK(text.rfind("FAIL (exhaustive over {0,1}^2, 16 store pairs, 3 ms)\n", 0) == 0);
  CHECK(text.find("counterexample: lo differs at 2:5\n") != std::string::npos);
  CHECK(text.find("  s0: hi=0 lo=0\n  s1: hi=1 lo=0\n") != std::string::npos);
  CHECK(text.find("note: bounded evidence") != std::string::npos);
}

TEST_CASE("randomized evidence") {
  Report r;
  r.evidence = randomized(100, 42);
  r.status = Status::Inconclusive;
  CHECK(emit_human(r) == "INCONCLUSIVE (randomized, 100 trials, seed 42, 0 ms)\n");
}

TEST_CASE("json round-trip") {
  auto r = failing();
  auto text = emit_json(r);
  CHECK(text.find("\"schemaVersion\": 1") != std::string::npos);
  CHECK(parse_json(text) == r);
  Report plain;
  plain.tool = "run";
  CHECK(parse_json(emit_json(plain)) == plain);
}

TEST_CASE("json rejects bad input") {
  CHECK_THROWS_AS(parse_json("{"), ParseError);
  CHECK_THROWS_AS(parse_json("{\"schemaVersion\": 2}"), ParseError);
  CHECK_THROWS_AS(parse_json("{\"schemaVersion\": 1, \"tool\": \"x\"}"), ParseError);
}

TEST_CASE("statuses and exit codes") {
  CHECK(exit_code(Status::Pass) == 0);
  CHECK(exit_code(Status::Fail) == 1);
  CHECK(exit_code(Status::Error) == 2);
  CHECK(exit_code(Status::Inconclusive) == 3);
  for (auto s : {Status::Pass, Status::Fail, Status::Inconclusive, Status::Error}) {
    CHECK(parse_status(to_string(s)) == s);
  }
  CHECK_FALSE(parse_status("maybe").has_value());
}
