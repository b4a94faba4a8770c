#include <doctest.h>

#include "relcheck/domain.hpp"
#include "relcheck/lang.hpp"
#include "support/gen.hpp"

using namespace relcheck;

namespace {

const char* kCLoop = "vars c,hi,lo; while (c != 0) decr c { hi := lo + 1; lo := hi + 1; c := c - 1 }";

Store store_of(const Program& p, const char* text) { return parse_store(text, p.vars); }

}  // namespace

TEST_CASE("parse smallest program") {
  auto p = parse_program("vars x; skip");
  REQUIRE(p.vars->size() == 1);
  CHECK((*p.vars)[0] == "x");
  CHECK(is_skip(*p.body));
}

TEST_CASE("parse c_loop shape") {
  auto p = parse_program(kCLoop);
  const auto* w = std::get_if<While>(&p.body->node);
  REQUIRE(w);
  REQUIRE(w->metric);
  CHECK(to_string(*w->metric) == "c");
  // left-associated body: Seq(Seq(hi := .., lo := ..), c := ..)
  const auto* outer = std::get_if<Seq>(&w->body->node);
  REQUIRE(outer);
  CHECK(std::holds_alternative<Seq>(outer->first->node));
  CHECK(std::get<Assign>(outer->second->node).target == "c");
}

TEST_CASE("undeclared variable") {
  try {
    parse_program("vars x; x := y");
    FAIL("expected UndeclaredVariable");
  } catch (const UndeclaredVariable& e) {
    CHECK(e.name() == "y");
  }
}

TEST_CASE("parse errors carry a location") {
  CHECK_THROWS_AS(parse_program("vars x; x := "), ParseError);
  CHECK_THROWS_AS(parse_program("vars x, x; skip"), DuplicateDeclaration);
  try {
    parse_program("vars x;\n  x := 1 +");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
  }
}

TEST_CASE("printing round-trips") {
  auto p = parse_program(kCLoop);
  auto again = parse_program(to_string(p));
  CHECK(equal(*p.body, *again.body));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    auto q = testgen::random_program(rng, 3, 3);
    auto back = parse_program(to_string(q));
    CHECK(equal(*q.body, *back.body));
  }
}

TEST_CASE("eval_exp examples") {
  auto vars = make_vars({"x", "k", "hi"});
  Store s = parse_store("x=2,k=1,hi=3", vars);
  CHECK(eval_exp(s, *parse_exp("x + 1", *vars)) == 3);
  CHECK(eval_exp(s, *parse_exp("lt(k, hi)", *vars)) == 1);
  CHECK(eval_exp(s, *parse_exp("lt(hi, k)", *vars)) == 0);
  s.set("x", 5);
  CHECK(eval_exp(s, *parse_exp("0 * x", *vars)) == 0);
  CHECK(eval_exp(s, *parse_exp("x - k * hi", *vars)) == 2);
}

TEST_CASE("overflow is an error") {
  auto vars = make_vars({"x"});
  Store s(vars, {INT64_MAX});
  CHECK_THROWS_AS(eval_exp(s, *parse_exp("x + 1", *vars)), ArithmeticOverflow);
  CHECK_THROWS_AS(eval_exp(s, *parse_exp("x * 2", *vars)), ArithmeticOverflow);
}

TEST_CASE("run_metric on c_loop matches hand simulation") {
  auto p = parse_program(kCLoop);
  auto out = run_metric(p, store_of(p, "c=2"));
  REQUIRE(out.normal());
  // iteration 1: hi=1 lo=2 c=1; iteration 2: hi=3 lo=4 c=0
  CHECK(out.store.get("c") == 0);
  CHECK(out.store.get("hi") == 3);
  CHECK(out.store.get("lo") == 4);
}

TEST_CASE("metric that does not decrease") {
  auto p = parse_program("vars x; while (x != 0) decr x { skip }");
  CHECK(run_metric(p, store_of(p, "x=1")).kind == Outcome::Kind::OutOfFuel);
  CHECK(run_metric(p, store_of(p, "x=0")).normal());
}

TEST_CASE("negative metric at entry") {
  auto p = parse_program("vars x; while (x != 0) decr x { x := x + 1 }");
  CHECK(run_metric(p, store_of(p, "x=-1")).kind == Outcome::Kind::OutOfFuel);
}

TEST_CASE("metric not evaluated when the loop is skipped") {
  auto p = parse_program("vars x; while (x != 0) decr 0 - 1 { x := 0 }");
  CHECK(run_metric(p, store_of(p, "x=0")).normal());
  CHECK(run_metric(p, store_of(p, "x=1")).kind == Outcome::Kind::OutOfFuel);
}

TEST_CASE("skip leaves the store alone") {
  auto p = parse_program("vars x; skip");
  auto out = run_metric(p, store_of(p, "x=7"));
  REQUIRE(out.normal());
  CHECK(out.store.get("x") == 7);
}

TEST_CASE("missing metric") {
  auto p = parse_program("vars x; while (x != 0) { x := x - 1 }");
  CHECK_THROWS_AS(run_metric(p, store_of(p, "x=1")), MissingMetric);
  // fuel mode ignores metrics
  CHECK(run_fuel(p, store_of(p, "x=1"), 5).completed);
}

TEST_CASE("fuel counts iterations") {
  auto p = parse_program("vars x; while (x != 0) { x := x - 1 }");
  auto s = store_of(p, "x=2");
  auto one = run_fuel(p, s, 1);
  CHECK_FALSE(one.completed);
  CHECK(one.final.get("x") == 1);
  auto two = run_fuel(p, s, 2);
  CHECK(two.completed);
  CHECK(two.final.get("x") == 0);
  auto q = parse_program("vars x; skip");
  auto z = run_fuel(q, store_of(q, "x=3"), 0);
  CHECK(z.completed);
  CHECK(z.final.get("x") == 3);
}

TEST_CASE("fuel is shared across nested loops") {
  auto p = parse_program("vars x,y; while (x != 0) { y := 2; while (y != 0) { y := y - 1 }; x := x - 1 }");
  auto s = store_of(p, "x=2");
  // 2 outer + 4 inner iterations
  CHECK_FALSE(run_fuel(p, s, 5).completed);
  CHECK(run_fuel(p, s, 6).completed);
}

TEST_CASE("property: fuel monotonicity and determinism") {
  Rng rng(11);
  int completed = 0;
  for (int i = 0; i < 1500; ++i) {
    auto p = testgen::random_program(rng, 3, 3);
    auto stores = all_stores(p.vars, make_domain(0, 2));
    const auto& s = stores[rng.below(stores.size())];
    try {
      for (std::uint64_t f = 0; f <= 12; ++f) {
        auto r = run_fuel(p, s, f);
        CHECK(r == run_fuel(p, s, f));
        if (!r.completed) continue;
        ++completed;
        for (std::uint64_t g = f + 1; g <= f + 4; ++g) CHECK(run_fuel(p, s, g) == r);
        break;
      }
    } catch (const ArithmeticOverflow&) {
    }
  }
  CHECK(completed > 500);
}

TEST_CASE("property: metric and fuel agree") {
  Rng rng(12);
  for (int i = 0; i < 1500; ++i) {
    auto p = testgen::random_program(rng, 3, 3);
    for (const auto& s : all_stores(p.vars, make_domain(0, 1))) {
      try {
        auto m = run_metric(p, s);
        CHECK(m == run_metric(p, s));
        if (!m.normal()) continue;
        auto f = run_fuel(p, s, 64);
        CHECK(f.completed);
        CHECK(f.final == m.store);
      } catch (const ArithmeticOverflow&) {
      }
    }
  }
}

TEST_CASE("domain enumeration order and budget") {
  auto vars = make_vars({"a", "b"});
  auto d = make_domain(0, 2);
  auto stores = all_stores(vars, d);
  REQUIRE(stores.size() == 9);
  CHECK(stores[1].get("a") == 0);
  CHECK(stores[1].get("b") == 1);
  CHECK(stores[3].get("a") == 1);
  CHECK(describe(d) == "{0,1,2}");
  CHECK(parse_domain("0,1,5").values == std::vector<Value>{0, 1, 5});
  CHECK(parse_domain("-1..1").values == std::vector<Value>{-1, 0, 1});
  d.budget = 8;
  CHECK_THROWS_AS(all_stores(vars, d), BudgetExceeded);
  CHECK_THROWS_AS(parse_domain("3..1"), UsageError);
}

TEST_CASE("store text") {
  auto vars = make_vars({"x", "y"});
  auto s = parse_store("y=-4", vars);
  CHECK(s.to_string() == "x=0 y=-4");
  CHECK_THROWS_AS(parse_store("z=1", vars), UndeclaredVariable);
  CHECK_THROWS_AS(parse_store("x", vars), ParseError);
}
