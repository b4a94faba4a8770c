#include <doctest.h>

#include "relcheck/relsem.hpp"
#include "support/gen.hpp"

using namespace relcheck;

namespace {

Program xy(const std::string& body) { return parse_program("vars x,y; " + body); }

VarSet unite(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

}  // namespace

TEST_CASE("writes examples") {
  auto d01 = make_domain(0, 1);
  auto p = xy("x := 1");
  CHECK(check_writes(p, {"x"}, d01).passed());
  auto bad = check_writes(p, {}, d01);
  REQUIRE_FALSE(bad.passed());
  CHECK(bad.counterexample->var == "x");
  CHECK(bad.counterexample->store.get("x") == 0);
  auto branch = parse_program("vars h,x; if (h == 0) { x := 0 } else { skip }");
  CHECK(check_writes(branch, {"x"}, make_domain(0, 2)).passed());
}

TEST_CASE("reads examples") {
  auto d = make_domain(0, 1);
  auto p = xy("x := y");
  CHECK(check_reads(p, {"y"}, {"x"}, d).passed());
  auto bad = check_reads(p, {}, {"x"}, d);
  REQUIRE_FALSE(bad.passed());
  const auto& w = *bad.counterexample;
  CHECK(w.var == "x");
  // brute-force oracle: the witness pair must disagree on x after the run
  CHECK(w.s0.get("y") != w.s1.get("y"));
  CHECK(check_reads(xy("skip"), {}, {}, d).passed());
}

TEST_CASE("footprint of a branch that keeps x") {
  auto p = parse_program("vars h,x; if (h == 0) { x := 0 } else { skip }");
  auto d = make_domain(0, 2);
  CHECK_FALSE(check_footprint(p, {{"h"}, {"x"}}, d).passed());
  CHECK(check_footprint(p, {{"h", "x"}, {"x"}}, d).passed());
}

TEST_CASE("sum_up and sum_dn agree with the arithmetic oracle") {
  auto up = parse_program(testgen::read_corpus("sum_up.wl"));
  auto dn = parse_program(testgen::read_corpus("sum_dn.wl"));
  auto d = make_domain(-2, 4);
  auto filter = [](const Store& s) {
    auto lo = s.get("lo"), hi = s.get("hi");
    return s.get("r") <= 2 && 0 <= lo && lo <= hi && s.get("i") == 0;
  };
  auto v = check_equiv(up, dn, d, filter);
  CHECK(v.passed());
  CHECK(v.examined > 0);
  for (Value r = -2; r <= 2; ++r) {
    for (Value lo = 0; lo <= 4; ++lo) {
      for (Value hi = lo; hi <= 4; ++hi) {
        Store s(up.vars, {r, lo, hi, 0});
        auto out = run_metric(up, s);
        REQUIRE(out.normal());
        CHECK(out.store.get("r") == testgen::sum_oracle(r, lo, hi));
      }
    }
  }
}

TEST_CASE("equiv examples") {
  auto d = make_domain(0, 2);
  auto v = check_equiv(xy("x := 1"), xy("x := 2"), d);
  REQUIRE_FALSE(v.passed());
  CHECK(v.counterexample->left.store.get("x") == 1);
  CHECK(v.counterexample->right.store.get("x") == 2);
  CHECK(check_equiv(xy("x := y"), xy("x := y"), d).passed());
}

TEST_CASE("equiv treats matching divergence as agreement") {
  auto d = make_domain(0, 2);
  auto a = xy("while (x != 0) decr x { skip }");
  auto b = xy("while (x != 0) decr x { y := y }");
  CHECK(check_equiv(a, b, d).passed());
  CHECK_FALSE(check_equiv(a, xy("x := 0"), d).passed());
}

TEST_CASE("property: check_equiv is an equivalence") {
  Rng rng(21);
  auto d = make_domain(0, 2);
  for (int i = 0; i < 300; ++i) {
    auto vars = testgen::vars_named(3);
    Program p{vars, testgen::random_com(rng, *vars, 3)};
    Program q{vars, testgen::random_com(rng, *vars, 3)};
    Program p_skip{vars, make_seq(make_skip(), p.body)};
    Program p_skip2{vars, make_seq(p.body, make_skip())};
    try {
      CHECK(check_equiv(p, p, d).passed());
      CHECK(check_equiv(p, q, d).passed() == check_equiv(q, p, d).passed());
      bool ab = check_equiv(p, p_skip, d).passed();
      bool bc = check_equiv(p_skip, p_skip2, d).passed();
      CHECK(ab);
      CHECK(bc);
      CHECK(check_equiv(p, p_skip2, d).passed());
      if (check_equiv(p, q, d).passed()) CHECK(check_equiv(p_skip, q, d).passed());
    } catch (const ArithmeticOverflow&) {
    }
  }
}

TEST_CASE("property: sequencing unites footprints") {
  Rng rng(22);
  auto d = make_domain(0, 2);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto vars = testgen::vars_named(3);
    Program p1{vars, testgen::random_com(rng, *vars, 2)};
    Program p2{vars, testgen::random_com(rng, *vars, 2)};
    try {
      auto f1 = testgen::satisfied_footprints(p1, d);
      auto f2 = testgen::satisfied_footprints(p2, d);
      for (int k = 0; k < 4 && !f1.empty() && !f2.empty(); ++k) {
        const auto& a = f1[rng.below(f1.size())];
        const auto& b = f2[rng.below(f2.size())];
        Footprint both{unite(a.reads, b.reads), unite(a.writes, b.writes)};
        CHECK(check_footprint(sequence(p1, p2), both, d).passed());
        ++checked;
      }
    } catch (const ArithmeticOverflow&) {
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("transformation examples") {
  auto d = make_domain(0, 2);
  auto swap = check_transformation(Transformation::Swap, xy("x := 1"), xy("y := 2"), {{}, {"x"}},
                                   Footprint{{}, {"y"}}, d);
  CHECK(swap.status == TransformResult::Status::Pass);

  auto clash = check_transformation(Transformation::Swap, xy("x := y + 1"), xy("y := 0"), {{"y"}, {"x"}},
                                    Footprint{{}, {"y"}}, d);
  CHECK(clash.status == TransformResult::Status::PreconditionViolation);
  CHECK(clash.detail.find("{y}") != std::string::npos);

  auto redundant = check_transformation(Transformation::RedundantWrites, xy("x := 5"), xy("x := y"), {{}, {"x"}},
                                        Footprint{{"y"}, {"x"}}, d);
  CHECK(redundant.status == TransformResult::Status::Pass);

  auto idem = check_transformation(Transformation::Idempotence, xy("x := y"), std::nullopt, {{"y"}, {"x"}},
                                   std::nullopt, d);
  CHECK(idem.status == TransformResult::Status::Pass);

  auto not_idem = check_transformation(Transformation::Idempotence, xy("x := x + 1"), std::nullopt, {{"x"}, {"x"}},
                                       std::nullopt, d);
  CHECK(not_idem.status == TransformResult::Status::PreconditionViolation);
}

TEST_CASE("transformation rejects a footprint the program does not satisfy") {
  auto d = make_domain(0, 2);
  auto r = check_transformation(Transformation::Swap, xy("x := y"), xy("skip"), {{}, {"x"}}, Footprint{{}, {}}, d);
  CHECK(r.status != TransformResult::Status::Pass);
}

TEST_CASE("property: a passing transformation is an equivalence") {
  Rng rng(23);
  auto d = make_domain(0, 2);
  int passes = 0;
  for (int i = 0; i < 80; ++i) {
    auto vars = testgen::vars_named(3);
    Program p1{vars, testgen::random_loop_free(rng, *vars, 2)};
    Program p2{vars, testgen::random_loop_free(rng, *vars, 2)};
    auto f1 = testgen::satisfied_footprints(p1, d);
    auto f2 = testgen::satisfied_footprints(p2, d);
    if (f1.empty() || f2.empty()) continue;
    const auto& a = f1[rng.below(f1.size())];
    const auto& b = f2[rng.below(f2.size())];
    for (auto kind : {Transformation::Swap, Transformation::Idempotence, Transformation::RedundantWrites}) {
      bool unary = kind == Transformation::Idempotence;
      auto r = unary ? check_transformation(kind, p1, std::nullopt, a, std::nullopt, d)
                     : check_transformation(kind, p1, p2, a, b, d);
      if (r.status != TransformResult::Status::Pass) continue;
      ++passes;
      auto p12 = sequence(p1, p2);
      if (kind == Transformation::Swap) CHECK(check_equiv(p12, sequence(p2, p1), d).passed());
      if (kind == Transformation::Idempotence) CHECK(check_equiv(sequence(p1, p1), p1, d).passed());
      if (kind == Transformation::RedundantWrites) CHECK(check_equiv(p12, p2, d).passed());
    }
  }
  CHECK(passes > 20);
}

TEST_CASE("unify merges declarations") {
  auto a = parse_program("vars x; x := 1");
  auto b = parse_program("vars y,x; y := x");
  auto [ua, ub] = unify(a, b);
  CHECK(*ua.vars == VarList{"x", "y"});
  CHECK(*ub.vars == VarList{"x", "y"});
  auto out = run_metric(sequence(ua, ub), Store::zeros(ua.vars));
  CHECK(out.store.get("y") == 1);
}

TEST_CASE("var set text") {
  CHECK(parse_var_set("").empty());
  CHECK(parse_var_set("b,a") == VarSet{"a", "b"});
  CHECK(to_string(VarSet{"a", "b"}) == "{a,b}");
  CHECK(parse_transformation("redundant_writes") == Transformation::RedundantWrites);
  CHECK_FALSE(parse_transformation("fold").has_value());
}
