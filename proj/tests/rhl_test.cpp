#include <doctest.h>

#include "relcheck/rhl.hpp"
#include "support/gen.hpp"

using namespace relcheck;
using namespace relcheck::rhl;

namespace {

TestDomain small_domain(Value hi, std::uint64_t fuel = 8) {
  auto d = make_domain(0, hi);
  d.fuel_bound = fuel;
  return d;
}

FormulaPtr random_agreement(Rng& rng, const VarList& vars) {
  std::vector<std::string> names;
  for (const auto& v : vars) {
    if (rng.below(3) != 0) names.push_back(v);
  }
  return names.empty() ? f_true() : f_agree(names);
}

// A derivation following the structure of two same-shaped commands, with
// random intermediate formulas. Mismatched shapes fall back to a semantic leaf.
ProofNode derive(Rng& rng, const VarList& vars, const ComPtr& l, const ComPtr& r) {
  ProofNode n;
  n.left = l;
  n.right = r;
  if (l->node.index() != r->node.index()) {
    n.rule = Rule::Semantic;
    return n;
  }
  if (rng.below(8) == 0) {
    n.rule = Rule::RConseq;
    n.premises.push_back(derive(rng, vars, l, r));
    n.premises[0].pre = random_agreement(rng, vars);
    return n;
  }
  if (std::holds_alternative<Skip>(l->node)) {
    n.rule = Rule::RSkip;
  } else if (std::holds_alternative<Assign>(l->node)) {
    n.rule = Rule::RAssign;
  } else if (const auto* sl = std::get_if<Seq>(&l->node)) {
    const auto& sr = std::get<Seq>(r->node);
    n.rule = Rule::RSeq;
    n.arg = random_agreement(rng, vars);
    n.premises.push_back(derive(rng, vars, sl->first, sr.first));
    n.premises.push_back(derive(rng, vars, sl->second, sr.second));
  } else if (const auto* il = std::get_if<If>(&l->node)) {
    const auto& ir = std::get<If>(r->node);
    n.rule = Rule::RIf;
    n.premises.push_back(derive(rng, vars, il->then_branch, ir.then_branch));
    n.premises.push_back(derive(rng, vars, il->else_branch, ir.else_branch));
  } else {
    const auto& wl = std::get<While>(l->node);
    const auto& wr = std::get<While>(r->node);
    n.rule = Rule::RWhile;
    n.arg = random_agreement(rng, vars);
    n.premises.push_back(derive(rng, vars, wl.body, wr.body));
  }
  return n;
}

ProofReport check_text(const std::string& text, const TestDomain& d) { return check_proof(parse_proof_script(text), d); }

}  // namespace

TEST_CASE("formula evaluation") {
  auto vars = make_vars({"x"});
  auto f = parse_formula("(= (L x) (R x))");
  CHECK(eval_formula(*f, Store(vars, {1}), Store(vars, {1})));
  CHECK_FALSE(eval_formula(*f, Store(vars, {1}), Store(vars, {2})));
  CHECK(eval_formula(*f_true(), Store(vars, {1}), Store(vars, {2})));
  CHECK_FALSE(eval_formula(*f_false(), Store(vars, {1}), Store(vars, {2})));
  auto g = parse_formula("(and (< (L x) (R x)) (>= (+ (L x) 1) (R x)))");
  CHECK(eval_formula(*g, Store(vars, {1}), Store(vars, {2})));
  CHECK_FALSE(eval_formula(*g, Store(vars, {1}), Store(vars, {3})));
  CHECK_THROWS_AS(parse_formula("(= (L x))"), ParseError);
}

TEST_CASE("formula printing round-trips") {
  auto f = parse_formula("(or (not (= (L x) 0)) (iff (!= (R y) 1) (<= (* (L x) 2) (- (R y) (L x)))))");
  auto g = parse_formula(to_string(*f));
  CHECK(to_string(*g) == to_string(*f));
}

TEST_CASE("property: guard abstraction matches evaluation") {
  Rng rng(31);
  auto vars = testgen::vars_named(2);
  auto stores = all_stores(vars, make_domain(-1, 2));
  for (int i = 0; i < 200; ++i) {
    auto g = testgen::random_exp(rng, *vars, 2);
    auto bl = guard_holds(Side::Left, *g);
    auto br = guard_holds(Side::Right, *g);
    for (const auto& sl : stores) {
      for (const auto& sr : stores) {
        CHECK(eval_formula(*bl, sl, sr) == (eval_exp(sl, *g) != 0));
        CHECK(eval_formula(*br, sl, sr) == (eval_exp(sr, *g) != 0));
      }
    }
  }
}

TEST_CASE("semtest examples") {
  auto vars = make_vars({"x"});
  auto skip = Program{vars, make_skip()};
  CHECK(semtest_judgement({skip, skip, f_true(), f_true()}, small_domain(1)).status == SemtestResult::Status::Pass);

  Program zero{vars, parse_com("x := 0", *vars)};
  auto r = semtest_judgement({zero, skip, f_true(), f_agree({"x"})}, small_domain(1));
  REQUIRE(r.status == SemtestResult::Status::Counterexample);
  CHECK(r.right->get("x") == 1);
}

TEST_CASE("semtest flags one-sided termination as inconclusive") {
  auto vars = make_vars({"x"});
  Program spin{vars, parse_com("while (x != 0) { skip }", *vars)};
  Program skip{vars, make_skip()};
  auto r = semtest_judgement({spin, skip, f_true(), f_true()}, small_domain(1));
  CHECK(r.status == SemtestResult::Status::InconclusiveTermination);
}

TEST_CASE("hoisting proof checks") {
  auto tree = parse_proof_script(testgen::read_corpus("hoist.proof"));
  auto report = check_proof(tree, small_domain(2));
  CHECK(report.accepted());
  CHECK(report.nodes.size() == 9);
  for (const auto& n : report.nodes) CHECK_MESSAGE(n.status == NodeReport::Status::Ok, n.path << " " << n.detail);

  auto left = parse_program(testgen::read_corpus("hoist_left.wl"));
  auto right = parse_program(testgen::read_corpus("hoist_right.wl"));
  auto phi = parse_formula("(and (= (L I) (R I)) (= (L N) (R N)) (= (L Y) (R Y)))");
  auto sem = semtest_judgement({left, right, phi, phi}, small_domain(2));
  CHECK(sem.status == SemtestResult::Status::Pass);
}

TEST_CASE("hoisting fails without the dead assignment invariant") {
  auto text = testgen::read_corpus("hoist.proof");
  const std::string phi1 = "(define PHI1 (and PHI (= (R X) (+ (R Y) 1))))";
  auto pos = text.find(phi1);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, phi1.size(), "(define PHI1 PHI)");
  auto report = check_text(text, small_domain(2));
  CHECK(report.has_counterexample());
}

TEST_CASE("rskip with a stronger post") {
  auto report = check_text("(proof (vars x) (rskip :left \"skip\" :right \"skip\" :pre true :post (= (L x) (R x))))",
                           small_domain(2));
  REQUIRE(report.nodes.size() == 1);
  CHECK(report.nodes[0].status == NodeReport::Status::Counterexample);
  REQUIRE(report.nodes[0].left);
  CHECK(report.nodes[0].left->get("x") != report.nodes[0].right->get("x"));
}

TEST_CASE("every rule has a checking and a failing instance") {
  auto d = small_domain(2);
  auto cases = testgen::rule_cases();
  CHECK(cases.size() == 13);
  for (const auto& c : cases) {
    INFO(script_name(c.rule));
    auto good = parse_proof_script(c.positive);
    CHECK(good.root.rule == c.rule);
    CHECK(check_proof(good, d).accepted());
    auto bad = check_proof(parse_proof_script(c.negative), d);
    CHECK(bad.has_counterexample());
  }
}

TEST_CASE("malformed proofs") {
  auto d = small_domain(1);
  CHECK_THROWS_AS(check_text("(proof (vars x) (rassign :left \"skip\" :right \"x := 1\" :pre true :post true))", d),
                  MalformedProof);
  CHECK_THROWS_AS(check_text("(proof (vars x) (rseq :left \"x := 1; x := 2\" :right \"x := 1; x := 2\" "
                             ":pre true :post true (rassign) (rassign)))",
                             d),
                  MalformedProof);
  CHECK_THROWS_AS(check_text("(proof (vars x) (rskip :left \"skip\" :right \"skip\" :pre true :post true (rskip)))", d),
                  MalformedProof);
  CHECK_THROWS_AS(parse_proof_script("(proof (vars x) (bogus))"), ParseError);
  CHECK_THROWS_AS(parse_proof_script("(proof (vars x) (rskip :left \"y := 1\"))"), UndeclaredVariable);
}

TEST_CASE("different variable lists on each side") {
  auto report = check_text(
      "(proof (left-vars a) (right-vars b) (rassign :left \"a := a + 1\" :right \"b := b + 1\" "
      ":pre (= (L a) (R b)) :post (= (L a) (R b))))",
      small_domain(2));
  CHECK(report.accepted());
}

TEST_CASE("property: accepted proofs are semantically valid") {
  Rng rng(32);
  auto d = small_domain(2, 6);
  int accepted = 0;
  for (int i = 0; i < 400; ++i) {
    auto vars = testgen::vars_named(2);
    auto l = testgen::random_com(rng, *vars, 3);
    auto r = rng.below(2) ? l : testgen::random_com(rng, *vars, 3);
    ProofTree tree{vars, vars, derive(rng, *vars, l, r)};
    tree.root.pre = random_agreement(rng, *vars);
    tree.root.post = random_agreement(rng, *vars);
    try {
      auto report = check_proof(tree, d);
      if (!report.accepted()) continue;
      ++accepted;
      auto sem = semtest_judgement({Program{vars, l}, Program{vars, r}, tree.root.pre, tree.root.post}, d);
      CHECK(sem.status != SemtestResult::Status::Counterexample);
    } catch (const ArithmeticOverflow&) {
    }
  }
  CHECK(accepted > 40);
}
