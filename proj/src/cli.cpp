#include "relcheck/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "relcheck/domain.hpp"
#include "relcheck/ifc.hpp"
#include "relcheck/memo.hpp"
#include "relcheck/prob.hpp"
#include "relcheck/relsem.hpp"
#include "relcheck/report.hpp"
#include "relcheck/rhl.hpp"
#include "relcheck/unionfind.hpp"

namespace relcheck {

namespace {

struct Globals {
  bool json = false;
  std::uint64_t seed = 42;
  std::uint64_t budget = kDefaultBudget;
  std::string values;
};

// Names the file that failed to parse.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto with_file(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + to_string(e.loc()) + ": " + e.what());
  }
}

Program load_program(const std::string& path) {
  return with_file(path, [](const std::string& text) { return parse_program(text); });
}

TestDomain domain(const Globals& g, const std::string& fallback = "0..2") {
  auto d = parse_domain(g.values.empty() ? fallback : g.values);
  d.budget = g.budget;
  return d;
}

Report named(std::string tool) {
  Report r;
  r.tool = std::move(tool);
  return r;
}

Finding finding(std::string kind, std::string message, std::vector<StoreRecord> stores = {},
                std::optional<SourceLoc> loc = std::nullopt) {
  return Finding{std::move(kind), std::move(message), loc, std::move(stores)};
}

Report fail_with(Report r, Finding f) {
  r.status = Status::Fail;
  r.findings.push_back(std::move(f));
  return r;
}

std::string outcome_text(const Outcome& o) {
  return o.normal() ? "Normal" : "OutOfFuel";
}

// "a,b:c" -> reads {a,b}, writes {c}
Footprint parse_footprint(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("footprint '" + text + "' is not READS:WRITES");
  return Footprint{parse_var_set(text.substr(0, colon)), parse_var_set(text.substr(colon + 1))};
}

// ---- core-lang / relsem -------------------------------------------------

Report cmd_run(const std::string& file, const std::string& store_text, std::int64_t fuel) {
  Report r = named("run");
  auto p = load_program(file);
  Store s = store_text.empty() ? Store::zeros(p.vars) : parse_store(store_text, p.vars);
  if (fuel >= 0) {
    auto res = run_fuel(p, s, static_cast<std::uint64_t>(fuel));
    if (res.completed) {
      r.findings.push_back(finding("result", "completed within fuel " + std::to_string(fuel), {record("final", res.final)}));
    } else {
      r.status = Status::Inconclusive;
      r.findings.push_back(finding("warning", "fuel " + std::to_string(fuel) + " exhausted", {record("at", res.final)}));
    }
    return r;
  }
  auto out = run_metric(p, s);
  if (out.normal()) {
    r.findings.push_back(finding("result", "terminated normally", {record("final", out.store)}));
    return r;
  }
  return fail_with(r, finding("out-of-fuel", "a loop metric failed to decrease", {record("at", out.store)}));
}

Report cmd_equiv(const Globals& g, const std::string& f1, const std::string& f2, const std::string& assume) {
  Report r = named("equiv");
  auto [p1, p2] = unify(load_program(f1), load_program(f2));
  auto d = domain(g);
  StoreFilter filter;
  if (!assume.empty()) {
    auto e = parse_exp(assume, *p1.vars);
    filter = [e](const Store& s) { return eval_exp(s, *e) != 0; };
    r.notes.push_back("restricted to stores where " + to_string(*e) + " != 0");
  }
  auto v = check_equiv(p1, p2, d, filter);
  r.evidence = exhaustive(describe(d), p1.vars->size(), v.examined, "stores");
  r.notes.push_back("bounded evidence over the test domain");
  if (v.passed()) return r;
  const auto& w = *v.counterexample;
  return fail_with(r, finding("counterexample",
                              "runs differ (" + outcome_text(w.left) + " vs " + outcome_text(w.right) + ")",
                              {record("s", w.store), record("left", w.left.store), record("right", w.right.store)}));
}

Report cmd_footprint(const Globals& g, const std::string& file, const std::string& reads, const std::string& writes) {
  Report r = named("footprint");
  auto p = load_program(file);
  auto d = domain(g);
  Footprint fp{parse_var_set(reads), parse_var_set(writes)};
  auto res = check_footprint(p, fp, d);
  std::uint64_t examined = res.writes.examined + (res.reads ? res.reads->examined : 0);
  r.evidence = exhaustive(describe(d), p.vars->size(), examined, "stores and store pairs");
  if (!res.writes.passed()) {
    const auto& w = *res.writes.counterexample;
    return fail_with(r, finding("counterexample", "variable " + w.var + " outside the write set " +
                                                      to_string(fp.writes) + " is modified",
                                {record("s", w.store)}));
  }
  if (!res.reads->passed()) {
    const auto& w = *res.reads->counterexample;
    return fail_with(r, finding("counterexample", "stores agreeing on " + to_string(fp.reads) +
                                                      " end up disagreeing on " + w.var,
                                {record("s0", w.s0), record("s1", w.s1)}));
  }
  return r;
}

Report cmd_transform(const Globals& g, const std::string& kind_text, const std::vector<std::string>& files,
                     const std::string& fp1_text, const std::string& fp2_text) {
  Report r = named("transform");
  auto kind = parse_transformation(kind_text);
  if (!kind) throw UsageError("unknown transformation '" + kind_text + "' (swap, idem, redundant_writes)");
  bool binary = *kind != Transformation::Idempotence;
  if (files.size() != (binary ? 2U : 1U)) {
    throw UsageError(kind_text + " takes " + (binary ? "two programs" : "one program"));
  }
  if (fp1_text.empty() || (binary && fp2_text.empty())) throw UsageError("footprints are required (--fp1, --fp2)");
  auto p1 = load_program(files[0]);
  std::optional<Program> p2;
  std::optional<Footprint> fp2;
  if (binary) {
    auto [a, b] = unify(p1, load_program(files[1]));
    p1 = a;
    p2 = b;
    fp2 = parse_footprint(fp2_text);
  }
  auto d = domain(g);
  auto res = check_transformation(*kind, p1, p2, parse_footprint(fp1_text), fp2, d);
  r.evidence = exhaustive(describe(d), p1.vars->size(), res.examined, "stores");
  switch (res.status) {
    case TransformResult::Status::Pass: return r;
    case TransformResult::Status::PreconditionViolation:
      return fail_with(r, finding("precondition-violation", res.detail,
                                  res.store ? std::vector{record("s", *res.store)} : std::vector<StoreRecord>{}));
    case TransformResult::Status::Counterexample:
      return fail_with(r, finding("counterexample", res.detail,
                                  res.store ? std::vector{record("s", *res.store)} : std::vector<StoreRecord>{}));
  }
  return r;
}

// ---- rhl ----------------------------------------------------------------

Report cmd_rhl_check(const Globals& g, const std::string& file, std::uint64_t fuel) {
  Report r = named("rhl check");
  auto tree = with_file(file, [](const std::string& text) { return rhl::parse_proof_script(text); });
  auto d = domain(g);
  d.fuel_bound = fuel;
  auto rep = rhl::check_proof(tree, d);
  r.evidence = exhaustive(describe(d), 0, rep.pairs_examined, "store pairs");
  bool inconclusive = false;
  for (const auto& n : rep.nodes) {
    std::string status = n.status == rhl::NodeReport::Status::Ok             ? "ok"
                         : n.status == rhl::NodeReport::Status::Counterexample ? "counterexample"
                                                                              : "inconclusive";
    r.notes.push_back(n.path + " " + rhl::to_string(n.rule) + " " + status);
    if (n.status == rhl::NodeReport::Status::Ok) continue;
    std::vector<StoreRecord> stores;
    if (n.left) stores.push_back(record("sl", *n.left));
    if (n.right) stores.push_back(record("sr", *n.right));
    bool cex = n.status == rhl::NodeReport::Status::Counterexample;
    inconclusive = inconclusive || !cex;
    r.findings.push_back(finding(cex ? "counterexample" : "warning",
                                 n.path + " " + rhl::to_string(n.rule) + ": " + n.detail, stores, n.loc));
  }
  r.notes.push_back("fuel bound " + std::to_string(fuel) + "; side conditions are bounded evidence");
  if (rep.has_counterexample()) {
    r.status = Status::Fail;
  } else if (inconclusive) {
    r.status = Status::Inconclusive;
  }
  return r;
}

Report cmd_rhl_semtest(const Globals& g, const std::string& left, const std::string& right, const std::string& pre,
                       const std::string& post, std::uint64_t fuel) {
  Report r = named("rhl semtest");
  rhl::Judgement j{load_program(left), load_program(right), rhl::parse_formula(pre), rhl::parse_formula(post)};
  auto d = domain(g);
  d.fuel_bound = fuel;
  auto res = rhl::semtest_judgement(j, d);
  r.evidence = exhaustive(describe(d), j.left.vars->size() + j.right.vars->size(), res.examined, "store pairs");
  std::vector<StoreRecord> stores;
  if (res.left) stores.push_back(record("sl", *res.left));
  if (res.right) stores.push_back(record("sr", *res.right));
  switch (res.status) {
    case rhl::SemtestResult::Status::Pass: break;
    case rhl::SemtestResult::Status::Counterexample:
      return fail_with(r, finding("counterexample", res.detail, stores));
    case rhl::SemtestResult::Status::InconclusiveTermination:
      r.status = Status::Inconclusive;
      r.findings.push_back(finding("warning", res.detail, stores));
      break;
  }
  r.notes.push_back("fuel bound " + std::to_string(fuel));
  return r;
}

// ---- ifc ----------------------------------------------------------------

struct IfcInput {
  Program program;
  ifc::LabelEnv env;
};

IfcInput load_ifc(const std::string& file, const std::string& labels) {
  auto p = load_program(file);
  if (labels.empty()) throw UsageError("--labels is required");
  return {p, ifc::parse_labels(labels, p.vars)};
}

ifc::Label label_arg(const std::string& text) {
  auto l = ifc::parse_label(text);
  if (!l) throw UsageError("unknown label '" + text + "' (Low or High)");
  return *l;
}

Report type_result(Report r, const ifc::TcResult& res) {
  if (const auto* l = std::get_if<ifc::Label>(&res)) {
    r.notes.push_back("typable at pc " + ifc::to_string(*l));
    return r;
  }
  const auto& e = std::get<ifc::TypeError>(res);
  return fail_with(r, finding("type-error", e.detail + " in '" + e.command + "'", {}, e.loc));
}

Report cmd_ifc_check(const std::string& file, const std::string& labels) {
  auto in = load_ifc(file, labels);
  return type_result(named("ifc check"), ifc::tc_com(in.env, *in.program.body));
}

Finding ni_finding(const ifc::NiWitness& w, ifc::Label level) {
  if (w.kind == ifc::NiWitness::Kind::Ni) {
    return finding("counterexample", "low-equivalent stores end up differing on " + w.var,
                   {record("s0", w.s0), record("s1", *w.s1)});
  }
  return finding("counterexample", "variable " + w.var + " below " + ifc::to_string(level) + " is modified",
                 {record("s", w.s0)});
}

Report cmd_ifc_semcheck(const Globals& g, const std::string& file, const std::string& labels,
                        const std::string& level_text) {
  Report r = named("ifc semcheck");
  auto in = load_ifc(file, labels);
  auto level = label_arg(level_text);
  auto d = domain(g);
  auto v = ifc::ni_com_check(in.env, *in.program.body, level, d);
  r.evidence = exhaustive(describe(d), 2 * in.program.vars->size(), v.examined, "store pairs");
  if (v.passed()) return r;
  return fail_with(r, ni_finding(*v.counterexample, level));
}

Report cmd_ifc_hybrid(const Globals& g, const std::string& file, const std::string& labels,
                      const std::vector<std::string>& trusted_args) {
  Report r = named("ifc hybrid");
  auto in = load_ifc(file, labels);
  std::vector<ifc::TrustedEntry> trusted;
  std::uint64_t examined = 0;
  bool checked_any = false;
  auto d = domain(g);
  for (const auto& arg : trusted_args) {
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    bool checked = parts.size() >= 3 && parts.back() == "checked";
    if (checked) parts.pop_back();
    if (parts.size() < 2) throw UsageError("trusted entry '" + arg + "' is not FILE:LABEL[:checked]");
    auto label = label_arg(parts.back());
    parts.pop_back();
    std::string path = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) path += ":" + parts[i];
    auto command = with_file(path, [&](const std::string& text) {
      auto trimmed = text.substr(std::min(text.find_first_not_of(" \t\r\n"), text.size()));
      if (trimmed.rfind("vars", 0) == 0) return rebind(parse_program(text).body, *in.program.vars);
      return parse_com(text, *in.program.vars);
    });
    ifc::TrustedEntry entry{command, label, checked ? ifc::TrustedEntry::Evidence::SemanticallyChecked
                                                    : ifc::TrustedEntry::Evidence::Assumed,
                            checked ? std::optional<TestDomain>(d) : std::nullopt};
    if (checked) {
      checked_any = true;
      auto v = ifc::verify_trusted(in.env, entry);
      examined += v.examined;
      if (!v.passed()) {
        auto f = ni_finding(*v.counterexample, label);
        f.message = "trusted entry " + path + " fails its semantic check: " + f.message;
        return fail_with(r, f);
      }
      r.notes.push_back("trusted " + path + " at " + ifc::to_string(label) + " checked over " + describe(d));
    } else {
      r.notes.push_back("trusted " + path + " at " + ifc::to_string(label) + " assumed");
    }
    trusted.push_back(std::move(entry));
  }
  if (checked_any) r.evidence = exhaustive(describe(d), 2 * in.program.vars->size(), examined, "store pairs");
  return type_result(r, ifc::tc_com_hybrid(in.env, *in.program.body, trusted));
}

Report cmd_ifc_monitor(const std::string& file, const std::string& labels, const std::string& pc_text,
                       const std::string& store_text) {
  Report r = named("ifc monitor");
  auto in = load_ifc(file, labels);
  Store s = store_text.empty() ? Store::zeros(in.program.vars) : parse_store(store_text, in.program.vars);
  auto out = ifc::monitor_run(in.env, label_arg(pc_text), *in.program.body, s);
  switch (out.kind) {
    case ifc::MonitorOutcome::Kind::Normal:
      r.findings.push_back(finding("result", "terminated normally", {record("final", out.store)}));
      return r;
    case ifc::MonitorOutcome::Kind::Violation:
      return fail_with(r, finding("violation", "monitor rejected an assignment", {record("at", out.store)}, out.at));
    case ifc::MonitorOutcome::Kind::OutOfFuel:
      r.status = Status::Inconclusive;
      r.findings.push_back(finding("warning", "a loop metric failed to decrease", {record("at", out.store)}));
      return r;
  }
  return r;
}

Report cmd_ifc_declass(const Globals& g, const std::string& file, const std::string& labels,
                       const std::vector<std::string>& declass_text) {
  Report r = named("ifc declass");
  auto in = load_ifc(file, labels);
  std::vector<ExpPtr> declass;
  for (const auto& t : declass_text) {
    declass.push_back(parse_exp(t, *in.program.vars));
    r.notes.push_back("declassified " + to_string(*declass.back()));
  }
  auto d = domain(g);
  auto v = ifc::delimited_release_check(in.env, in.program, declass, d);
  r.evidence = exhaustive(describe(d), 2 * in.program.vars->size(), v.examined, "store pairs");
  if (v.passed()) return r;
  return fail_with(r, finding("counterexample", "runs agreeing on low inputs and released values end low-inequivalent",
                              {record("s0", v.counterexample->s0), record("s1", v.counterexample->s1)}));
}

// ---- prob ---------------------------------------------------------------

std::string tape_domain(unsigned q) { return "{0.." + std::to_string((1U << q) - 1) + "}"; }

Report cmd_prob_otp(unsigned q, std::size_t s, std::int64_t m0, std::int64_t m1, std::int64_t c, bool all,
                    std::uint64_t cap) {
  Report r = named("prob otp");
  auto tapes = prob::tape_count(q, s, cap);
  std::vector<std::array<std::uint64_t, 3>> cases;
  const std::uint64_t top = std::uint64_t{1} << q;
  if (all) {
    for (std::uint64_t a = 0; a < top; ++a)
      for (std::uint64_t b = 0; b < top; ++b)
        for (std::uint64_t k = 0; k < top; ++k) cases.push_back({a, b, k});
  } else {
    if (m0 < 0 || m1 < 0 || c < 0) throw UsageError("give --m0, --m1 and --c, or --all");
    cases.push_back({static_cast<std::uint64_t>(m0), static_cast<std::uint64_t>(m1), static_cast<std::uint64_t>(c)});
  }
  for (const auto& [a, b, k] : cases) {
    auto bm0 = prob::make_bv(q, a), bm1 = prob::make_bv(q, b), bc = prob::make_bv(q, k);
    auto res = prob::check_otp_secrecy(q, s, bm0, bm1, bc, cap);
    std::string line = "m0=" + prob::to_string(bm0) + " m1=" + prob::to_string(bm1) + " c=" + prob::to_string(bc) +
                       ": Pr = " + prob::to_string(res.pr0) + " vs " + prob::to_string(res.pr1);
    if (!res.passed()) {
      r.status = Status::Fail;
      r.findings.push_back(finding("counterexample", "masses differ, " + line));
    } else {
      r.notes.push_back(line);
    }
  }
  r.evidence = exhaustive(tape_domain(q), s, tapes * 2 * cases.size(), "tape runs");
  return r;
}

prob::Pred parse_pred(const std::string& text, unsigned q) {
  if (text == "some") return [](const std::optional<prob::BitVec>& v) { return v.has_value(); };
  if (text == "none") return [](const std::optional<prob::BitVec>& v) { return !v.has_value(); };
  if (text.rfind("point:", 0) == 0) {
    auto v = std::stoull(text.substr(6));
    return prob::point(prob::make_bv(q, v));
  }
  throw UsageError("unknown predicate '" + text + "' (point:V, some, none)");
}

Report cmd_prob_mass(const std::string& file, const std::string& pred_text, unsigned q, std::size_t s,
                     const std::vector<std::string>& params_text, std::uint64_t cap) {
  Report r = named("prob mass");
  auto p = with_file(file, [&](const std::string& text) { return prob::parse_rand_prog(text, q); });
  prob::Params params;
  for (const auto& group : params_text) {
    std::stringstream ss(group);
    for (std::string item; std::getline(ss, item, ',');) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("parameter '" + item + "' is not NAME=VALUE");
      params[item.substr(0, eq)] = prob::make_bv(q, std::stoull(item.substr(eq + 1)));
    }
  }
  auto pred = parse_pred(pred_text, q);
  auto m = prob::mass(*p, params, pred, q, s, cap);
  auto tapes = prob::tape_count(q, s, cap);
  r.evidence = exhaustive(tape_domain(q), s, tapes, "tapes");
  r.notes.push_back("mass = " + std::to_string(m));
  r.notes.push_back("Pr = " + prob::to_string(prob::make_rational(m, tapes)));
  return r;
}

// ---- memo / unionfind ---------------------------------------------------

std::optional<memo::RefFn> find_function(const std::string& name) {
  if (name == "square") return memo::RefFn([](memo::Nat x) { return static_cast<Value>(x * x); });
  if (auto sk = memo::find_skeleton(name)) {
    return memo::RefFn([sk = *sk](memo::Nat x) { return memo::fixp(sk, x); });
  }
  return std::nullopt;
}

Report cmd_memo_computes(const Globals& g, const std::string& skeleton, const std::string& function,
                         std::uint64_t bound, std::uint64_t trials) {
  Report r = named("memo computes");
  memo::MemoFn memoized;
  memo::RefFn reference;
  if (!skeleton.empty()) {
    auto sk = memo::find_skeleton(skeleton);
    if (!sk) throw UsageError("unknown skeleton '" + skeleton + "'");
    memoized = [sk = *sk](memo::Nat x, const memo::MemoState& st) { return memo::memoize_rec(sk, x, st); };
    reference = [sk = *sk](memo::Nat x) { return memo::fixp(sk, x); };
    r.notes.push_back("memoize_rec(" + skeleton + ") against fixp(" + skeleton + ")");
  } else if (!function.empty()) {
    auto f = find_function(function);
    if (!f) throw UsageError("unknown function '" + function + "'");
    reference = *f;
    memoized = [f = *f](memo::Nat x, const memo::MemoState& st) { return memo::memoize(f, x, st); };
    r.notes.push_back("memoize(" + function + ") against " + function);
  } else {
    throw UsageError("give --skeleton or --function");
  }
  auto v = memo::computes_check(memoized, reference, bound, memo::subset_sampler(reference, bound), trials, g.seed);
  r.evidence = randomized(trials, g.seed);
  r.notes.push_back("every x in [0," + std::to_string(bound) + "] per sampled state, " + std::to_string(v.examined) +
                    " calls");
  if (v.passed()) return r;
  const auto& w = *v.counterexample;
  return fail_with(r, finding("counterexample", "x=" + std::to_string(w.x) + " from state " + memo::to_string(w.state) +
                                                    ": " + w.reason + " (got " + std::to_string(w.got) +
                                                    ", expected " + std::to_string(w.expected) + ")"));
}

Report cmd_uf_refine(const Globals& g, const std::string& check, std::size_t n, bool exhaustive_flag,
                     std::int64_t trials, std::size_t depth) {
  Report r = named("unionfind refine");
  uf::RefineParams params;
  params.exhaustive = exhaustive_flag || trials < 0;
  params.max_depth = depth;
  params.trials = trials < 0 ? 0 : static_cast<std::uint64_t>(trials);
  params.seed = g.seed;
  Verdict<uf::RefineWitness> v;
  if (check == "rank") {
    v = uf::rank_independence_check(n, params);
  } else if (check == "union-rank") {
    v = uf::union_by_rank_refinement_check(n, params);
  } else if (check == "compress") {
    v = uf::find_compress_refinement_check(n, params);
  } else {
    throw UsageError("unknown check '" + check + "' (rank, union-rank, compress)");
  }
  if (params.exhaustive) {
    r.evidence = exhaustive("forests of depth <= " + std::to_string(depth) + " on up to " + std::to_string(n) +
                                " elements",
                            0, v.examined, "forests");
  } else {
    r.evidence = randomized(params.trials, params.seed);
  }
  if (v.passed()) return r;
  const auto& w = *v.counterexample;
  std::string args;
  for (auto a : w.args) args += (args.empty() ? "" : ",") + std::to_string(a);
  return fail_with(r, finding("counterexample", w.detail + " at (" + args + "): " + uf::to_string(w.first) + " / " +
                                                    uf::to_string(w.second)));
}

Report cmd_demo_memo(const std::string& skeleton, std::uint64_t x) {
  Report r = named("demo memo");
  auto sk = memo::find_skeleton(skeleton);
  if (!sk) throw UsageError("unknown skeleton '" + skeleton + "'");
  memo::CallTrace trace;
  auto [value, state] = memo::memoize_rec(*sk, x, {}, &trace);
  r.notes.push_back(skeleton + "(" + std::to_string(x) + ") = " + std::to_string(value));
  r.notes.push_back("cache size " + std::to_string(state.size()));
  r.notes.push_back("skeleton evaluations " + std::to_string(trace.skeleton_evals) + ", oracle calls " +
                    std::to_string(trace.oracle_calls) + ", cache hits " + std::to_string(trace.cache_hits));
  memo::CallTrace again;
  memo::memoize_rec(*sk, x, state, &again);
  r.notes.push_back("rerun from the produced state: " + std::to_string(again.skeleton_evals) +
                    " skeleton evaluations");
  return r;
}

Report cmd_demo_uf(const Globals& g, std::size_t n, std::uint64_t ops) {
  Report r = named("demo unionfind");
  r.evidence = randomized(1, g.seed);
  Rng rng(g.seed);
  auto forest = uf::fresh(n);
  for (std::uint64_t k = 0; k < ops && n > 0; ++k) {
    std::string step;
    auto a = rng.below(n), b = rng.below(n);
    switch (rng.below(3)) {
      case 0:
        forest = uf::union_by_rank(forest, a, b);
        step = "union_by_rank(" + std::to_string(a) + "," + std::to_string(b) + ")";
        break;
      case 1:
        forest = uf::unite(forest, a, b);
        step = "union(" + std::to_string(a) + "," + std::to_string(b) + ")";
        break;
      default: {
        auto [root, next] = uf::find_compress(forest, a);
        forest = next;
        step = "find_compress(" + std::to_string(a) + ") = " + std::to_string(root);
      }
    }
    r.notes.push_back(step + " -> " + uf::to_string(forest));
    if (auto bad = uf::check_invariants(forest)) return fail_with(r, finding("invariant", *bad));
  }
  return r;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational verification workbench for a small WHILE language", "relcheck"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Emit the report as JSON");
  app.add_option("--seed", g.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--budget", g.budget, "Enumeration budget")->capture_default_str();
  app.add_option("--values", g.values, "Test domain, LO..HI or a,b,c");

  std::vector<std::pair<CLI::App*, std::function<Report()>>> handlers;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    return parent->add_subcommand(name, desc);
  };

  std::string file, file2, store_text, pre = "true", post = "true", labels, level = "Low", pc = "Low";
  std::string reads, writes, fp1, fp2, kind, assume, check = "rank", skeleton, function, pred = "point:0";
  std::vector<std::string> files, trusted, declass, params;
  std::int64_t fuel_opt = -1, m0 = -1, m1 = -1, c = -1, trials_opt = -1;
  std::uint64_t fuel = 8, bound = 15, trials = 100, x = 20, ops = 20, cap = prob::kTapeCap;
  unsigned q = 1;
  std::size_t tape = 1, n = 5, depth = 2;
  bool all = false, exhaustive_flag = false;

  auto* run = leaf(&app, "run", "Run a program in metric mode, or fuel mode with --fuel");
  run->add_option("file", file)->required();
  run->add_option("--store", store_text, "Initial store, x=1,y=2");
  run->add_option("--fuel", fuel_opt, "Run in fuel mode");
  handlers.emplace_back(run, [&] { return cmd_run(file, store_text, fuel_opt); });

  auto* equiv = leaf(&app, "equiv", "Check two programs equivalent over the test domain");
  equiv->add_option("left", file)->required();
  equiv->add_option("right", file2)->required();
  equiv->add_option("--assume", assume, "Only stores where this expression is nonzero");
  handlers.emplace_back(equiv, [&] { return cmd_equiv(g, file, file2, assume); });

  auto* fp = leaf(&app, "footprint", "Validate a declared read/write footprint");
  fp->add_option("file", file)->required();
  fp->add_option("--reads", reads, "Read set, a,b");
  fp->add_option("--writes", writes, "Write set, a,b");
  handlers.emplace_back(fp, [&] { return cmd_footprint(g, file, reads, writes); });

  auto* tr = leaf(&app, "transform", "Validate a footprint-based transformation");
  tr->add_option("kind", kind, "swap, idem or redundant_writes")->required();
  tr->add_option("files", files, "One or two programs")->required();
  tr->add_option("--fp1", fp1, "Footprint of the first program, READS:WRITES");
  tr->add_option("--fp2", fp2, "Footprint of the second program, READS:WRITES");
  handlers.emplace_back(tr, [&] { return cmd_transform(g, kind, files, fp1, fp2); });

  auto* rhl_cmd = leaf(&app, "rhl", "Relational Hoare logic");
  rhl_cmd->require_subcommand(1);
  auto* rhl_check = leaf(rhl_cmd, "check", "Check a proof script");
  rhl_check->add_option("proof", file)->required();
  rhl_check->add_option("--fuel", fuel)->capture_default_str();
  handlers.emplace_back(rhl_check, [&] { return cmd_rhl_check(g, file, fuel); });
  auto* rhl_sem = leaf(rhl_cmd, "semtest", "Test a judgement by enumeration");
  rhl_sem->add_option("--left", file)->required();
  rhl_sem->add_option("--right", file2)->required();
  rhl_sem->add_option("--pre", pre)->capture_default_str();
  rhl_sem->add_option("--post", post)->capture_default_str();
  rhl_sem->add_option("--fuel", fuel)->capture_default_str();
  handlers.emplace_back(rhl_sem, [&] { return cmd_rhl_semtest(g, file, file2, pre, post, fuel); });

  auto* ifc_cmd = leaf(&app, "ifc", "Information-flow control");
  ifc_cmd->require_subcommand(1);
  auto labels_opt = [&](CLI::App* a) { a->add_option("--labels", labels, "var=Low|High for every variable")->required(); };
  auto* ifc_check = leaf(ifc_cmd, "check", "Typecheck a program");
  ifc_check->add_option("file", file)->required();
  labels_opt(ifc_check);
  handlers.emplace_back(ifc_check, [&] { return cmd_ifc_check(file, labels); });
  auto* ifc_sem = leaf(ifc_cmd, "semcheck", "Check noninterference by enumeration");
  ifc_sem->add_option("file", file)->required();
  labels_opt(ifc_sem);
  ifc_sem->add_option("--level", level)->capture_default_str();
  handlers.emplace_back(ifc_sem, [&] { return cmd_ifc_semcheck(g, file, labels, level); });
  auto* ifc_hyb = leaf(ifc_cmd, "hybrid", "Typecheck with trusted sub-commands");
  ifc_hyb->add_option("file", file)->required();
  labels_opt(ifc_hyb);
  ifc_hyb->add_option("--trusted", trusted, "FILE:LABEL or FILE:LABEL:checked");
  handlers.emplace_back(ifc_hyb, [&] { return cmd_ifc_hybrid(g, file, labels, trusted); });
  auto* ifc_mon = leaf(ifc_cmd, "monitor", "Run under the IFC monitor");
  ifc_mon->add_option("file", file)->required();
  labels_opt(ifc_mon);
  ifc_mon->add_option("--pc", pc)->capture_default_str();
  ifc_mon->add_option("--store", store_text);
  handlers.emplace_back(ifc_mon, [&] { return cmd_ifc_monitor(file, labels, pc, store_text); });
  auto* ifc_dec = leaf(ifc_cmd, "declass", "Check delimited release");
  ifc_dec->add_option("file", file)->required();
  labels_opt(ifc_dec);
  ifc_dec->add_option("--declass", declass, "Released expression (repeatable)");
  handlers.emplace_back(ifc_dec, [&] { return cmd_ifc_declass(g, file, labels, declass); });

  auto* prob_cmd = leaf(&app, "prob", "Probabilistic tape semantics");
  prob_cmd->require_subcommand(1);
  auto tape_opts = [&](CLI::App* a) {
    a->add_option("--q", q, "Cell width in bits")->capture_default_str()->check(CLI::Range(1, 20));
    a->add_option("--tape", tape, "Tape length")->capture_default_str();
    a->add_option("--cap", cap, "Largest tape count to enumerate")->capture_default_str();
  };
  auto* otp = leaf(prob_cmd, "otp", "One-time-pad secrecy");
  tape_opts(otp);
  otp->add_option("--m0", m0);
  otp->add_option("--m1", m1);
  otp->add_option("--c", c);
  otp->add_flag("--all", all, "Every (m0, m1, c)");
  handlers.emplace_back(otp, [&] { return cmd_prob_otp(q, tape, m0, m1, c, all, cap); });
  auto* mass = leaf(prob_cmd, "mass", "Mass of a sampling program");
  tape_opts(mass);
  mass->add_option("--prog", file)->required();
  mass->add_option("--pred", pred, "point:V, some or none")->capture_default_str();
  mass->add_option("--param", params, "NAME=VALUE (repeatable)");
  handlers.emplace_back(mass, [&] { return cmd_prob_mass(file, pred, q, tape, params, cap); });

  auto* memo_cmd = leaf(&app, "memo", "Memoization");
  memo_cmd->require_subcommand(1);
  auto* computes = leaf(memo_cmd, "computes", "Check a memoized function against its reference");
  computes->add_option("--skeleton", skeleton, "Recursive skeleton, e.g. fib");
  computes->add_option("--function", function, "Total function, e.g. square");
  computes->add_option("--bound", bound)->capture_default_str();
  computes->add_option("--trials", trials)->capture_default_str();
  handlers.emplace_back(computes, [&] { return cmd_memo_computes(g, skeleton, function, bound, trials); });

  auto* uf_cmd = leaf(&app, "unionfind", "Union-find refinement");
  uf_cmd->require_subcommand(1);
  auto* refine = leaf(uf_cmd, "refine", "Run a relational refinement check");
  refine->add_option("--check", check, "rank, union-rank or compress")->capture_default_str();
  refine->add_option("--n", n)->capture_default_str();
  refine->add_flag("--exhaustive", exhaustive_flag);
  refine->add_option("--trials", trials_opt);
  refine->add_option("--depth", depth, "Exhaustive depth bound")->capture_default_str();
  handlers.emplace_back(refine, [&] { return cmd_uf_refine(g, check, n, exhaustive_flag, trials_opt, depth); });

  auto* demo = leaf(&app, "demo", "Demonstrations");
  demo->require_subcommand(1);
  auto* demo_memo = leaf(demo, "memo", "Memoized recursion with a call trace");
  std::string demo_skeleton = "fib";
  demo_memo->add_option("--skeleton", demo_skeleton)->capture_default_str();
  demo_memo->add_option("--x", x)->capture_default_str();
  handlers.emplace_back(demo_memo, [&] { return cmd_demo_memo(demo_skeleton, x); });
  auto* demo_uf = leaf(demo, "unionfind", "Random union-find operations with invariant checks");
  std::size_t demo_n = 6;
  demo_uf->add_option("--n", demo_n)->capture_default_str();
  demo_uf->add_option("--ops", ops)->capture_default_str();
  handlers.emplace_back(demo_uf, [&] { return cmd_demo_uf(g, demo_n, ops); });

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (auto& [cmd, handler] : handlers) {
    if (!cmd->parsed()) continue;
    try {
      auto start = std::chrono::steady_clock::now();
      Report r = handler();
      r.timing_ms = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
      out << (g.json ? emit_json(r) : emit_human(r));
      return exit_code(r.status);
    } catch (const InputError& e) {
      err << "error: " << e.what() << "\n";
    } catch (const ParseError& e) {
      err << "error: " << to_string(e.loc()) << ": " << e.what() << "\n";
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
      err << "error: bad numeric argument (" << e.what() << ")\n";
    } catch (const std::out_of_range& e) {
      err << "error: numeric argument out of range (" << e.what() << ")\n";
    }
    err << cmd->help();
    return 2;
  }
  err << app.help();
  return 2;
}

}  // namespace relcheck
