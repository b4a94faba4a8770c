#include <sstream>

#include "relcheck/rhl.hpp"

namespace relcheck::rhl {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

RelExpPtr constant(Value v) { return std::make_shared<const RelExp>(RelExp{ConstE{v}}); }
RelExpPtr side_var(Side side, std::string name) {
  return std::make_shared<const RelExp>(RelExp{SideVar{side, std::move(name)}});
}
RelExpPtr arith(BinOpKind op, RelExpPtr lhs, RelExpPtr rhs) {
  return std::make_shared<const RelExp>(RelExp{ArithE{op, std::move(lhs), std::move(rhs)}});
}

RelExpPtr lift(Side side, const Exp& e) {
  return std::visit(overloaded{
                        [](const IntLit& l) { return constant(l.value); },
                        [&](const VarRef& v) { return side_var(side, v.name); },
                        [&](const BinOp& b) { return arith(b.op, lift(side, *b.lhs), lift(side, *b.rhs)); },
                    },
                    e.node);
}

FormulaPtr f_true() {
  static const FormulaPtr t = std::make_shared<const RelFormula>(RelFormula{TrueF{}});
  return t;
}
FormulaPtr f_false() { return f_not(f_true()); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<const RelFormula>(RelFormula{AndF{std::move(a), std::move(b)}});
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return std::make_shared<const RelFormula>(RelFormula{OrF{std::move(a), std::move(b)}});
}
FormulaPtr f_not(FormulaPtr a) { return std::make_shared<const RelFormula>(RelFormula{NotF{std::move(a)}}); }
FormulaPtr f_cmp(CmpOp op, RelExpPtr lhs, RelExpPtr rhs) {
  return std::make_shared<const RelFormula>(RelFormula{CmpF{op, std::move(lhs), std::move(rhs)}});
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return f_or(f_and(a, b), f_and(f_not(a), f_not(b))); }

FormulaPtr f_agree(const std::vector<std::string>& names) {
  FormulaPtr out;
  for (const auto& n : names) {
    auto eq = f_cmp(CmpOp::Eq, side_var(Side::Left, n), side_var(Side::Right, n));
    out = out ? f_and(out, eq) : eq;
  }
  return out ? out : f_true();
}

FormulaPtr guard_holds(Side side, const Exp& guard) { return f_cmp(CmpOp::Ne, lift(side, guard), constant(0)); }

Value eval_rel_exp(const RelExp& e, const Store& left, const Store& right) {
  return std::visit(overloaded{
                        [](const ConstE& c) { return c.value; },
                        [&](const SideVar& v) { return (v.side == Side::Left ? left : right).get(v.name); },
                        [&](const ArithE& a) {
                          Value x = eval_rel_exp(*a.lhs, left, right);
                          Value y = eval_rel_exp(*a.rhs, left, right);
                          Value r = 0;
                          switch (a.op) {
                            case BinOpKind::Add:
                              if (__builtin_add_overflow(x, y, &r)) throw ArithmeticOverflow();
                              return r;
                            case BinOpKind::Sub:
                              if (__builtin_sub_overflow(x, y, &r)) throw ArithmeticOverflow();
                              return r;
                            case BinOpKind::Mul:
                              if (__builtin_mul_overflow(x, y, &r)) throw ArithmeticOverflow();
                              return r;
                            case BinOpKind::Lt: return Value{x < y ? 1 : 0};
                          }
                          return Value{0};
                        },
                    },
                    e.node);
}

bool eval_formula(const RelFormula& f, const Store& left, const Store& right) {
  return std::visit(overloaded{
                        [](const TrueF&) { return true; },
                        [&](const AndF& a) {
                          return eval_formula(*a.lhs, left, right) && eval_formula(*a.rhs, left, right);
                        },
                        [&](const OrF& o) {
                          return eval_formula(*o.lhs, left, right) || eval_formula(*o.rhs, left, right);
                        },
                        [&](const NotF& n) { return !eval_formula(*n.inner, left, right); },
                        [&](const CmpF& c) {
                          Value x = eval_rel_exp(*c.lhs, left, right);
                          Value y = eval_rel_exp(*c.rhs, left, right);
                          switch (c.op) {
                            case CmpOp::Eq: return x == y;
                            case CmpOp::Ne: return x != y;
                            case CmpOp::Lt: return x < y;
                            case CmpOp::Le: return x <= y;
                          }
                          return false;
                        },
                    },
                    f.node);
}

std::string to_string(const RelExp& e) {
  return std::visit(overloaded{
                        [](const ConstE& c) { return std::to_string(c.value); },
                        [](const SideVar& v) { return std::string(v.side == Side::Left ? "(L " : "(R ") + v.name + ")"; },
                        [](const ArithE& a) {
                          return "(" + relcheck::to_string(a.op) + " " + to_string(*a.lhs) + " " + to_string(*a.rhs) +
                                 ")";
                        },
                    },
                    e.node);
}

std::string to_string(const RelFormula& f) {
  return std::visit(overloaded{
                        [](const TrueF&) { return std::string("true"); },
                        [](const AndF& a) { return "(and " + to_string(*a.lhs) + " " + to_string(*a.rhs) + ")"; },
                        [](const OrF& o) { return "(or " + to_string(*o.lhs) + " " + to_string(*o.rhs) + ")"; },
                        [](const NotF& n) {
                          if (std::holds_alternative<TrueF>(n.inner->node)) return std::string("false");
                          return "(not " + to_string(*n.inner) + ")";
                        },
                        [](const CmpF& c) {
                          const char* op = c.op == CmpOp::Eq ? "=" : c.op == CmpOp::Ne ? "!=" : c.op == CmpOp::Lt ? "<" : "<=";
                          return "(" + std::string(op) + " " + to_string(*c.lhs) + " " + to_string(*c.rhs) + ")";
                        },
                    },
                    f.node);
}

SemtestResult semtest_judgement(const Judgement& j, const TestDomain& d) {
  charge(d, j.left.vars->size() + j.right.vars->size());
  auto ls = all_stores(j.left.vars, d);
  auto rs = all_stores(j.right.vars, d);
  std::vector<FuelResult> lr, rr;
  lr.reserve(ls.size());
  rr.reserve(rs.size());
  for (const auto& s : ls) lr.push_back(run_fuel(*j.left.body, s, d.fuel_bound));
  for (const auto& s : rs) rr.push_back(run_fuel(*j.right.body, s, d.fuel_bound));

  SemtestResult result;
  std::optional<std::pair<std::size_t, std::size_t>> inconclusive;
  for (std::size_t a = 0; a < ls.size(); ++a) {
    for (std::size_t b = 0; b < rs.size(); ++b) {
      if (!eval_formula(*j.pre, ls[a], rs[b])) continue;
      ++result.examined;
      if (lr[a].completed && rr[b].completed) {
        if (!eval_formula(*j.post, lr[a].final, rr[b].final)) {
          result.status = SemtestResult::Status::Counterexample;
          result.left = ls[a];
          result.right = rs[b];
          result.detail = "post fails on final stores L: " + lr[a].final.to_string() +
                          " | R: " + rr[b].final.to_string();
          return result;
        }
      } else if (lr[a].completed != rr[b].completed && !inconclusive) {
        inconclusive = {a, b};
      }
    }
  }
  if (inconclusive) {
    auto [a, b] = *inconclusive;
    result.status = SemtestResult::Status::InconclusiveTermination;
    result.left = ls[a];
    result.right = rs[b];
    result.detail = std::string(lr[a].completed ? "left" : "right") + " side completes within fuel " +
                    std::to_string(d.fuel_bound) + ", the other does not";
  }
  return result;
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::RSkip: return "RSkip";
    case Rule::RAssign: return "RAssign";
    case Rule::RSeq: return "RSeq";
    case Rule::RIf: return "RIf";
    case Rule::RWhile: return "RWhile";
    case Rule::RConseq: return "RConseq";
    case Rule::DeadAssignL: return "DeadAssignL";
    case Rule::DeadAssignR: return "DeadAssignR";
    case Rule::DeadWhileL: return "DeadWhileL";
    case Rule::DeadWhileR: return "DeadWhileR";
    case Rule::SkipElimL: return "SkipElimL";
    case Rule::SkipElimR: return "SkipElimR";
    case Rule::Semantic: return "Semantic";
  }
  return "?";
}

std::string script_name(Rule r) {
  switch (r) {
    case Rule::RSkip: return "rskip";
    case Rule::RAssign: return "rassign";
    case Rule::RSeq: return "rseq";
    case Rule::RIf: return "rif";
    case Rule::RWhile: return "rwhile";
    case Rule::RConseq: return "rconseq";
    case Rule::DeadAssignL: return "dead-assign-l";
    case Rule::DeadAssignR: return "dead-assign-r";
    case Rule::DeadWhileL: return "dead-while-l";
    case Rule::DeadWhileR: return "dead-while-r";
    case Rule::SkipElimL: return "skip-elim-l";
    case Rule::SkipElimR: return "skip-elim-r";
    case Rule::Semantic: return "semantic";
  }
  return "?";
}

std::optional<Rule> parse_rule(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Rule::Semantic); ++i) {
    auto r = static_cast<Rule>(i);
    if (script_name(r) == name) return r;
  }
  return std::nullopt;
}

bool ProofReport::accepted() const {
  for (const auto& n : nodes) {
    if (n.status != NodeReport::Status::Ok) return false;
  }
  return true;
}

bool ProofReport::has_counterexample() const {
  for (const auto& n : nodes) {
    if (n.status == NodeReport::Status::Counterexample) return true;
  }
  return false;
}

namespace {

struct Expect {
  ComPtr left;
  ComPtr right;
  FormulaPtr pre;
  FormulaPtr post;
};

struct Effective {
  ComPtr left;
  ComPtr right;
  FormulaPtr pre;
  FormulaPtr post;
};

class Checker {
 public:
  Checker(const ProofTree& tree, const TestDomain& d)
      : tree_(tree),
        d_(d),
        left_stores_(all_stores(tree.left_vars, d)),
        right_stores_(all_stores(tree.right_vars, d)) {}

  ProofReport run() {
    const auto& root = tree_.root;
    check(root, Expect{}, "root");
    return std::move(report_);
  }

 private:
  using Pair = std::pair<const Store*, const Store*>;

  // First pair (in enumeration order) on which `violated` holds.
  template <class F>
  std::optional<Pair> find_pair(F&& violated) {
    charge(d_, tree_.left_vars->size() + tree_.right_vars->size());
    for (const auto& l : left_stores_) {
      for (const auto& r : right_stores_) {
        ++report_.pairs_examined;
        if (violated(l, r)) return Pair{&l, &r};
      }
    }
    return std::nullopt;
  }

  std::optional<Pair> implies(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b || std::holds_alternative<TrueF>(b->node)) return std::nullopt;
    return find_pair([&](const Store& l, const Store& r) { return eval_formula(*a, l, r) && !eval_formula(*b, l, r); });
  }

  void fail(std::size_t idx, const std::string& detail, const std::optional<Pair>& pair) {
    auto& n = report_.nodes[idx];
    if (n.status != NodeReport::Status::Ok) return;
    n.status = NodeReport::Status::Counterexample;
    n.detail = detail;
    if (pair) {
      n.left = *pair->first;
      n.right = *pair->second;
    }
  }

  // Reports a failed implication between two formulas at node idx.
  void require_implies(std::size_t idx, const FormulaPtr& a, const FormulaPtr& b, const std::string& what) {
    if (auto p = implies(a, b)) fail(idx, what, p);
  }

  [[noreturn]] void malformed(const ProofNode& n, const std::string& path, const std::string& msg) {
    throw MalformedProof(path + " (" + to_string(n.rule) + " at " + relcheck::to_string(n.loc) + "): " + msg);
  }

  template <class T>
  const T& as(const ProofNode& n, const std::string& path, const ComPtr& c, const char* side, const char* shape) {
    const T* v = std::get_if<T>(&c->node);
    if (!v) malformed(n, path, std::string(side) + " command must be " + shape + ", got '" + relcheck::to_string(*c) + "'");
    return *v;
  }

  void arity(const ProofNode& n, const std::string& path, std::size_t k) {
    if (n.premises.size() != k) {
      malformed(n, path, "expects " + std::to_string(k) + " premise(s), got " + std::to_string(n.premises.size()));
    }
  }

  void same_com(const ProofNode& n, const std::string& path, const ComPtr& got, const ComPtr& want, const char* what) {
    if (!equal(*got, *want)) {
      malformed(n, path, std::string(what) + " is '" + relcheck::to_string(*got) + "', expected '" +
                             relcheck::to_string(*want) + "'");
    }
  }

  // Checks a premise against what the parent rule needs and links the
  // formulas by implication.
  Effective premise(std::size_t idx, const ProofNode& parent, const std::string& path, std::size_t k,
                    const Expect& want) {
    auto eff = check(parent.premises[k], want, path + "." + std::to_string(k));
    std::string label = "premise " + std::to_string(k);
    require_implies(idx, want.pre, eff.pre, "required pre does not imply " + label + " pre");
    require_implies(idx, eff.post, want.post, label + " post does not imply required post");
    return eff;
  }

  Effective check(const ProofNode& n, const Expect& e, const std::string& path) {
    std::size_t idx = report_.nodes.size();
    report_.nodes.push_back(NodeReport{path, n.rule, NodeReport::Status::Ok, "", std::nullopt, std::nullopt, n.loc});

    Effective eff{n.left ? n.left : e.left, n.right ? n.right : e.right, n.pre ? n.pre : e.pre,
                  n.post ? n.post : e.post};
    if (!eff.left || !eff.right) malformed(n, path, "no command for one side");

    bool derives = n.rule == Rule::RWhile || n.rule == Rule::DeadWhileL || n.rule == Rule::DeadWhileR;
    if (!derives && (!eff.pre || !eff.post)) malformed(n, path, "no pre/post available");

    switch (n.rule) {
      case Rule::RSkip: {
        arity(n, path, 0);
        as<Skip>(n, path, eff.left, "left", "skip");
        as<Skip>(n, path, eff.right, "right", "skip");
        require_implies(idx, eff.pre, eff.post, "pre does not imply post");
        break;
      }
      case Rule::RAssign: {
        arity(n, path, 0);
        const auto& al = as<Assign>(n, path, eff.left, "left", "an assignment");
        const auto& ar = as<Assign>(n, path, eff.right, "right", "an assignment");
        auto p = find_pair([&](const Store& l, const Store& r) {
          if (!eval_formula(*eff.pre, l, r)) return false;
          Store l2 = l, r2 = r;
          l2[al.slot] = eval_exp(l, *al.rhs);
          r2[ar.slot] = eval_exp(r, *ar.rhs);
          return !eval_formula(*eff.post, l2, r2);
        });
        if (p) fail(idx, "post fails after both assignments", p);
        break;
      }
      case Rule::DeadAssignL:
      case Rule::DeadAssignR: {
        arity(n, path, 0);
        bool on_left = n.rule == Rule::DeadAssignL;
        const auto& a = on_left ? as<Assign>(n, path, eff.left, "left", "an assignment")
                                : as<Assign>(n, path, eff.right, "right", "an assignment");
        as<Skip>(n, path, on_left ? eff.right : eff.left, on_left ? "right" : "left", "skip");
        auto p = find_pair([&](const Store& l, const Store& r) {
          if (!eval_formula(*eff.pre, l, r)) return false;
          Store l2 = l, r2 = r;
          Store& target = on_left ? l2 : r2;
          target[a.slot] = eval_exp(on_left ? l : r, *a.rhs);
          return !eval_formula(*eff.post, l2, r2);
        });
        if (p) fail(idx, "post fails after the assignment", p);
        break;
      }
      case Rule::RSeq: {
        arity(n, path, 2);
        if (!n.arg) malformed(n, path, "needs :mid");
        const auto& sl = as<Seq>(n, path, eff.left, "left", "a sequence");
        const auto& sr = as<Seq>(n, path, eff.right, "right", "a sequence");
        auto p0 = premise(idx, n, path, 0, Expect{sl.first, sr.first, eff.pre, n.arg});
        same_com(n, path, p0.left, sl.first, "premise 0 left");
        same_com(n, path, p0.right, sr.first, "premise 0 right");
        auto p1 = premise(idx, n, path, 1, Expect{sl.second, sr.second, n.arg, eff.post});
        same_com(n, path, p1.left, sl.second, "premise 1 left");
        same_com(n, path, p1.right, sr.second, "premise 1 right");
        break;
      }
      case Rule::RIf: {
        arity(n, path, 2);
        const auto& il = as<If>(n, path, eff.left, "left", "a conditional");
        const auto& ir = as<If>(n, path, eff.right, "right", "a conditional");
        auto p = find_pair([&](const Store& l, const Store& r) {
          return eval_formula(*eff.pre, l, r) && ((eval_exp(l, *il.guard) == 0) != (eval_exp(r, *ir.guard) == 0));
        });
        if (p) fail(idx, "guards disagree under pre", p);
        auto bl = guard_holds(Side::Left, *il.guard);
        auto br = guard_holds(Side::Right, *ir.guard);
        auto then_pre = f_and(eff.pre, f_and(f_not(bl), f_not(br)));
        auto else_pre = f_and(eff.pre, f_and(bl, br));
        auto t = premise(idx, n, path, 0, Expect{il.then_branch, ir.then_branch, then_pre, eff.post});
        same_com(n, path, t.left, il.then_branch, "premise 0 left");
        same_com(n, path, t.right, ir.then_branch, "premise 0 right");
        auto f = premise(idx, n, path, 1, Expect{il.else_branch, ir.else_branch, else_pre, eff.post});
        same_com(n, path, f.left, il.else_branch, "premise 1 left");
        same_com(n, path, f.right, ir.else_branch, "premise 1 right");
        break;
      }
      case Rule::RWhile: {
        arity(n, path, 1);
        if (!n.arg) malformed(n, path, "needs :phi");
        const auto& wl = as<While>(n, path, eff.left, "left", "a while loop");
        const auto& wr = as<While>(n, path, eff.right, "right", "a while loop");
        auto bl = guard_holds(Side::Left, *wl.guard);
        auto br = guard_holds(Side::Right, *wr.guard);
        auto same_guard = f_and(n.arg, f_iff(bl, br));
        auto derived_pre = same_guard;
        auto derived_post = f_and(n.arg, f_not(f_or(bl, br)));
        eff.pre = n.pre ? n.pre : derived_pre;
        eff.post = n.post ? n.post : derived_post;
        if (n.pre) require_implies(idx, n.pre, derived_pre, "pre does not imply phi ∧ (B_left = B_right)");
        if (n.post) require_implies(idx, derived_post, n.post, "phi ∧ ¬(B_left ∨ B_right) does not imply post");
        auto body = premise(idx, n, path, 0, Expect{wl.body, wr.body, f_and(n.arg, f_and(bl, br)), same_guard});
        same_com(n, path, body.left, wl.body, "premise 0 left");
        same_com(n, path, body.right, wr.body, "premise 0 right");
        break;
      }
      case Rule::DeadWhileL:
      case Rule::DeadWhileR: {
        arity(n, path, 0);
        if (!n.arg) malformed(n, path, "needs :phi");
        bool on_left = n.rule == Rule::DeadWhileL;
        const auto& w = on_left ? as<While>(n, path, eff.left, "left", "a while loop")
                                : as<While>(n, path, eff.right, "right", "a while loop");
        as<Skip>(n, path, on_left ? eff.right : eff.left, on_left ? "right" : "left", "skip");
        auto derived = f_and(n.arg, f_not(guard_holds(on_left ? Side::Left : Side::Right, *w.guard)));
        eff.pre = n.pre ? n.pre : derived;
        eff.post = n.post ? n.post : derived;
        if (n.pre) require_implies(idx, n.pre, derived, "pre does not imply phi ∧ ¬B");
        if (n.post) require_implies(idx, derived, n.post, "phi ∧ ¬B does not imply post");
        break;
      }
      case Rule::RConseq: {
        arity(n, path, 1);
        auto p = premise(idx, n, path, 0, Expect{eff.left, eff.right, eff.pre, eff.post});
        same_com(n, path, p.left, eff.left, "premise 0 left");
        same_com(n, path, p.right, eff.right, "premise 0 right");
        break;
      }
      case Rule::SkipElimL:
      case Rule::SkipElimR: {
        arity(n, path, 1);
        bool on_left = n.rule == Rule::SkipElimL;
        const ComPtr& here = on_left ? eff.left : eff.right;
        ComPtr there = skip_shift(here);
        Expect want{on_left ? there : eff.left, on_left ? eff.right : there, eff.pre, eff.post};
        auto p = premise(idx, n, path, 0, want);
        const ComPtr& got = on_left ? p.left : p.right;
        if (!skip_related(here, got)) {
          malformed(n, path, "'" + relcheck::to_string(*here) + "' and '" + relcheck::to_string(*got) +
                                 "' do not differ by a skip");
        }
        same_com(n, path, on_left ? p.right : p.left, on_left ? eff.right : eff.left, "premise 0 other side");
        break;
      }
      case Rule::Semantic: {
        arity(n, path, 0);
        Judgement j{Program{tree_.left_vars, eff.left}, Program{tree_.right_vars, eff.right}, eff.pre, eff.post};
        auto r = semtest_judgement(j, d_);
        report_.pairs_examined += r.examined;
        auto& node = report_.nodes[idx];
        if (r.status == SemtestResult::Status::Counterexample) {
          fail(idx, "semantic check: " + r.detail, std::nullopt);
          node.left = r.left;
          node.right = r.right;
        } else if (r.status == SemtestResult::Status::InconclusiveTermination) {
          node.status = NodeReport::Status::Inconclusive;
          node.detail = "semantic check: " + r.detail;
          node.left = r.left;
          node.right = r.right;
        }
        break;
      }
    }
    return eff;
  }

  // Default premise command for skip elimination: strip a skip when present,
  // otherwise prepend one.
  static ComPtr skip_shift(const ComPtr& c) {
    if (const auto* s = std::get_if<Seq>(&c->node)) {
      if (is_skip(*s->first)) return s->second;
      if (is_skip(*s->second)) return s->first;
    }
    return make_seq(make_skip(), c);
  }

  static bool wraps(const ComPtr& outer, const ComPtr& inner) {
    const auto* s = std::get_if<Seq>(&outer->node);
    if (!s) return false;
    return (is_skip(*s->first) && equal(*s->second, *inner)) || (is_skip(*s->second) && equal(*s->first, *inner));
  }

  static bool skip_related(const ComPtr& a, const ComPtr& b) { return wraps(a, b) || wraps(b, a); }

  const ProofTree& tree_;
  const TestDomain& d_;
  std::vector<Store> left_stores_;
  std::vector<Store> right_stores_;
  ProofReport report_;
};

}  // namespace

ProofReport check_proof(const ProofTree& tree, const TestDomain& d) { return Checker(tree, d).run(); }

}  // namespace relcheck::rhl
