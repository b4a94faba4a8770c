#include "relcheck/lang.hpp"

namespace relcheck {

Value eval_exp(const Store& s, const Exp& e) {
  if (const auto* lit = std::get_if<IntLit>(&e.node)) return lit->value;
  if (const auto* var = std::get_if<VarRef>(&e.node)) return s[var->slot];
  const auto& b = std::get<BinOp>(e.node);
  Value x = eval_exp(s, *b.lhs);
  Value y = eval_exp(s, *b.rhs);
  Value r = 0;
  switch (b.op) {
    case BinOpKind::Add:
      if (__builtin_add_overflow(x, y, &r)) throw ArithmeticOverflow();
      return r;
    case BinOpKind::Sub:
      if (__builtin_sub_overflow(x, y, &r)) throw ArithmeticOverflow();
      return r;
    case BinOpKind::Mul:
      if (__builtin_mul_overflow(x, y, &r)) throw ArithmeticOverflow();
      return r;
    case BinOpKind::Lt: return x < y ? 1 : 0;
  }
  return 0;
}

namespace {

// Both executors mutate a private store copy and return false when the run
// stops early; the store then holds the state at that point.

bool exec_metric(const Com& c, Store& s) {
  switch (c.node.index()) {
    case 0: return true;
    case 1: {
      const auto& a = std::get<Assign>(c.node);
      s[a.slot] = eval_exp(s, *a.rhs);
      return true;
    }
    case 2: {
      const auto& q = std::get<Seq>(c.node);
      return exec_metric(*q.first, s) && exec_metric(*q.second, s);
    }
    case 3: {
      const auto& i = std::get<If>(c.node);
      return exec_metric(eval_exp(s, *i.guard) == 0 ? *i.then_branch : *i.else_branch, s);
    }
    default: {
      const auto& w = std::get<While>(c.node);
      if (eval_exp(s, *w.guard) == 0) return true;
      if (!w.metric) throw MissingMetric(c.loc);
      Value m = eval_exp(s, *w.metric);
      if (m < 0) return false;
      while (true) {
        if (!exec_metric(*w.body, s)) return false;
        Value next = eval_exp(s, *w.metric);
        if (next < 0 || next >= m) return false;
        m = next;
        if (eval_exp(s, *w.guard) == 0) return true;
      }
    }
  }
}

bool exec_fuel(const Com& c, Store& s, std::uint64_t& fuel) {
  switch (c.node.index()) {
    case 0: return true;
    case 1: {
      const auto& a = std::get<Assign>(c.node);
      s[a.slot] = eval_exp(s, *a.rhs);
      return true;
    }
    case 2: {
      const auto& q = std::get<Seq>(c.node);
      return exec_fuel(*q.first, s, fuel) && exec_fuel(*q.second, s, fuel);
    }
    case 3: {
      const auto& i = std::get<If>(c.node);
      return exec_fuel(eval_exp(s, *i.guard) == 0 ? *i.then_branch : *i.else_branch, s, fuel);
    }
    default: {
      const auto& w = std::get<While>(c.node);
      while (eval_exp(s, *w.guard) != 0) {
        if (fuel == 0) return false;
        --fuel;
        if (!exec_fuel(*w.body, s, fuel)) return false;
      }
      return true;
    }
  }
}

}  // namespace

Outcome run_metric(const Com& c, const Store& s) {
  Store out = s;
  bool done = exec_metric(c, out);
  return Outcome{done ? Outcome::Kind::Normal : Outcome::Kind::OutOfFuel, std::move(out)};
}

Outcome run_metric(const Program& p, const Store& s) {
  require_metrics(*p.body);
  return run_metric(*p.body, s);
}

FuelResult run_fuel(const Com& c, const Store& s, std::uint64_t fuel) {
  Store out = s;
  bool done = exec_fuel(c, out, fuel);
  return FuelResult{done, std::move(out)};
}

FuelResult run_fuel(const Program& p, const Store& s, std::uint64_t fuel) { return run_fuel(*p.body, s, fuel); }

}  // namespace relcheck
