#include <algorithm>
#include <set>
#include <sstream>

#include "relcheck/lang.hpp"

namespace relcheck {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

VarsPtr make_vars(VarList names) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw DuplicateDeclaration(n);
  }
  return std::make_shared<const VarList>(std::move(names));
}

std::optional<std::size_t> slot_of(const VarList& vars, std::string_view name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vars.begin());
}

Store::Store(VarsPtr vars, std::vector<Value> values) : vars_(std::move(vars)), values_(std::move(values)) {}

Store Store::zeros(VarsPtr vars) {
  std::vector<Value> values(vars->size(), 0);
  return Store(std::move(vars), std::move(values));
}

Value Store::get(std::string_view name) const {
  auto slot = slot_of(*vars_, name);
  if (!slot) throw UndeclaredVariable(std::string(name));
  return values_[*slot];
}

void Store::set(std::string_view name, Value v) {
  auto slot = slot_of(*vars_, name);
  if (!slot) throw UndeclaredVariable(std::string(name));
  values_[*slot] = v;
}

std::string Store::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ' ';
    out += (*vars_)[i] + "=" + std::to_string(values_[i]);
  }
  return out;
}

ExpPtr make_lit(Value v) { return std::make_shared<const Exp>(Exp{IntLit{v}, {}}); }
ExpPtr make_var(std::string name, std::size_t slot) {
  return std::make_shared<const Exp>(Exp{VarRef{std::move(name), slot}, {}});
}
ExpPtr make_binop(BinOpKind op, ExpPtr lhs, ExpPtr rhs) {
  return std::make_shared<const Exp>(Exp{BinOp{op, std::move(lhs), std::move(rhs)}, {}});
}
ComPtr make_skip() { return std::make_shared<const Com>(Com{Skip{}, {}}); }
ComPtr make_assign(std::string target, std::size_t slot, ExpPtr rhs) {
  return std::make_shared<const Com>(Com{Assign{std::move(target), slot, std::move(rhs)}, {}});
}
ComPtr make_seq(ComPtr first, ComPtr second) {
  return std::make_shared<const Com>(Com{Seq{std::move(first), std::move(second)}, {}});
}
ComPtr make_if(ExpPtr guard, ComPtr then_branch, ComPtr else_branch) {
  return std::make_shared<const Com>(
      Com{If{std::move(guard), std::move(then_branch), std::move(else_branch)}, {}});
}
ComPtr make_while(ExpPtr guard, ComPtr body, ExpPtr metric) {
  return std::make_shared<const Com>(Com{While{std::move(guard), std::move(body), std::move(metric)}, {}});
}

std::string to_string(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "+";
    case BinOpKind::Sub: return "-";
    case BinOpKind::Mul: return "*";
    case BinOpKind::Lt: return "lt";
  }
  return "?";
}

namespace {

int precedence(const Exp& e) {
  if (const auto* b = std::get_if<BinOp>(&e.node)) {
    switch (b->op) {
      case BinOpKind::Add:
      case BinOpKind::Sub: return 1;
      case BinOpKind::Mul: return 2;
      case BinOpKind::Lt: return 3;
    }
  }
  return 3;
}

void print_exp(std::ostream& os, const Exp& e) {
  std::visit(overloaded{
                 [&](const IntLit& l) {
                   if (l.value < 0) {
                     os << '(' << l.value << ')';
                   } else {
                     os << l.value;
                   }
                 },
                 [&](const VarRef& v) { os << v.name; },
                 [&](const BinOp& b) {
                   if (b.op == BinOpKind::Lt) {
                     os << "lt(";
                     print_exp(os, *b.lhs);
                     os << ", ";
                     print_exp(os, *b.rhs);
                     os << ')';
                     return;
                   }
                   int p = precedence(e);
                   bool lp = precedence(*b.lhs) < p;
                   bool rp = precedence(*b.rhs) <= p;
                   if (lp) os << '(';
                   print_exp(os, *b.lhs);
                   if (lp) os << ')';
                   os << ' ' << to_string(b.op) << ' ';
                   if (rp) os << '(';
                   print_exp(os, *b.rhs);
                   if (rp) os << ')';
                 },
             },
             e.node);
}

void print_com(std::ostream& os, const Com& c) {
  std::visit(overloaded{
                 [&](const Skip&) { os << "skip"; },
                 [&](const Assign& a) {
                   os << a.target << " := ";
                   print_exp(os, *a.rhs);
                 },
                 [&](const Seq& s) {
                   print_com(os, *s.first);
                   os << "; ";
                   bool group = std::holds_alternative<Seq>(s.second->node);
                   if (group) os << "{ ";
                   print_com(os, *s.second);
                   if (group) os << " }";
                 },
                 [&](const If& i) {
                   os << "if (";
                   print_exp(os, *i.guard);
                   os << " == 0) { ";
                   print_com(os, *i.then_branch);
                   os << " } else { ";
                   print_com(os, *i.else_branch);
                   os << " }";
                 },
                 [&](const While& w) {
                   os << "while (";
                   print_exp(os, *w.guard);
                   os << " != 0) ";
                   if (w.metric) {
                     os << "decr ";
                     print_exp(os, *w.metric);
                     os << ' ';
                   }
                   os << "{ ";
                   print_com(os, *w.body);
                   os << " }";
                 },
             },
             c.node);
}

}  // namespace

std::string to_string(const Exp& e) {
  std::ostringstream os;
  print_exp(os, e);
  return os.str();
}

std::string to_string(const Com& c) {
  std::ostringstream os;
  print_com(os, c);
  return os.str();
}

std::string to_string(const Program& p) {
  std::string out = "vars ";
  for (std::size_t i = 0; i < p.vars->size(); ++i) {
    if (i) out += ", ";
    out += (*p.vars)[i];
  }
  return out + "; " + to_string(*p.body);
}

bool equal(const Exp& a, const Exp& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{
                        [&](const IntLit& l) { return l.value == std::get<IntLit>(b.node).value; },
                        [&](const VarRef& v) { return v.name == std::get<VarRef>(b.node).name; },
                        [&](const BinOp& x) {
                          const auto& y = std::get<BinOp>(b.node);
                          return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
                        },
                    },
                    a.node);
}

namespace {
bool equal_opt(const ExpPtr& a, const ExpPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}
}  // namespace

bool equal(const Com& a, const Com& b) {
  if (&a == &b) return true;
  if (a.node.index() != b.node.index()) return false;
  return std::visit(overloaded{
                        [&](const Skip&) { return true; },
                        [&](const Assign& x) {
                          const auto& y = std::get<Assign>(b.node);
                          return x.target == y.target && equal(*x.rhs, *y.rhs);
                        },
                        [&](const Seq& x) {
                          const auto& y = std::get<Seq>(b.node);
                          return equal(*x.first, *y.first) && equal(*x.second, *y.second);
                        },
                        [&](const If& x) {
                          const auto& y = std::get<If>(b.node);
                          return equal(*x.guard, *y.guard) && equal(*x.then_branch, *y.then_branch) &&
                                 equal(*x.else_branch, *y.else_branch);
                        },
                        [&](const While& x) {
                          const auto& y = std::get<While>(b.node);
                          return equal(*x.guard, *y.guard) && equal(*x.body, *y.body) &&
                                 equal_opt(x.metric, y.metric);
                        },
                    },
                    a.node);
}

bool is_skip(const Com& c) { return std::holds_alternative<Skip>(c.node); }

ExpPtr rebind(const ExpPtr& e, const VarList& vars) {
  if (!e) return e;
  return std::visit(overloaded{
                        [&](const IntLit&) { return e; },
                        [&](const VarRef& v) -> ExpPtr {
                          auto slot = slot_of(vars, v.name);
                          if (!slot) throw UndeclaredVariable(v.name);
                          return std::make_shared<const Exp>(Exp{VarRef{v.name, *slot}, e->loc});
                        },
                        [&](const BinOp& b) -> ExpPtr {
                          return std::make_shared<const Exp>(
                              Exp{BinOp{b.op, rebind(b.lhs, vars), rebind(b.rhs, vars)}, e->loc});
                        },
                    },
                    e->node);
}

ComPtr rebind(const ComPtr& c, const VarList& vars) {
  auto wrap = [&](auto node) { return std::make_shared<const Com>(Com{std::move(node), c->loc}); };
  return std::visit(overloaded{
                        [&](const Skip&) { return c; },
                        [&](const Assign& a) -> ComPtr {
                          auto slot = slot_of(vars, a.target);
                          if (!slot) throw UndeclaredVariable(a.target);
                          return wrap(Assign{a.target, *slot, rebind(a.rhs, vars)});
                        },
                        [&](const Seq& s) -> ComPtr {
                          return wrap(Seq{rebind(s.first, vars), rebind(s.second, vars)});
                        },
                        [&](const If& i) -> ComPtr {
                          return wrap(If{rebind(i.guard, vars), rebind(i.then_branch, vars),
                                         rebind(i.else_branch, vars)});
                        },
                        [&](const While& w) -> ComPtr {
                          return wrap(While{rebind(w.guard, vars), rebind(w.body, vars), rebind(w.metric, vars)});
                        },
                    },
                    c->node);
}

void require_metrics(const Com& c) {
  std::visit(overloaded{
                 [](const Skip&) {},
                 [](const Assign&) {},
                 [](const Seq& s) {
                   require_metrics(*s.first);
                   require_metrics(*s.second);
                 },
                 [](const If& i) {
                   require_metrics(*i.then_branch);
                   require_metrics(*i.else_branch);
                 },
                 [&](const While& w) {
                   if (!w.metric) throw MissingMetric(c.loc);
                   require_metrics(*w.body);
                 },
             },
             c.node);
}

}  // namespace relcheck
