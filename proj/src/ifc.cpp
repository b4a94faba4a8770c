#include "relcheck/ifc.hpp"

#include <algorithm>
#include <cctype>

namespace relcheck::ifc {

std::string to_string(Label l) { return l == Label::Low ? "Low" : "High"; }

std::optional<Label> parse_label(std::string_view text) {
  std::string t;
  for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "low" || t == "l") return Label::Low;
  if (t == "high" || t == "h") return Label::High;
  return std::nullopt;
}

Label LabelEnv::of(std::string_view name) const {
  auto slot = slot_of(*vars, name);
  if (!slot) throw UndeclaredVariable(std::string(name));
  return labels[*slot];
}

LabelEnv parse_labels(std::string_view text, const VarsPtr& vars) {
  LabelEnv env{vars, std::vector<Label>(vars->size(), Label::Low)};
  std::vector<bool> seen(vars->size(), false);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(pos, comma - pos);
    pos = comma + 1;
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw UsageError("label entry '" + std::string(item) + "' is not var=Low|High");
    auto name = item.substr(0, eq);
    auto label = parse_label(item.substr(eq + 1));
    if (!label) throw UsageError("unknown label in '" + std::string(item) + "'");
    auto slot = slot_of(*vars, name);
    if (!slot) throw UndeclaredVariable(std::string(name));
    if (seen[*slot]) throw UsageError("variable " + std::string(name) + " labeled twice");
    seen[*slot] = true;
    env.labels[*slot] = *label;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw UsageError("no label given for variable " + (*vars)[i]);
  }
  return env;
}

std::string to_string(const LabelEnv& env) {
  std::string out;
  for (std::size_t i = 0; i < env.labels.size(); ++i) {
    if (i) out += ',';
    out += (*env.vars)[i] + "=" + to_string(env.labels[i]);
  }
  return out;
}

bool low_equiv(const LabelEnv& env, const Store& s0, const Store& s1) {
  for (std::size_t i = 0; i < env.labels.size(); ++i) {
    if (env.labels[i] == Label::Low && s0[i] != s1[i]) return false;
  }
  return true;
}

Label tc_exp(const LabelEnv& env, const Exp& e) {
  if (std::holds_alternative<IntLit>(e.node)) return Label::Low;
  if (const auto* v = std::get_if<VarRef>(&e.node)) return env.of(v->slot);
  const auto& b = std::get<BinOp>(e.node);
  return join(tc_exp(env, *b.lhs), tc_exp(env, *b.rhs));
}

namespace {

using Lookup = std::function<std::optional<Label>(const Com&)>;

TcResult check(const LabelEnv& env, const Com& c, const Lookup& lookup) {
  if (lookup) {
    if (auto hit = lookup(c)) return *hit;
  }
  auto error = [&](std::string detail) { return TypeError{c.loc, to_string(c), std::move(detail)}; };
  switch (c.node.index()) {
    case 0: return Label::High;
    case 1: {
      const auto& a = std::get<Assign>(c.node);
      Label le = tc_exp(env, *a.rhs);
      Label lr = env.of(a.slot);
      if (!leq(le, lr)) {
        return error("expression labeled " + to_string(le) + " assigned to " + to_string(lr) + " variable " + a.target);
      }
      return lr;
    }
    case 2: {
      const auto& q = std::get<Seq>(c.node);
      auto l1 = check(env, *q.first, lookup);
      if (std::holds_alternative<TypeError>(l1)) return l1;
      auto l2 = check(env, *q.second, lookup);
      if (std::holds_alternative<TypeError>(l2)) return l2;
      return meet(std::get<Label>(l1), std::get<Label>(l2));
    }
    case 3: {
      const auto& i = std::get<If>(c.node);
      auto l1 = check(env, *i.then_branch, lookup);
      if (std::holds_alternative<TypeError>(l1)) return l1;
      auto l2 = check(env, *i.else_branch, lookup);
      if (std::holds_alternative<TypeError>(l2)) return l2;
      Label lb = meet(std::get<Label>(l1), std::get<Label>(l2));
      Label le = tc_exp(env, *i.guard);
      if (!leq(le, lb)) return error("guard labeled " + to_string(le) + " controls branches typable only at " + to_string(lb));
      return lb;
    }
    default: {
      const auto& w = std::get<While>(c.node);
      auto body = check(env, *w.body, lookup);
      if (std::holds_alternative<TypeError>(body)) return body;
      Label lb = std::get<Label>(body);
      Label le = tc_exp(env, *w.guard);
      if (!leq(le, lb)) return error("guard labeled " + to_string(le) + " controls a body typable only at " + to_string(lb));
      return lb;
    }
  }
}

// Runs c on every store once; pair checks then index into the results.
std::vector<Outcome> run_all(const Com& c, const std::vector<Store>& stores) {
  std::vector<Outcome> out;
  out.reserve(stores.size());
  for (const auto& s : stores) out.push_back(run_metric(c, s));
  return out;
}

std::optional<std::string> first_low_difference(const LabelEnv& env, const Store& a, const Store& b) {
  for (std::size_t i = 0; i < env.labels.size(); ++i) {
    if (env.labels[i] == Label::Low && a[i] != b[i]) return (*env.vars)[i];
  }
  return std::nullopt;
}

}  // namespace

TcResult tc_com(const LabelEnv& env, const Com& c) { return check(env, c, {}); }

TcResult tc_com_hybrid(const LabelEnv& env, const Com& c, const std::vector<TrustedEntry>& trusted) {
  if (trusted.empty()) return tc_com(env, c);
  return check(env, c, [&](const Com& node) -> std::optional<Label> {
    for (const auto& t : trusted) {
      if (equal(node, *t.command)) return t.label;
    }
    return std::nullopt;
  });
}

Verdict<PairWitness> ni_exp_check(const LabelEnv& env, const Exp& e, Label l, const TestDomain& d) {
  Verdict<PairWitness> v;
  if (l == Label::High) return v;
  charge(d, 2 * env.vars->size());
  auto stores = all_stores(env.vars, d);
  std::vector<Value> values;
  values.reserve(stores.size());
  for (const auto& s : stores) values.push_back(eval_exp(s, e));
  for (std::size_t i = 0; i < stores.size(); ++i) {
    for (std::size_t j = 0; j < stores.size(); ++j) {
      if (!low_equiv(env, stores[i], stores[j])) continue;
      ++v.examined;
      if (values[i] != values[j]) {
        v.counterexample = PairWitness{stores[i], stores[j]};
        return v;
      }
    }
  }
  return v;
}

Verdict<NiWitness> ni_com_check(const LabelEnv& env, const Com& c, Label l, const TestDomain& d) {
  require_metrics(c);
  Verdict<NiWitness> v;
  charge(d, 2 * env.vars->size());
  auto stores = all_stores(env.vars, d);
  auto runs = run_all(c, stores);
  for (std::size_t i = 0; i < stores.size(); ++i) {
    if (!runs[i].normal()) continue;
    for (std::size_t j = 0; j < stores.size(); ++j) {
      if (!runs[j].normal() || !low_equiv(env, stores[i], stores[j])) continue;
      ++v.examined;
      if (auto var = first_low_difference(env, runs[i].store, runs[j].store)) {
        v.counterexample = NiWitness{NiWitness::Kind::Ni, stores[i], stores[j], *var};
        return v;
      }
    }
  }
  for (std::size_t i = 0; i < stores.size(); ++i) {
    if (!runs[i].normal()) continue;
    ++v.examined;
    for (std::size_t k = 0; k < env.labels.size(); ++k) {
      bool below = env.labels[k] == Label::Low && l == Label::High;
      if (below && runs[i].store[k] != stores[i][k]) {
        v.counterexample = NiWitness{NiWitness::Kind::WriteDown, stores[i], std::nullopt, (*env.vars)[k]};
        return v;
      }
    }
  }
  return v;
}

Verdict<NiWitness> verify_trusted(const LabelEnv& env, const TrustedEntry& entry) {
  if (entry.evidence == TrustedEntry::Evidence::Assumed) return {};
  if (!entry.domain) throw UsageError("semantically checked trusted entry has no domain");
  return ni_com_check(env, *entry.command, entry.label, *entry.domain);
}

std::string to_string(MonitorOutcome::Kind k) {
  switch (k) {
    case MonitorOutcome::Kind::Normal: return "Normal";
    case MonitorOutcome::Kind::OutOfFuel: return "OutOfFuel";
    case MonitorOutcome::Kind::Violation: return "Violation";
  }
  return {};
}

namespace {

class Monitor {
 public:
  explicit Monitor(const LabelEnv& env) : env_(env) {}

  MonitorOutcome::Kind exec(const Com& c, Label pc, Store& s) {
    switch (c.node.index()) {
      case 0: return Normal;
      case 1: {
        const auto& a = std::get<Assign>(c.node);
        if (!leq(join(tc_exp(env_, *a.rhs), pc), env_.of(a.slot))) {
          at = c.loc;
          return MonitorOutcome::Kind::Violation;
        }
        s[a.slot] = eval_exp(s, *a.rhs);
        return Normal;
      }
      case 2: {
        const auto& q = std::get<Seq>(c.node);
        auto k = exec(*q.first, pc, s);
        return k == Normal ? exec(*q.second, pc, s) : k;
      }
      case 3: {
        const auto& i = std::get<If>(c.node);
        Label inner = join(pc, tc_exp(env_, *i.guard));
        return exec(eval_exp(s, *i.guard) == 0 ? *i.then_branch : *i.else_branch, inner, s);
      }
      default: {
        const auto& w = std::get<While>(c.node);
        Label inner = join(pc, tc_exp(env_, *w.guard));
        if (eval_exp(s, *w.guard) == 0) return Normal;
        if (!w.metric) throw MissingMetric(c.loc);
        Value m = eval_exp(s, *w.metric);
        if (m < 0) return MonitorOutcome::Kind::OutOfFuel;
        while (true) {
          auto k = exec(*w.body, inner, s);
          if (k != Normal) return k;
          Value next = eval_exp(s, *w.metric);
          if (next < 0 || next >= m) return MonitorOutcome::Kind::OutOfFuel;
          m = next;
          if (eval_exp(s, *w.guard) == 0) return Normal;
        }
      }
    }
  }

  std::optional<SourceLoc> at;

 private:
  static constexpr auto Normal = MonitorOutcome::Kind::Normal;
  const LabelEnv& env_;
};

}  // namespace

MonitorOutcome monitor_run(const LabelEnv& env, Label pc, const Com& c, const Store& s) {
  Monitor m(env);
  Store out = s;
  auto kind = m.exec(c, pc, out);
  return MonitorOutcome{kind, std::move(out), m.at};
}

Verdict<PairWitness> dyn_ifc_check(const LabelEnv& env, const Com& c, Label pc, const TestDomain& d,
                                   const MonitorFn& monitor) {
  require_metrics(c);
  Verdict<PairWitness> v;
  charge(d, 2 * env.vars->size());
  auto stores = all_stores(env.vars, d);
  std::vector<MonitorOutcome> runs;
  runs.reserve(stores.size());
  for (const auto& s : stores) runs.push_back(monitor(env, pc, c, s));
  for (std::size_t i = 0; i < stores.size(); ++i) {
    if (runs[i].kind != MonitorOutcome::Kind::Normal) continue;
    for (std::size_t j = 0; j < stores.size(); ++j) {
      if (runs[j].kind != MonitorOutcome::Kind::Normal || !low_equiv(env, stores[i], stores[j])) continue;
      ++v.examined;
      if (!low_equiv(env, runs[i].store, runs[j].store)) {
        v.counterexample = PairWitness{stores[i], stores[j]};
        return v;
      }
    }
  }
  return v;
}

Verdict<PairWitness> delimited_release_check(const LabelEnv& env, const Program& p, const std::vector<ExpPtr>& declass,
                                             const TestDomain& d) {
  require_metrics(*p.body);
  Verdict<PairWitness> v;
  charge(d, 2 * env.vars->size());
  auto stores = all_stores(env.vars, d);
  auto runs = run_all(*p.body, stores);
  std::vector<std::vector<Value>> released(stores.size());
  for (std::size_t i = 0; i < stores.size(); ++i) {
    for (const auto& e : declass) released[i].push_back(eval_exp(stores[i], *e));
  }
  for (std::size_t i = 0; i < stores.size(); ++i) {
    if (!runs[i].normal()) continue;
    for (std::size_t j = 0; j < stores.size(); ++j) {
      if (!runs[j].normal() || !low_equiv(env, stores[i], stores[j]) || released[i] != released[j]) continue;
      ++v.examined;
      if (!low_equiv(env, runs[i].store, runs[j].store)) {
        v.counterexample = PairWitness{stores[i], stores[j]};
        return v;
      }
    }
  }
  return v;
}

}  // namespace relcheck::ifc
