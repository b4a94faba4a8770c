#include <algorithm>

#include "relcheck/relsem.hpp"

namespace relcheck {

VarSet parse_var_set(std::string_view text) {
  VarSet out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string to_string(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) out += ',';
    out += v;
    first = false;
  }
  return out + "}";
}

namespace {

std::vector<bool> mask_of(const VarList& vars, const VarSet& set) {
  std::vector<bool> mask(vars.size(), false);
  for (const auto& name : set) {
    auto slot = slot_of(vars, name);
    if (!slot) throw UndeclaredVariable(name);
    mask[*slot] = true;
  }
  return mask;
}

bool agree_on(const Store& a, const Store& b, const std::vector<bool>& mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i] && a[i] != b[i]) return false;
  }
  return true;
}

std::vector<Outcome> run_all(const Program& p, const std::vector<Store>& stores) {
  require_metrics(*p.body);
  std::vector<Outcome> out;
  out.reserve(stores.size());
  for (const auto& s : stores) out.push_back(run_metric(*p.body, s));
  return out;
}

VarSet intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

}  // namespace

Verdict<WritesWitness> check_writes(const Program& p, const VarSet& ws, const TestDomain& d) {
  auto mask = mask_of(*p.vars, ws);
  auto stores = all_stores(p.vars, d);
  auto runs = run_all(p, stores);
  Verdict<WritesWitness> v;
  for (std::size_t k = 0; k < stores.size(); ++k) {
    ++v.examined;
    if (!runs[k].normal()) continue;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask[i] && runs[k].store[i] != stores[k][i]) {
        v.counterexample = WritesWitness{stores[k], (*p.vars)[i]};
        return v;
      }
    }
  }
  return v;
}

Verdict<ReadsWitness> check_reads(const Program& p, const VarSet& rs, const VarSet& ws, const TestDomain& d) {
  auto rmask = mask_of(*p.vars, rs);
  auto wmask = mask_of(*p.vars, ws);
  charge(d, 2 * p.vars->size());
  auto stores = all_stores(p.vars, d);
  auto runs = run_all(p, stores);
  Verdict<ReadsWitness> v;
  for (std::size_t a = 0; a < stores.size(); ++a) {
    for (std::size_t b = 0; b < stores.size(); ++b) {
      if (!agree_on(stores[a], stores[b], rmask)) continue;
      ++v.examined;
      if (!runs[a].normal() || !runs[b].normal()) continue;
      for (std::size_t i = 0; i < wmask.size(); ++i) {
        if (wmask[i] && runs[a].store[i] != runs[b].store[i]) {
          v.counterexample = ReadsWitness{stores[a], stores[b], (*p.vars)[i]};
          return v;
        }
      }
    }
  }
  return v;
}

FootprintResult check_footprint(const Program& p, const Footprint& fp, const TestDomain& d) {
  FootprintResult r{check_writes(p, fp.writes, d), std::nullopt};
  if (r.writes.passed()) r.reads = check_reads(p, fp.reads, fp.writes, d);
  return r;
}

std::pair<Program, Program> unify(const Program& p1, const Program& p2) {
  if (*p1.vars == *p2.vars) return {p1, Program{p1.vars, p2.body}};
  VarList merged = *p1.vars;
  for (const auto& v : *p2.vars) {
    if (!slot_of(merged, v)) merged.push_back(v);
  }
  auto vars = make_vars(std::move(merged));
  return {Program{vars, rebind(p1.body, *vars)}, Program{vars, rebind(p2.body, *vars)}};
}

Program sequence(const Program& p1, const Program& p2) {
  if (*p1.vars != *p2.vars) throw UsageError("sequenced programs must share a variable list");
  return Program{p1.vars, make_seq(p1.body, p2.body)};
}

Verdict<EquivWitness> check_equiv(const Program& p1, const Program& p2, const TestDomain& d,
                                  const StoreFilter& filter) {
  auto [a, b] = unify(p1, p2);
  require_metrics(*a.body);
  require_metrics(*b.body);
  auto stores = all_stores(a.vars, d);
  Verdict<EquivWitness> v;
  for (const auto& s : stores) {
    if (filter && !filter(s)) continue;
    ++v.examined;
    auto left = run_metric(*a.body, s);
    auto right = run_metric(*b.body, s);
    bool ok = left.normal() ? (right.normal() && left.store == right.store) : !right.normal();
    if (!ok) {
      v.counterexample = EquivWitness{s, std::move(left), std::move(right)};
      return v;
    }
  }
  return v;
}

std::optional<Transformation> parse_transformation(std::string_view name) {
  if (name == "swap") return Transformation::Swap;
  if (name == "idem" || name == "idempotence") return Transformation::Idempotence;
  if (name == "redundant_writes" || name == "redundant-writes") return Transformation::RedundantWrites;
  return std::nullopt;
}

std::string to_string(Transformation t) {
  switch (t) {
    case Transformation::Swap: return "swap";
    case Transformation::Idempotence: return "idem";
    case Transformation::RedundantWrites: return "redundant_writes";
  }
  return "?";
}

TransformResult check_transformation(Transformation kind, const Program& p1, const std::optional<Program>& p2,
                                     const Footprint& fp1, const std::optional<Footprint>& fp2,
                                     const TestDomain& d) {
  using Status = TransformResult::Status;
  TransformResult result;
  bool binary = kind != Transformation::Idempotence;
  if (binary && (!p2 || !fp2)) throw UsageError(to_string(kind) + " needs two programs and two footprints");

  Program a = p1;
  Program b = binary ? *p2 : p1;
  if (binary) std::tie(a, b) = unify(p1, *p2);

  auto validate = [&](const Program& p, const Footprint& fp, const std::string& which) {
    auto r = check_footprint(p, fp, d);
    if (!r.writes.passed()) {
      result.status = Status::PreconditionViolation;
      result.detail = which + " writes outside " + to_string(fp.writes) + ": " + r.writes.counterexample->var;
      result.store = r.writes.counterexample->store;
      return false;
    }
    if (!r.reads->passed()) {
      result.status = Status::PreconditionViolation;
      result.detail = which + " reads outside " + to_string(fp.reads) + ": " + r.reads->counterexample->var +
                      " differs";
      result.store = r.reads->counterexample->s0;
      return false;
    }
    return true;
  };
  if (!validate(a, fp1, "fp1")) return result;
  if (binary && !validate(b, *fp2, "fp2")) return result;

  auto disjoint = [&](const VarSet& x, const VarSet& y, const std::string& name) {
    auto common = intersect(x, y);
    if (common.empty()) return true;
    result.status = Status::PreconditionViolation;
    result.detail = name + " = " + to_string(common);
    return false;
  };

  Program lhs, rhs;
  switch (kind) {
    case Transformation::Swap:
      if (!disjoint(fp1.writes, fp2->writes, "ws1 ∩ ws2") || !disjoint(fp1.reads, fp2->writes, "rs1 ∩ ws2") ||
          !disjoint(fp2->reads, fp1.writes, "rs2 ∩ ws1")) {
        return result;
      }
      lhs = sequence(a, b);
      rhs = sequence(b, a);
      break;
    case Transformation::Idempotence:
      if (!disjoint(fp1.reads, fp1.writes, "rs ∩ ws")) return result;
      lhs = sequence(a, a);
      rhs = a;
      break;
    case Transformation::RedundantWrites: {
      if (!disjoint(fp1.writes, fp2->reads, "ws1 ∩ rs2")) return result;
      VarSet extra;
      std::set_difference(fp1.writes.begin(), fp1.writes.end(), fp2->writes.begin(), fp2->writes.end(),
                          std::inserter(extra, extra.end()));
      if (!extra.empty()) {
        result.status = Status::PreconditionViolation;
        result.detail = "ws1 \\ ws2 = " + to_string(extra);
        return result;
      }
      lhs = sequence(a, b);
      rhs = b;
      break;
    }
  }

  auto eq = check_equiv(lhs, rhs, d);
  result.examined = eq.examined;
  if (!eq.passed()) {
    result.status = Status::Counterexample;
    result.detail = "composed programs disagree";
    result.store = eq.counterexample->store;
  }
  return result;
}

}  // namespace relcheck
