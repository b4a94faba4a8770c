#include "relcheck/prob.hpp"

#include <numeric>
#include <set>

#include "relcheck/sexp.hpp"

namespace relcheck::prob {

BitVec make_bv(unsigned width, std::uint64_t value) {
  if (width == 0 || width > 32) throw WidthMismatch("bit-vector width must be between 1 and 32");
  if (value >> width) {
    throw WidthMismatch("value " + std::to_string(value) + " does not fit in " + std::to_string(width) + " bits");
  }
  return BitVec{width, value};
}

BitVec operator^(const BitVec& a, const BitVec& b) {
  if (a.width != b.width) {
    throw WidthMismatch("xor of widths " + std::to_string(a.width) + " and " + std::to_string(b.width));
  }
  return BitVec{a.width, a.value ^ b.value};
}

std::string to_string(const BitVec& b) {
  std::string out;
  for (unsigned i = b.width; i-- > 0;) out += ((b.value >> i) & 1U) ? '1' : '0';
  return out;
}

std::string to_string(const Tape& t) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += to_string(t[i]);
  }
  return out + "]";
}

VecExpPtr const_v(BitVec v) { return std::make_shared<const VecExp>(VecExp{ConstV{v}}); }
VecExpPtr param_v(std::string name) { return std::make_shared<const VecExp>(VecExp{ParamV{std::move(name)}}); }
VecExpPtr var_v(std::string name) { return std::make_shared<const VecExp>(VecExp{VarV{std::move(name)}}); }
VecExpPtr xor_v(VecExpPtr a, VecExpPtr b) {
  return std::make_shared<const VecExp>(VecExp{XorV{std::move(a), std::move(b)}});
}
RandProgPtr sample_bind(std::string var, RandProgPtr rest) {
  return std::make_shared<const RandProg>(RandProg{SampleBind{std::move(var), std::move(rest)}});
}
RandProgPtr return_v(VecExpPtr e) { return std::make_shared<const RandProg>(RandProg{ReturnV{std::move(e)}}); }

RandProgPtr otp() { return sample_bind("k", return_v(xor_v(param_v("m"), var_v("k")))); }

namespace {

using sexp::Node;

VecExpPtr parse_vec(const Node& n, unsigned q, const std::set<std::string>& bound) {
  if (n.kind == Node::Kind::Integer) {
    if (n.integer < 0) sexp::fail(n, "constants must be nonnegative");
    try {
      return const_v(make_bv(q, static_cast<std::uint64_t>(n.integer)));
    } catch (const WidthMismatch& e) {
      sexp::fail(n, e.what());
    }
  }
  auto head = n.head();
  if ((head == "param" || head == "var") && n.items.size() == 2 && n.items[1].kind == Node::Kind::Symbol) {
    const auto& name = n.items[1].text;
    if (head == "param") return param_v(name);
    if (!bound.count(name)) sexp::fail(n, "variable " + name + " is not bound by a sample");
    return var_v(name);
  }
  if (head == "xor" && n.items.size() >= 3) {
    auto acc = parse_vec(n.items[1], q, bound);
    for (std::size_t i = 2; i < n.items.size(); ++i) acc = xor_v(acc, parse_vec(n.items[i], q, bound));
    return acc;
  }
  sexp::fail(n, "expected (param m), (var k), (xor e e) or a constant, got " + sexp::to_string(n));
}

RandProgPtr parse_prog(const Node& n, unsigned q, std::set<std::string> bound) {
  auto head = n.head();
  if (head == "sample") {
    if (n.items.size() != 3 || n.items[1].kind != Node::Kind::Symbol) sexp::fail(n, "expected (sample var rest)");
    const auto& var = n.items[1].text;
    bound.insert(var);
    return sample_bind(var, parse_prog(n.items[2], q, std::move(bound)));
  }
  if (head == "return") {
    if (n.items.size() != 2) sexp::fail(n, "expected (return exp)");
    return return_v(parse_vec(n.items[1], q, bound));
  }
  sexp::fail(n, "expected (sample ...) or (return ...)");
}

std::string vec_string(const VecExp& e) {
  if (const auto* c = std::get_if<ConstV>(&e.node)) return std::to_string(c->value.value);
  if (const auto* p = std::get_if<ParamV>(&e.node)) return "(param " + p->name + ")";
  if (const auto* v = std::get_if<VarV>(&e.node)) return "(var " + v->name + ")";
  const auto& x = std::get<XorV>(e.node);
  return "(xor " + vec_string(*x.lhs) + " " + vec_string(*x.rhs) + ")";
}

BitVec eval_vec(const VecExp& e, const Params& params, const std::map<std::string, BitVec>& env) {
  if (const auto* c = std::get_if<ConstV>(&e.node)) return c->value;
  if (const auto* p = std::get_if<ParamV>(&e.node)) {
    auto it = params.find(p->name);
    if (it == params.end()) throw UsageError("no value supplied for parameter " + p->name);
    return it->second;
  }
  if (const auto* v = std::get_if<VarV>(&e.node)) {
    auto it = env.find(v->name);
    if (it == env.end()) throw UndeclaredVariable(v->name);
    return it->second;
  }
  const auto& x = std::get<XorV>(e.node);
  return eval_vec(*x.lhs, params, env) ^ eval_vec(*x.rhs, params, env);
}

}  // namespace

RandProgPtr parse_rand_prog(std::string_view text, unsigned q) { return parse_prog(sexp::parse_one(text), q, {}); }

std::string to_string(const RandProg& p) {
  if (const auto* s = std::get_if<SampleBind>(&p.node)) return "(sample " + s->var + " " + to_string(*s->rest) + ")";
  return "(return " + vec_string(*std::get<ReturnV>(p.node).exp) + ")";
}

std::size_t sample_count(const RandProg& p) {
  std::size_t n = 0;
  const RandProg* cur = &p;
  while (const auto* s = std::get_if<SampleBind>(&cur->node)) {
    ++n;
    cur = s->rest.get();
  }
  return n;
}

RandResult run_rand(const RandProg& p, const Params& params, const Tape& t) {
  std::map<std::string, BitVec> env;
  std::size_t next = 0;
  const RandProg* cur = &p;
  while (const auto* s = std::get_if<SampleBind>(&cur->node)) {
    if (next >= t.size()) return RandResult{std::nullopt, next};
    env[s->var] = t[next++];
    cur = s->rest.get();
  }
  return RandResult{eval_vec(*std::get<ReturnV>(cur->node).exp, params, env), next};
}

Pred point(BitVec c) {
  return [c](const std::optional<BitVec>& r) { return r && *r == c; };
}

std::uint64_t tape_count(unsigned q, std::size_t s, std::uint64_t cap) {
  auto n = checked_pow(std::uint64_t{1} << q, s);
  if (!n || *n > cap) throw BudgetExceeded(n.value_or(UINT64_MAX), cap);
  return *n;
}

void for_each_tape(unsigned q, std::size_t s, const std::function<void(const Tape&)>& f, std::uint64_t cap) {
  std::uint64_t total = tape_count(q, s, cap);
  Tape t(s, make_bv(q, 0));
  const std::uint64_t top = (std::uint64_t{1} << q) - 1;
  for (std::uint64_t k = 0; k < total; ++k) {
    f(t);
    for (std::size_t i = s; i-- > 0;) {
      if (t[i].value < top) {
        ++t[i].value;
        break;
      }
      t[i].value = 0;
    }
  }
}

std::uint64_t mass(const RandProg& p, const Params& params, const Pred& pred, unsigned q, std::size_t s,
                   std::uint64_t cap) {
  std::uint64_t total = 0;
  for_each_tape(q, s, [&](const Tape& t) { total += pred(run_rand(p, params, t).result) ? 1 : 0; }, cap);
  return total;
}

Rational make_rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  auto g = std::gcd(num, den);
  if (g == 0) g = 1;
  return Rational{num / g, den / g};
}

std::string to_string(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

Rational pr(const RandProg& p, const Params& params, const Pred& pred, unsigned q, std::size_t s, std::uint64_t cap) {
  return make_rational(mass(p, params, pred, q, s, cap), tape_count(q, s, cap));
}

OtpCheck check_otp_secrecy(unsigned q, std::size_t s, BitVec m0, BitVec m1, BitVec c, std::uint64_t cap) {
  if (m0.width != q || m1.width != q || c.width != q) throw WidthMismatch("message and ciphertext widths must equal q");
  auto prog = otp();
  OtpCheck out;
  out.mass0 = mass(*prog, {{"m", m0}}, point(c), q, s, cap);
  out.mass1 = mass(*prog, {{"m", m1}}, point(c), q, s, cap);
  auto total = tape_count(q, s, cap);
  out.pr0 = make_rational(out.mass0, total);
  out.pr1 = make_rational(out.mass1, total);
  return out;
}

Tape TapeBijection::apply(const Tape& t) const {
  if (t.size() != offsets.size()) throw WidthMismatch("bijection length differs from tape length");
  Tape out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i] ^ offsets[i];
  return out;
}

TapeBijection identity_bijection(unsigned q, std::size_t s) { return TapeBijection{std::vector<BitVec>(s, make_bv(q, 0))}; }

TapeBijection otp_bijection(unsigned q, std::size_t s, BitVec m0, BitVec m1) {
  auto bij = identity_bijection(q, s);
  if (s > 0) bij.offsets[0] = m0 ^ m1;
  return bij;
}

MassLeqResult mass_leq_check(const RandProg& p1, const Params& params1, const RandProg& p2, const Params& params2,
                             const Pred& pred1, const Pred& pred2, const TapeBijection& bij, unsigned q, std::size_t s,
                             std::uint64_t cap) {
  if (bij.offsets.size() != s) throw WidthMismatch("bijection length differs from tape length");
  for (const auto& o : bij.offsets) {
    if (o.width != q) throw WidthMismatch("bijection offsets must have width q");
  }
  MassLeqResult out;
  for_each_tape(q, s, [&](const Tape& t) {
    if (out.counterexample) return;
    ++out.examined;
    int lhs = pred1(run_rand(p1, params1, t).result) ? 1 : 0;
    int rhs = pred2(run_rand(p2, params2, bij.apply(t)).result) ? 1 : 0;
    if (lhs > rhs) out.counterexample = t;
  }, cap);
  out.mass1 = mass(p1, params1, pred1, q, s, cap);
  out.mass2 = mass(p2, params2, pred2, q, s, cap);
  if (out.passed() && out.mass1 > out.mass2) {
    throw std::logic_error("pointwise premise held but mass inequality failed");
  }
  return out;
}

}  // namespace relcheck::prob
