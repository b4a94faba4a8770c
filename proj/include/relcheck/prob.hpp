#pragma once

// Sampling programs over a finite tape of uniformly distributed q-bit cells.
// Masses are exact tape counts and probabilities exact rationals.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relcheck/common.hpp"

namespace relcheck::prob {

/// Tapes beyond this many configurations need an explicit cap.
inline constexpr std::uint64_t kTapeCap = std::uint64_t{1} << 20;

struct BitVec {
  unsigned width = 0;
  std::uint64_t value = 0;

  friend bool operator==(const BitVec&, const BitVec&) = default;
};

/// Throws WidthMismatch when value does not fit in width bits.
BitVec make_bv(unsigned width, std::uint64_t value);
BitVec operator^(const BitVec& a, const BitVec& b);  // WidthMismatch on differing widths
std::string to_string(const BitVec& b);             // binary, e.g. "10"

using Tape = std::vector<BitVec>;
std::string to_string(const Tape& t);  // "[11,01]"

struct VecExp;
using VecExpPtr = std::shared_ptr<const VecExp>;

struct ConstV {
  BitVec value;
};
struct ParamV {
  std::string name;
};
struct VarV {
  std::string name;
};
struct XorV {
  VecExpPtr lhs;
  VecExpPtr rhs;
};
struct VecExp {
  std::variant<ConstV, ParamV, VarV, XorV> node;
};

struct RandProg;
using RandProgPtr = std::shared_ptr<const RandProg>;

struct SampleBind {
  std::string var;
  RandProgPtr rest;
};
struct ReturnV {
  VecExpPtr exp;
};
struct RandProg {
  std::variant<SampleBind, ReturnV> node;
};

VecExpPtr const_v(BitVec v);
VecExpPtr param_v(std::string name);
VecExpPtr var_v(std::string name);
VecExpPtr xor_v(VecExpPtr a, VecExpPtr b);
RandProgPtr sample_bind(std::string var, RandProgPtr rest);
RandProgPtr return_v(VecExpPtr e);

/// let k = sample () in m xor k
RandProgPtr otp();

/// (sample k (return (xor (param m) (var k)))); integer literals are
/// constants of width q. Unbound (var ...) is a ParseError.
RandProgPtr parse_rand_prog(std::string_view text, unsigned q);
std::string to_string(const RandProg& p);

std::size_t sample_count(const RandProg& p);

using Params = std::map<std::string, BitVec>;

struct RandResult {
  std::optional<BitVec> result;
  std::size_t next = 0;
};

/// Consumes cells from position 0, one per sample. A sample past the end of
/// the tape yields no result.
RandResult run_rand(const RandProg& p, const Params& params, const Tape& t);

using Pred = std::function<bool(const std::optional<BitVec>&)>;

Pred point(BitVec c);

/// (2^q)^s, throwing BudgetExceeded above cap.
std::uint64_t tape_count(unsigned q, std::size_t s, std::uint64_t cap = kTapeCap);

/// Calls f on every tape of s cells of width q; cell 0 varies slowest.
void for_each_tape(unsigned q, std::size_t s, const std::function<void(const Tape&)>& f,
                   std::uint64_t cap = kTapeCap);

/// Number of tapes on which pred holds of the result.
std::uint64_t mass(const RandProg& p, const Params& params, const Pred& pred, unsigned q, std::size_t s,
                   std::uint64_t cap = kTapeCap);

/// Reduced nonnegative fraction.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::uint64_t num, std::uint64_t den);
std::string to_string(const Rational& r);

Rational pr(const RandProg& p, const Params& params, const Pred& pred, unsigned q, std::size_t s,
            std::uint64_t cap = kTapeCap);

struct OtpCheck {
  std::uint64_t mass0 = 0;
  std::uint64_t mass1 = 0;
  Rational pr0;
  Rational pr1;

  bool passed() const { return mass0 == mass1; }
};

/// mass(otp m0, point c) against mass(otp m1, point c).
OtpCheck check_otp_secrecy(unsigned q, std::size_t s, BitVec m0, BitVec m1, BitVec c, std::uint64_t cap = kTapeCap);

/// Cell i of a tape maps to cell i xor offsets[i]; self-inverse.
struct TapeBijection {
  std::vector<BitVec> offsets;

  Tape apply(const Tape& t) const;
};

TapeBijection identity_bijection(unsigned q, std::size_t s);
/// Offset m0 xor m1 on cell 0, zero elsewhere.
TapeBijection otp_bijection(unsigned q, std::size_t s, BitVec m0, BitVec m1);

struct MassLeqResult {
  std::optional<Tape> counterexample;  // a tape where pred1(p1 t) > pred2(p2 (bij t))
  std::uint64_t mass1 = 0;
  std::uint64_t mass2 = 0;
  std::uint64_t examined = 0;

  bool passed() const { return !counterexample; }
};

/// Checks the pointwise premise on every tape. When it holds, both masses
/// are also computed directly and mass1 <= mass2 is asserted.
MassLeqResult mass_leq_check(const RandProg& p1, const Params& params1, const RandProg& p2, const Params& params2,
                             const Pred& pred1, const Pred& pred2, const TapeBijection& bij, unsigned q, std::size_t s,
                             std::uint64_t cap = kTapeCap);

}  // namespace relcheck::prob
