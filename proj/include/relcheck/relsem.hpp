#pragma once

// Semantic footprints and command equivalence, checked by exhaustive
// enumeration of stores over a TestDomain. Results are bounded evidence over
// that domain, not proofs. Runs that end OutOfFuel are excluded from the
// footprint quantifiers.

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "relcheck/domain.hpp"
#include "relcheck/lang.hpp"

namespace relcheck {

using VarSet = std::set<std::string>;

struct Footprint {
  VarSet reads;
  VarSet writes;
};

VarSet parse_var_set(std::string_view text);  // "a,b"; empty text is the empty set
std::string to_string(const VarSet& s);     // "{a,b}"

struct WritesWitness {
  Store store;
  std::string var;
};
struct ReadsWitness {
  Store s0;
  Store s1;
  std::string var;
};
struct EquivWitness {
  Store store;
  Outcome left;
  Outcome right;
};

/// Every variable outside ws is unchanged by every Normal run.
Verdict<WritesWitness> check_writes(const Program& p, const VarSet& ws, const TestDomain& d);

/// Stores agreeing on rs yield final stores agreeing on ws. Assumes
/// check_writes(p, ws, d) passed.
Verdict<ReadsWitness> check_reads(const Program& p, const VarSet& rs, const VarSet& ws, const TestDomain& d);

struct FootprintResult {
  Verdict<WritesWitness> writes;
  std::optional<Verdict<ReadsWitness>> reads;  // absent when writes failed

  bool passed() const { return writes.passed() && reads && reads->passed(); }
};

/// check_writes followed by check_reads.
FootprintResult check_footprint(const Program& p, const Footprint& fp, const TestDomain& d);

using StoreFilter = std::function<bool(const Store&)>;

/// Both runs Normal with equal stores, or both OutOfFuel, on every store
/// accepted by `filter`. The programs must declare the same variable list.
Verdict<EquivWitness> check_equiv(const Program& p1, const Program& p2, const TestDomain& d,
                                  const StoreFilter& filter = {});

/// Rebinds both programs onto the union of their declarations (p1's order
/// first, then variables only p2 declares).
std::pair<Program, Program> unify(const Program& p1, const Program& p2);

/// Seq(p1.body, p2.body); both must already share a declaration list.
Program sequence(const Program& p1, const Program& p2);

enum class Transformation { Swap, Idempotence, RedundantWrites };

std::optional<Transformation> parse_transformation(std::string_view name);
std::string to_string(Transformation t);

struct TransformResult {
  enum class Status { Pass, PreconditionViolation, Counterexample };
  Status status = Status::Pass;
  std::string detail;
  std::optional<Store> store;
  std::uint64_t examined = 0;
};

/// Validates the declared footprints, checks the lemma's side conditions
/// over them, then compares the two composed programs:
///   swap             p1;p2 ~ p2;p1   ws1#ws2, rs1#ws2, rs2#ws1
///   idem             p1;p1 ~ p1      rs1#ws1
///   redundant_writes p1;p2 ~ p2      ws1#rs2, ws1 <= ws2
TransformResult check_transformation(Transformation kind, const Program& p1, const std::optional<Program>& p2,
                                     const Footprint& fp1, const std::optional<Footprint>& fp2,
                                     const TestDomain& d);

}  // namespace relcheck
