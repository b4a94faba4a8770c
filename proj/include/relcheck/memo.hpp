#pragma once

// Memoization of total functions and of well-founded recursive functions
// given as skeletons. States are immutable maps threaded through calls.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relcheck/common.hpp"

namespace relcheck::memo {

using Nat = std::uint64_t;
using MemoState = std::map<Nat, Value>;

std::string to_string(const MemoState& st);  // "{0↦1,1↦1}"

struct CallTrace {
  std::uint64_t reference_calls = 0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t skeleton_evals = 0;
};

using Oracle = std::function<Value(Nat)>;

/// A recursive function with its recursive calls routed through an oracle.
/// Evaluating at x may only consult the oracle below x.
struct Skeleton {
  std::string name;
  std::function<Value(Nat, const Oracle&)> body;
};

/// fib(x) = 1 for x <= 1, else fib(x-1) + fib(x-2).
Skeleton fib_skel();

std::optional<Skeleton> find_skeleton(std::string_view name);
std::vector<std::string> skeleton_names();

using RefFn = std::function<Value(Nat)>;

/// Plain recursion; throws WellFoundednessViolation on a non-descending call.
Value fixp(const Skeleton& sk, Nat x, CallTrace* trace = nullptr);

bool valid_memo(const MemoState& st, const RefFn& g);

std::pair<Value, MemoState> memoize(const RefFn& g, Nat x, const MemoState& st, CallTrace* trace = nullptr);

/// Caches x and every recursive sub-call.
std::pair<Value, MemoState> memoize_rec(const Skeleton& sk, Nat x, const MemoState& st, CallTrace* trace = nullptr);

using MemoFn = std::function<std::pair<Value, MemoState>(Nat, const MemoState&)>;
using StateSampler = std::function<MemoState(Rng&)>;

/// Random subsets of g's graph over [0, bound].
StateSampler subset_sampler(RefFn g, Nat bound);

struct ComputesWitness {
  Nat x = 0;
  MemoState state;
  Value got = 0;
  Value expected = 0;
  std::string reason;
};

/// For every x <= bound and each sampled valid state (the first trial uses
/// the empty state): the result equals reference(x) and the returned state
/// is valid and extends the input.
Verdict<ComputesWitness> computes_check(const MemoFn& memoized, const RefFn& reference, Nat bound,
                                        const StateSampler& sampler, std::uint64_t trials, std::uint64_t seed);

}  // namespace relcheck::memo
