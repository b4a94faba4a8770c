#include "relcheck/memo.hpp"

namespace relcheck::memo {

std::string to_string(const MemoState& st) {
  std::string out = "{";
  bool first = true;
  for (const auto& [x, y] : st) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(x) + "↦" + std::to_string(y);
  }
  return out + "}";
}

Skeleton fib_skel() {
  return Skeleton{"fib", [](Nat x, const Oracle& f) -> Value {
                    if (x <= 1) return 1;
                    Value r = 0;
                    if (__builtin_add_overflow(f(x - 1), f(x - 2), &r)) throw ArithmeticOverflow();
                    return r;
                  }};
}

std::optional<Skeleton> find_skeleton(std::string_view name) {
  if (name == "fib") return fib_skel();
  return std::nullopt;
}

std::vector<std::string> skeleton_names() { return {"fib"}; }

Value fixp(const Skeleton& sk, Nat x, CallTrace* trace) {
  if (trace) ++trace->skeleton_evals;
  Oracle oracle = [&](Nat y) {
    if (y >= x) throw WellFoundednessViolation(x, y);
    if (trace) ++trace->oracle_calls;
    return fixp(sk, y, trace);
  };
  return sk.body(x, oracle);
}

bool valid_memo(const MemoState& st, const RefFn& g) {
  for (const auto& [x, y] : st) {
    if (g(x) != y) return false;
  }
  return true;
}

std::pair<Value, MemoState> memoize(const RefFn& g, Nat x, const MemoState& st, CallTrace* trace) {
  if (auto it = st.find(x); it != st.end()) {
    if (trace) ++trace->cache_hits;
    return {it->second, st};
  }
  if (trace) ++trace->reference_calls;
  Value y = g(x);
  MemoState out = st;
  out.emplace(x, y);
  return {y, std::move(out)};
}

std::pair<Value, MemoState> memoize_rec(const Skeleton& sk, Nat x, const MemoState& st, CallTrace* trace) {
  if (auto it = st.find(x); it != st.end()) {
    if (trace) ++trace->cache_hits;
    return {it->second, st};
  }
  MemoState cur = st;
  Oracle oracle = [&](Nat y) {
    if (y >= x) throw WellFoundednessViolation(x, y);
    if (trace) ++trace->oracle_calls;
    auto [v, next] = memoize_rec(sk, y, cur, trace);
    cur = std::move(next);
    return v;
  };
  if (trace) ++trace->skeleton_evals;
  Value y = sk.body(x, oracle);
  cur.emplace(x, y);
  return {y, std::move(cur)};
}

StateSampler subset_sampler(RefFn g, Nat bound) {
  std::vector<Value> graph;
  for (Nat x = 0; x <= bound; ++x) graph.push_back(g(x));
  return [graph = std::move(graph)](Rng& rng) {
    MemoState st;
    for (Nat x = 0; x < graph.size(); ++x) {
      if (rng.coin()) st.emplace(x, graph[x]);
    }
    return st;
  };
}

Verdict<ComputesWitness> computes_check(const MemoFn& memoized, const RefFn& reference, Nat bound,
                                        const StateSampler& sampler, std::uint64_t trials, std::uint64_t seed) {
  Verdict<ComputesWitness> v;
  Rng rng(seed);
  std::vector<Value> expected;
  for (Nat x = 0; x <= bound; ++x) expected.push_back(reference(x));
  RefFn graph = [&](Nat x) { return x <= bound ? expected[x] : reference(x); };
  for (std::uint64_t t = 0; t < trials; ++t) {
    MemoState st = t == 0 ? MemoState{} : sampler(rng);
    for (Nat x = 0; x <= bound; ++x) {
      ++v.examined;
      auto [y, out] = memoized(x, st);
      std::string reason;
      if (y != expected[x]) {
        reason = "result differs from the reference";
      } else if (!valid_memo(out, graph)) {
        reason = "returned state holds a wrong entry";
      } else {
        for (const auto& [k, val] : st) {
          auto it = out.find(k);
          if (it == out.end() || it->second != val) {
            reason = "returned state dropped an input entry";
            break;
          }
        }
      }
      if (!reason.empty()) {
        v.counterexample = ComputesWitness{x, st, y, expected[x], reason};
        return v;
      }
    }
  }
  return v;
}

}  // namespace relcheck::memo
