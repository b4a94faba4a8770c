#include "relcheck/unionfind.hpp"

#include <stdexcept>

namespace relcheck::uf {

std::vector<std::size_t> IndexSet::items() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kMaxElements; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string IndexSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto i : items()) {
    if (!first) out += ',';
    first = false;
    out += std::to_string(i);
  }
  return out + "}";
}

std::string to_string(const UFForest& uf) {
  std::string parents = "parents [";
  std::string ranks = "ranks [";
  for (std::size_t i = 0; i < uf.size(); ++i) {
    if (i) {
      parents += ',';
      ranks += ',';
    }
    parents += std::to_string(uf.entries[i].parent);
    ranks += std::to_string(uf.entries[i].rank);
  }
  return parents + "] " + ranks + "]";
}

UFForest fresh(std::size_t n) {
  if (n > kMaxElements) throw std::invalid_argument("union-find supports at most 64 elements");
  UFForest uf;
  for (std::size_t i = 0; i < n; ++i) uf.entries.push_back(Entry{i, 0, IndexSet::single(i)});
  return uf;
}

namespace {

void require_index(const UFForest& uf, std::size_t i) {
  if (i >= uf.size()) throw IndexOutOfRange(i, uf.size());
}

// Number of links from i to its root, or nullopt if the chain cycles.
std::optional<std::size_t> depth_of(const std::vector<std::size_t>& parents, std::size_t i) {
  std::size_t steps = 0;
  while (parents[i] != i) {
    if (++steps > parents.size()) return std::nullopt;
    i = parents[i];
  }
  return steps;
}

}  // namespace

UFForest from_parents(const std::vector<std::size_t>& parents) {
  UFForest uf = fresh(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i] >= parents.size()) throw std::invalid_argument("parent index out of range");
    if (!depth_of(parents, i)) throw std::invalid_argument("parent links form a cycle");
    uf.entries[i].parent = parents[i];
  }
  for (std::size_t i = 0; i < parents.size(); ++i) {
    std::size_t j = i;
    std::size_t up = 0;
    while (parents[j] != j) {
      j = parents[j];
      ++up;
      uf.entries[j].subtree.insert(i);
      if (up > uf.entries[j].rank) uf.entries[j].rank = up;
    }
  }
  return uf;
}

std::size_t find(const UFForest& uf, std::size_t i) {
  require_index(uf, i);
  for (std::size_t steps = 0; steps <= uf.size(); ++steps) {
    std::size_t p = uf.entries[i].parent;
    if (p == i) return i;
    i = p;
  }
  throw std::logic_error("parent chain longer than the forest");
}

UFForest unite(const UFForest& uf, std::size_t i1, std::size_t i2) {
  std::size_t r1 = find(uf, i1);
  std::size_t r2 = find(uf, i2);
  if (r1 == r2) return uf;
  UFForest out = uf;
  out.entries[r1].parent = r2;
  out.entries[r2].subtree = uf.entries[r1].subtree | uf.entries[r2].subtree;
  return out;
}

UFForest union_by_rank(const UFForest& uf, std::size_t i1, std::size_t i2) {
  std::size_t r1 = find(uf, i1);
  std::size_t r2 = find(uf, i2);
  if (r1 == r2) return uf;
  UFForest out = uf;
  std::size_t d1 = uf.entries[r1].rank;
  std::size_t d2 = uf.entries[r2].rank;
  IndexSet merged = uf.entries[r1].subtree | uf.entries[r2].subtree;
  if (d1 < d2) {
    out.entries[r1].parent = r2;
    out.entries[r2].subtree = merged;
  } else {
    out.entries[r2].parent = r1;
    out.entries[r1].subtree = merged;
    if (d1 == d2) out.entries[r1].rank = d1 + 1;
  }
  return out;
}

std::pair<std::size_t, UFForest> find_compress(const UFForest& uf, std::size_t i) {
  std::size_t r = find(uf, i);
  UFForest out = uf;
  while (i != r) {
    std::size_t p = out.entries[i].parent;
    out.entries[i].parent = r;
    i = p;
  }
  return {r, std::move(out)};
}

std::optional<std::string> check_invariants(const UFForest& uf) {
  const std::size_t n = uf.size();
  std::vector<std::size_t> parents;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = uf.entries[i];
    if (e.parent >= n) return "parent of " + std::to_string(i) + " is out of range";
    if (!e.subtree.contains(i)) return std::to_string(i) + " is not in its own subtree";
    if (!e.subtree.below(n)) return "subtree of " + std::to_string(i) + " leaves the index range";
    parents.push_back(e.parent);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!depth_of(parents, i)) return "parent chain from " + std::to_string(i) + " cycles";
    const auto& e = uf.entries[i];
    if (e.parent != i) {
      const auto& up = uf.entries[e.parent].subtree;
      if (!e.subtree.subset_of(up) || e.subtree == up) {
        return "subtree of " + std::to_string(i) + " is not strictly inside its parent's";
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (parents[a] == a && parents[b] == b && uf.entries[a].subtree.intersects(uf.entries[b].subtree)) {
        return "roots " + std::to_string(a) + " and " + std::to_string(b) + " share subtree elements";
      }
    }
  }
  return std::nullopt;
}

std::size_t height(const UFForest& uf, std::size_t i) {
  require_index(uf, i);
  std::size_t best = 0;
  for (std::size_t j = 0; j < uf.size(); ++j) {
    std::size_t k = j;
    std::size_t up = 0;
    while (k != i && uf.entries[k].parent != k) {
      k = uf.entries[k].parent;
      ++up;
    }
    if (k == i && up > best) best = up;
  }
  return best;
}

std::optional<std::string> check_rank_bound(const UFForest& uf) {
  for (std::size_t i = 0; i < uf.size(); ++i) {
    if (uf.entries[i].parent != i) continue;
    auto h = height(uf, i);
    if (h > uf.entries[i].rank) {
      return "tree at " + std::to_string(i) + " has height " + std::to_string(h) + " above rank " +
             std::to_string(uf.entries[i].rank);
    }
  }
  return std::nullopt;
}

bool equal_but_rank(const UFForest& a, const UFForest& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.entries[i].parent != b.entries[i].parent || a.entries[i].subtree != b.entries[i].subtree) return false;
  }
  return true;
}

bool same_partition(const UFForest& a, const UFForest& b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  std::vector<std::size_t> ra(n), rb(n);
  for (std::size_t j = 0; j < n; ++j) {
    ra[j] = find(a, j);
    rb[j] = find(b, j);
  }
  for (std::size_t j1 = 0; j1 < n; ++j1) {
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      if ((ra[j1] == ra[j2]) != (rb[j1] == rb[j2])) return false;
    }
  }
  return true;
}

std::vector<UFForest> exhaustive_forests(std::size_t n, std::size_t max_depth) {
  if (n > 7) throw UsageError("exhaustive forests are limited to n <= 7");
  std::vector<UFForest> out;
  std::vector<std::size_t> parents(n, 0);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto d = depth_of(parents, i);
      ok = d && *d <= max_depth;
    }
    if (ok) out.push_back(from_parents(parents));
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++parents[k] < n) break;
      parents[k] = 0;
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

UFForest random_forest(std::size_t n, Rng& rng) {
  UFForest uf = fresh(n);
  if (n == 0) return uf;
  auto k = rng.below(2 * n);
  for (std::uint64_t step = 0; step < k; ++step) uf = union_by_rank(uf, rng.below(n), rng.below(n));
  return uf;
}

namespace {

// Calls f on each test forest: every exhaustive shape of every size up to n,
// or `trials` random forests of random size.
template <class F>
bool for_each_forest(std::size_t n, const RefineParams& params, F&& f, std::uint64_t& examined) {
  if (params.exhaustive) {
    for (std::size_t m = 1; m <= n; ++m) {
      for (const auto& uf : exhaustive_forests(m, params.max_depth)) {
        ++examined;
        if (!f(uf)) return false;
      }
    }
    return true;
  }
  Rng rng(params.seed);
  for (std::uint64_t t = 0; t < params.trials; ++t) {
    std::size_t m = 1 + rng.below(n);
    ++examined;
    if (!f(random_forest(m, rng))) return false;
  }
  return true;
}

UFForest with_ranks(UFForest uf, const std::vector<std::size_t>& ranks) {
  for (std::size_t i = 0; i < uf.size(); ++i) uf.entries[i].rank = ranks[i];
  return uf;
}

}  // namespace

Verdict<RefineWitness> rank_independence_check(std::size_t n, const RefineParams& params, const UnionFn& union_impl,
                                               const FindFn& find_impl) {
  Verdict<RefineWitness> v;
  Rng rank_rng(params.seed ^ 0x5bd1e995ULL);
  auto compare = [&](const UFForest& h1, const UFForest& h2) {
    const std::size_t m = h1.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (find_impl(h1, i) != find_impl(h2, i)) {
        v.counterexample = RefineWitness{h1, h2, {i}, "find results differ"};
        return false;
      }
    }
    for (std::size_t i1 = 0; i1 < m; ++i1) {
      for (std::size_t i2 = 0; i2 < m; ++i2) {
        auto u1 = union_impl(h1, i1, i2);
        auto u2 = union_impl(h2, i1, i2);
        if (!equal_but_rank(u1, u2)) {
          v.counterexample = RefineWitness{h1, h2, {i1, i2}, "union results differ beyond ranks"};
          return false;
        }
      }
    }
    return true;
  };
  for_each_forest(n, params, [&](const UFForest& uf) {
    const std::size_t m = uf.size();
    if (params.exhaustive) {
      std::vector<std::size_t> ranks(m, 0);
      while (true) {
        if (!compare(uf, with_ranks(uf, ranks))) return false;
        std::size_t k = m;
        while (k > 0) {
          --k;
          if (++ranks[k] <= 2) break;
          ranks[k] = 0;
          if (k == 0) return true;
        }
      }
    }
    std::vector<std::size_t> ranks(m);
    for (auto& r : ranks) r = rank_rng.below(3);
    return compare(uf, with_ranks(uf, ranks));
  }, v.examined);
  return v;
}

Verdict<RefineWitness> union_by_rank_refinement_check(std::size_t n, const RefineParams& params,
                                                      const UnionFn& optimized) {
  Verdict<RefineWitness> v;
  for_each_forest(n, params, [&](const UFForest& uf) {
    const std::size_t m = uf.size();
    for (std::size_t i1 = 0; i1 < m; ++i1) {
      for (std::size_t i2 = 0; i2 < m; ++i2) {
        auto a = unite(uf, i1, i2);
        auto b = optimized(uf, i1, i2);
        if (auto bad = check_invariants(b)) {
          v.counterexample = RefineWitness{uf, b, {i1, i2}, "optimized union broke an invariant: " + *bad};
          return false;
        }
        if (!same_partition(a, b)) {
          v.counterexample = RefineWitness{a, b, {i1, i2}, "partitions differ after union"};
          return false;
        }
      }
    }
    return true;
  }, v.examined);
  return v;
}

Verdict<RefineWitness> find_compress_refinement_check(std::size_t n, const RefineParams& params,
                                                      const CompressFn& optimized) {
  Verdict<RefineWitness> v;
  for_each_forest(n, params, [&](const UFForest& uf) {
    for (std::size_t i = 0; i < uf.size(); ++i) {
      auto r1 = find(uf, i);
      auto [r2, compressed] = optimized(uf, i);
      if (r1 != r2) {
        v.counterexample = RefineWitness{uf, compressed, {i}, "roots differ"};
        return false;
      }
      if (compressed.size() != uf.size()) {
        v.counterexample = RefineWitness{uf, compressed, {i}, "forest size changed"};
        return false;
      }
      if (auto bad = check_invariants(compressed)) {
        v.counterexample = RefineWitness{uf, compressed, {i}, "compression broke an invariant: " + *bad};
        return false;
      }
      if (!same_partition(uf, compressed)) {
        v.counterexample = RefineWitness{uf, compressed, {i}, "partitions differ after compression"};
        return false;
      }
    }
    return true;
  }, v.examined);
  return v;
}

}  // namespace relcheck::uf
