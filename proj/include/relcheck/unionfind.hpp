#pragma once

// Union-find forests as immutable values. Each entry carries its parent, a
// rank, and the ghost subtree set used only by the invariant checker.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relcheck/common.hpp"

namespace relcheck::uf {

inline constexpr std::size_t kMaxElements = 64;

class IndexSet {
 public:
  IndexSet() = default;
  static IndexSet single(std::size_t i) {
    IndexSet s;
    s.insert(i);
    return s;
  }

  bool contains(std::size_t i) const { return i < kMaxElements && ((bits_ >> i) & 1U); }
  void insert(std::size_t i) { bits_ |= std::uint64_t{1} << i; }
  IndexSet operator|(IndexSet o) const { return IndexSet(bits_ | o.bits_); }
  bool intersects(IndexSet o) const { return (bits_ & o.bits_) != 0; }
  bool subset_of(IndexSet o) const { return (bits_ & ~o.bits_) == 0; }
  bool below(std::size_t n) const { return n >= kMaxElements || (bits_ >> n) == 0; }
  std::vector<std::size_t> items() const;
  std::string to_string() const;  // "{0,1}"

  friend bool operator==(IndexSet, IndexSet) = default;

 private:
  explicit IndexSet(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

struct Entry {
  std::size_t parent = 0;
  std::size_t rank = 0;
  IndexSet subtree;

  friend bool operator==(const Entry&, const Entry&) = default;
};

struct UFForest {
  std::vector<Entry> entries;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const UFForest&, const UFForest&) = default;
};

/// "parents [1,1,2] ranks [0,1,0]"
std::string to_string(const UFForest& uf);

UFForest fresh(std::size_t n);

/// Builds a forest from a parent array; subtrees are the descendant sets and
/// ranks the tree heights. Throws std::invalid_argument on cycles.
UFForest from_parents(const std::vector<std::size_t>& parents);

/// Root of i; follows at most n links.
std::size_t find(const UFForest& uf, std::size_t i);

/// r1 := find(i1) is pointed at r2 := find(i2).
UFForest unite(const UFForest& uf, std::size_t i1, std::size_t i2);

/// The lower-rank root goes under the higher; on a tie r2 goes under r1 and
/// r1's rank grows by one.
UFForest union_by_rank(const UFForest& uf, std::size_t i1, std::size_t i2);

/// Root of i, plus the forest with every node on i's path pointing at it.
std::pair<std::size_t, UFForest> find_compress(const UFForest& uf, std::size_t i);

/// First violated structural invariant, if any.
std::optional<std::string> check_invariants(const UFForest& uf);

/// Longest parent chain ending at i, in links.
std::size_t height(const UFForest& uf, std::size_t i);

/// First root whose tree is taller than its rank, if any.
std::optional<std::string> check_rank_bound(const UFForest& uf);

bool equal_but_rank(const UFForest& a, const UFForest& b);
bool same_partition(const UFForest& a, const UFForest& b);

/// Every forest on n elements whose parent chains have at most max_depth
/// links, in order of the parent array read as a base-n numeral.
std::vector<UFForest> exhaustive_forests(std::size_t n, std::size_t max_depth);

/// A fresh forest after a random number (below 2n) of random union_by_rank
/// calls.
UFForest random_forest(std::size_t n, Rng& rng);

using FindFn = std::function<std::size_t(const UFForest&, std::size_t)>;
using UnionFn = std::function<UFForest(const UFForest&, std::size_t, std::size_t)>;
using CompressFn = std::function<std::pair<std::size_t, UFForest>(const UFForest&, std::size_t)>;

struct RefineParams {
  bool exhaustive = true;
  std::size_t max_depth = 2;  // exhaustive mode
  std::uint64_t trials = 1000;  // randomized mode; sizes drawn from [1, n]
  std::uint64_t seed = 42;
};

struct RefineWitness {
  UFForest first;
  UFForest second;
  std::vector<std::size_t> args;
  std::string detail;
};

/// Forests equal but for ranks give equal find results, and union keeps
/// them equal but for ranks.
Verdict<RefineWitness> rank_independence_check(std::size_t n, const RefineParams& params,
                                               const UnionFn& union_impl = unite, const FindFn& find_impl = find);

/// union and the optimized union induce the same partition.
Verdict<RefineWitness> union_by_rank_refinement_check(std::size_t n, const RefineParams& params,
                                                      const UnionFn& optimized = union_by_rank);

/// find and the compressing find agree on the root, and the two result
/// forests induce the same partition.
Verdict<RefineWitness> find_compress_refinement_check(std::size_t n, const RefineParams& params,
                                                      const CompressFn& optimized = find_compress);

}  // namespace relcheck::uf
