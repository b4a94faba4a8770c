#include <doctest.h>

#include "relcheck/unionfind.hpp"
#include "support/gen.hpp"

using namespace relcheck;
using namespace relcheck::uf;

namespace {

std::vector<std::size_t> parents(const UFForest& f) {
  std::vector<std::size_t> out;
  for (const auto& e : f.entries) out.push_back(e.parent);
  return out;
}

std::vector<std::size_t> ranks(const UFForest& f) {
  std::vector<std::size_t> out;
  for (const auto& e : f.entries) out.push_back(e.rank);
  return out;
}

// Class labels from a plain quick-find array, independent of the forest code.
struct QuickFind {
  std::vector<std::size_t> cls;
  explicit QuickFind(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) cls.push_back(i);
  }
  void merge(std::size_t a, std::size_t b) {
    auto from = cls[a], to = cls[b];
    for (auto& c : cls) {
      if (c == from) c = to;
    }
  }
};

RefineParams exhaustive(std::size_t depth = 2) { return RefineParams{true, depth, 0, 0}; }
RefineParams randomized(std::uint64_t trials) { return RefineParams{false, 0, trials, 9}; }

}  // namespace

TEST_CASE("index sets") {
  IndexSet s = IndexSet::single(3) | IndexSet::single(0);
  CHECK(s.contains(3));
  CHECK_FALSE(s.contains(1));
  CHECK(s.to_string() == "{0,3}");
  CHECK(IndexSet::single(0).subset_of(s));
  CHECK(s.below(4));
  CHECK_FALSE(s.below(3));
  CHECK(s.intersects(IndexSet::single(3)));
}

TEST_CASE("find follows parents") {
  auto f = from_parents({1, 2, 2});
  CHECK(find(f, 0) == 2);
  CHECK(find(f, 2) == 2);
  CHECK(ranks(f) == std::vector<std::size_t>{0, 1, 2});
  CHECK(f.entries[2].subtree.to_string() == "{0,1,2}");
  CHECK_THROWS_AS(from_parents({1, 0}), std::invalid_argument);
}

TEST_CASE("union examples") {
  auto f = unite(fresh(3), 0, 1);
  CHECK(parents(f) == std::vector<std::size_t>{1, 1, 2});
  CHECK(f.entries[1].subtree.to_string() == "{0,1}");
  CHECK(unite(f, 0, 0) == f);
  CHECK(unite(f, 0, 1) == f);
  auto g = unite(f, 1, 2);
  for (std::size_t i = 0; i < 3; ++i) CHECK(find(g, i) == 2);
  CHECK(to_string(f) == "parents [1,1,2] ranks [0,0,0]");
}

TEST_CASE("union_by_rank examples") {
  auto f = union_by_rank(fresh(2), 0, 1);
  CHECK(f.entries[1].parent == 0);
  CHECK(f.entries[0].rank == 1);

  auto g = union_by_rank(fresh(3), 1, 2);  // 2 under 1, rank(1) = 1
  auto h = union_by_rank(g, 0, 1);          // rank 0 < 1: 0 goes under 1
  CHECK(h.entries[0].parent == 1);
  CHECK(ranks(h) == ranks(g));
  CHECK(union_by_rank(h, 0, 2) == h);
}

TEST_CASE("find_compress examples") {
  auto chain = from_parents({1, 2, 2});
  auto [root, out] = find_compress(chain, 0);
  CHECK(root == 2);
  CHECK(parents(out) == std::vector<std::size_t>{2, 2, 2});
  CHECK_FALSE(check_invariants(out).has_value());
  auto [r2, same] = find_compress(chain, 2);
  CHECK(r2 == 2);
  CHECK(same == chain);
  auto [r1, one] = find_compress(chain, 1);
  CHECK(r1 == 2);
  CHECK(parents(one) == parents(chain));
}

TEST_CASE("invariant checker catches broken forests") {
  auto f = from_parents({1, 1, 2});
  CHECK_FALSE(check_invariants(f).has_value());
  auto g = f;
  g.entries[1].subtree = IndexSet::single(1);
  CHECK(check_invariants(g).has_value());
  auto h = f;
  h.entries[0].parent = 7;
  CHECK(check_invariants(h).has_value());
}

TEST_CASE("exhaustive forests") {
  CHECK(exhaustive_forests(1, 2).size() == 1);
  CHECK(exhaustive_forests(2, 2).size() == 3);
  // (n+1)^(n-1) labeled rooted forests; none on 3 nodes is deeper than 2
  CHECK(exhaustive_forests(3, 2).size() == 16);
  CHECK(exhaustive_forests(3, 1).size() == 10);
  for (const auto& f : exhaustive_forests(4, 3)) CHECK_FALSE(check_invariants(f).has_value());
}

TEST_CASE("property: random operation sequences keep invariants and partitions") {
  Rng rng(71);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng.below(8);
    auto f = fresh(n);
    auto g = fresh(n);
    QuickFind oracle(n);
    auto ops = rng.below(21);
    for (std::uint64_t k = 0; k < ops; ++k) {
      std::size_t a = rng.below(n), b = rng.below(n);
      switch (rng.below(3)) {
        case 0: {
          f = unite(f, a, b);
          g = union_by_rank(g, a, b);
          oracle.merge(a, b);
          CHECK(find(f, a) == find(f, b));
          break;
        }
        case 1: {
          auto [r, out] = find_compress(f, a);
          CHECK(r == find(f, a));
          f = out;
          break;
        }
        default: {
          auto [r, out] = find_compress(g, a);
          CHECK(r == find(g, a));
          g = out;
        }
      }
      REQUIRE_FALSE(check_invariants(f).has_value());
      REQUIRE_FALSE(check_invariants(g).has_value());
    }
    CHECK_FALSE(check_rank_bound(g).has_value());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(height(f, i) < n);
      for (std::size_t j = 0; j < n; ++j) {
        bool same = oracle.cls[i] == oracle.cls[j];
        CHECK((find(f, i) == find(f, j)) == same);
        CHECK((find(g, i) == find(g, j)) == same);
      }
    }
  }
}

TEST_CASE("refinement checks pass on the real operations") {
  CHECK(rank_independence_check(4, exhaustive()).passed());
  CHECK(union_by_rank_refinement_check(4, exhaustive()).passed());
  CHECK(find_compress_refinement_check(5, exhaustive(5)).passed());
  CHECK(rank_independence_check(8, randomized(200)).passed());
  CHECK(union_by_rank_refinement_check(8, randomized(200)).passed());
  CHECK(find_compress_refinement_check(8, randomized(200)).passed());
}

TEST_CASE("refinement checks catch mutants") {
  auto a = rank_independence_check(4, exhaustive(), testgen::union_consulting_rank);
  REQUIRE_FALSE(a.passed());
  CHECK(equal_but_rank(a.counterexample->first, a.counterexample->second));
  CHECK_FALSE(union_by_rank_refinement_check(4, exhaustive(), testgen::union_by_rank_wrong_root).passed());
  CHECK_FALSE(find_compress_refinement_check(4, exhaustive(), testgen::compress_to_wrong_index).passed());
}

TEST_CASE("comparisons") {
  auto a = from_parents({1, 1, 2});
  auto b = a;
  b.entries[1].rank = 5;
  CHECK(equal_but_rank(a, b));
  CHECK_FALSE(a == b);
  CHECK(same_partition(a, from_parents({0, 0, 2})));
  CHECK_FALSE(same_partition(a, from_parents({0, 1, 1})));
}
