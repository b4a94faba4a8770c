#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "relcheck/lang.hpp"

namespace relcheck {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Finite value set standing in for "all stores". Every store over the
/// declared variables drawing values from `values` is enumerated.
struct TestDomain {
  std::vector<Value> values;
  std::uint64_t fuel_bound = 16;
  std::uint64_t budget = kDefaultBudget;
};

/// Accepts "LO..HI" or a comma-separated list such as "0,1,5".
TestDomain parse_domain(std::string_view text);
TestDomain make_domain(Value lo, Value hi);

/// "{0,1,2}"
std::string describe(const TestDomain& d);

/// |values|^arity, throwing BudgetExceeded past the domain budget.
std::uint64_t charge(const TestDomain& d, std::size_t arity, std::uint64_t multiplier = 1);

/// Every store over `vars`, lexicographic in declaration order (the first
/// declared variable varies slowest).
std::vector<Store> all_stores(const VarsPtr& vars, const TestDomain& d);

}  // namespace relcheck
