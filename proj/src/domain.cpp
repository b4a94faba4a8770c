#include <algorithm>
#include <charconv>

#include "relcheck/domain.hpp"

namespace relcheck {

namespace {

Value parse_value(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  Value v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("bad domain value '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

TestDomain make_domain(Value lo, Value hi) {
  if (hi < lo) throw UsageError("empty value range");
  TestDomain d;
  for (Value v = lo; v <= hi; ++v) d.values.push_back(v);
  return d;
}

TestDomain parse_domain(std::string_view text) {
  auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    return make_domain(parse_value(text.substr(0, dots)), parse_value(text.substr(dots + 2)));
  }
  TestDomain d;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    d.values.push_back(parse_value(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  std::sort(d.values.begin(), d.values.end());
  d.values.erase(std::unique(d.values.begin(), d.values.end()), d.values.end());
  return d;
}

std::string describe(const TestDomain& d) {
  std::string out = "{";
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(d.values[i]);
  }
  return out + "}";
}

std::uint64_t charge(const TestDomain& d, std::size_t arity, std::uint64_t multiplier) {
  if (d.values.empty()) throw UsageError("test domain has no values");
  auto count = checked_pow(d.values.size(), arity);
  std::uint64_t total = 0;
  if (!count || __builtin_mul_overflow(*count, multiplier, &total)) {
    throw BudgetExceeded(UINT64_MAX, d.budget);
  }
  if (total > d.budget) throw BudgetExceeded(total, d.budget);
  return *count;
}

std::vector<Store> all_stores(const VarsPtr& vars, const TestDomain& d) {
  std::uint64_t count = charge(d, vars->size());
  std::vector<Store> out;
  out.reserve(count);
  std::vector<std::size_t> digits(vars->size(), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::vector<Value> values(vars->size());
    for (std::size_t i = 0; i < digits.size(); ++i) values[i] = d.values[digits[i]];
    out.emplace_back(vars, std::move(values));
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < d.values.size()) break;
      digits[i] = 0;
    }
  }
  return out;
}

}  // namespace relcheck
