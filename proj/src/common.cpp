#include "relcheck/common.hpp"

namespace relcheck {

std::string to_string(const SourceLoc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

ParseError::ParseError(const std::string& what, SourceLoc loc)
    : Error("parse error at " + to_string(loc) + ": " + what), loc_(loc) {}

UndeclaredVariable::UndeclaredVariable(std::string name)
    : Error("undeclared variable '" + name + "'"), name_(std::move(name)) {}

DuplicateDeclaration::DuplicateDeclaration(const std::string& name)
    : Error("duplicate declaration of '" + name + "'") {}

ArithmeticOverflow::ArithmeticOverflow() : Error("arithmetic overflow") {}

MissingMetric::MissingMetric(SourceLoc loc)
    : Error("while loop at " + to_string(loc) + " has no decr metric") {}

BudgetExceeded::BudgetExceeded(std::uint64_t requested, std::uint64_t budget)
    : Error("enumeration of " + std::to_string(requested) +
            " configurations exceeds budget " + std::to_string(budget)) {}

WellFoundednessViolation::WellFoundednessViolation(std::uint64_t at, std::uint64_t requested)
    : Error("recursive call at " + std::to_string(requested) + " while evaluating " +
            std::to_string(at) + " is not strictly smaller") {}

IndexOutOfRange::IndexOutOfRange(std::size_t index, std::size_t size)
    : Error("index " + std::to_string(index) + " out of range [0, " + std::to_string(size) + ")") {}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (__builtin_mul_overflow(result, base, &result)) return std::nullopt;
  }
  return result;
}

}  // namespace relcheck
