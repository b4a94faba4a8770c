#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace relcheck {

/// Object-language integers: 64-bit signed, overflow is an error.
using Value = std::int64_t;

struct SourceLoc {
  int line = 0;
  int column = 0;
};

std::string to_string(const SourceLoc& loc);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, SourceLoc loc);
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

class UndeclaredVariable : public Error {
 public:
  explicit UndeclaredVariable(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DuplicateDeclaration : public Error {
 public:
  explicit DuplicateDeclaration(const std::string& name);
};

class ArithmeticOverflow : public Error {
 public:
  ArithmeticOverflow();
};

class MissingMetric : public Error {
 public:
  explicit MissingMetric(SourceLoc loc);
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t requested, std::uint64_t budget);
};

class WidthMismatch : public Error {
 public:
  using Error::Error;
};

class WellFoundednessViolation : public Error {
 public:
  WellFoundednessViolation(std::uint64_t at, std::uint64_t requested);
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(std::size_t index, std::size_t size);
};

class MalformedProof : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Outcome of a bounded check: no witness means the property held on every
/// configuration examined.
template <class Witness>
struct Verdict {
  std::optional<Witness> counterexample;
  std::uint64_t examined = 0;

  bool passed() const { return !counterexample.has_value(); }
};

/// Seeded generator for randomized checks. Draws are derived from raw
/// mt19937_64 output so a seed reproduces the same trials on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool coin() { return (engine_() >> 17) & 1U; }

 private:
  std::mt19937_64 engine_;
};

/// Checked multiplication for enumeration sizes; nullopt on overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exponent);

}  // namespace relcheck
