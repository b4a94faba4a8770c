#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relcheck/lang.hpp"

namespace relcheck {

inline constexpr int kReportSchemaVersion = 1;

enum class Status { Pass, Fail, Inconclusive, Error };

std::string to_string(Status s);  // "pass", ...
std::optional<Status> parse_status(std::string_view s);

/// 0 pass, 1 fail, 2 error, 3 inconclusive.
int exit_code(Status s);

struct StoreRecord {
  std::string label;
  std::vector<std::pair<std::string, Value>> values;

  friend bool operator==(const StoreRecord&, const StoreRecord&) = default;
};

StoreRecord record(std::string label, const Store& s);

struct Finding {
  std::string kind;  // "counterexample", "warning", "type-error", ...
  std::string message;
  std::optional<SourceLoc> location;
  std::vector<StoreRecord> stores;

  friend bool operator==(const Finding& a, const Finding& b);
};

struct Evidence {
  std::string kind = "none";  // "exhaustive", "randomized", "none"
  std::string domain;         // exhaustive: "{0,1,2}"
  std::size_t arity = 0;      // exhaustive: domain^arity configurations
  std::uint64_t count = 0;
  std::string unit;           // "stores", "store pairs", "tapes", ...
  std::uint64_t trials = 0;   // randomized
  std::uint64_t seed = 0;     // randomized

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

Evidence exhaustive(std::string domain, std::size_t arity, std::uint64_t count, std::string unit);
Evidence randomized(std::uint64_t trials, std::uint64_t seed);

struct Report {
  std::string tool;
  Status status = Status::Pass;
  Evidence evidence;
  std::vector<Finding> findings;
  std::vector<std::string> notes;
  std::uint64_t timing_ms = 0;

  friend bool operator==(const Report& a, const Report& b);
};

/// First line "PASS (exhaustive over {0,1,2}^3, 27 stores, 4 ms)", then one
/// block per finding and one line per note.
std::string emit_human(const Report& r);

/// A single JSON document with a schemaVersion field.
std::string emit_json(const Report& r);
Report parse_json(std::string_view text);

}  // namespace relcheck
