#include "relcheck/report.hpp"

#include <cctype>

#include <json.hpp>

namespace relcheck {

using nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::Error: return "error";
  }
  return {};
}

std::optional<Status> parse_status(std::string_view s) {
  for (auto st : {Status::Pass, Status::Fail, Status::Inconclusive, Status::Error}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

int exit_code(Status s) {
  switch (s) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Error: return 2;
    case Status::Inconclusive: return 3;
  }
  return 2;
}

StoreRecord record(std::string label, const Store& s) {
  StoreRecord r{std::move(label), {}};
  for (std::size_t i = 0; i < s.size(); ++i) r.values.emplace_back(s.names()[i], s[i]);
  return r;
}

bool operator==(const Finding& a, const Finding& b) {
  auto loc_eq = a.location.has_value() == b.location.has_value() &&
                (!a.location || (a.location->line == b.location->line && a.location->column == b.location->column));
  return a.kind == b.kind && a.message == b.message && loc_eq && a.stores == b.stores;
}

bool operator==(const Report& a, const Report& b) {
  return a.tool == b.tool && a.status == b.status && a.evidence == b.evidence && a.findings == b.findings &&
         a.notes == b.notes && a.timing_ms == b.timing_ms;
}

Evidence exhaustive(std::string domain, std::size_t arity, std::uint64_t count, std::string unit) {
  Evidence e;
  e.kind = "exhaustive";
  e.domain = std::move(domain);
  e.arity = arity;
  e.count = count;
  e.unit = std::move(unit);
  return e;
}

Evidence randomized(std::uint64_t trials, std::uint64_t seed) {
  Evidence e;
  e.kind = "randomized";
  e.trials = trials;
  e.seed = seed;
  return e;
}

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string store_line(const StoreRecord& s) {
  std::string out = s.label + ":";
  for (const auto& [name, v] : s.values) out += " " + name + "=" + std::to_string(v);
  return out;
}

}  // namespace

std::string emit_human(const Report& r) {
  std::string head = upper(to_string(r.status)) + " (";
  const auto& e = r.evidence;
  if (e.kind == "exhaustive") {
    head += "exhaustive over " + e.domain;
    if (e.arity) head += "^" + std::to_string(e.arity);
    head += ", " + std::to_string(e.count) + " " + e.unit + ", ";
  } else if (e.kind == "randomized") {
    head += "randomized, " + std::to_string(e.trials) + " trials, seed " + std::to_string(e.seed) + ", ";
  }
  head += std::to_string(r.timing_ms) + " ms)\n";
  std::string out = head;
  for (const auto& f : r.findings) {
    out += f.kind + ": " + f.message;
    if (f.location) out += " at " + to_string(*f.location);
    out += "\n";
    for (const auto& s : f.stores) out += "  " + store_line(s) + "\n";
  }
  for (const auto& n : r.notes) out += "note: " + n + "\n";
  return out;
}

std::string emit_json(const Report& r) {
  json j;
  j["schemaVersion"] = kReportSchemaVersion;
  j["tool"] = r.tool;
  j["status"] = to_string(r.status);
  const auto& e = r.evidence;
  j["evidence"] = {{"kind", e.kind}, {"domain", e.domain}, {"arity", e.arity}, {"count", e.count},
                   {"unit", e.unit},  {"trials", e.trials}, {"seed", e.seed}};
  j["findings"] = json::array();
  for (const auto& f : r.findings) {
    json jf = {{"kind", f.kind}, {"message", f.message}};
    jf["location"] = f.location ? json{{"line", f.location->line}, {"column", f.location->column}} : json(nullptr);
    jf["stores"] = json::array();
    for (const auto& s : f.stores) {
      json values = json::array();
      for (const auto& [name, v] : s.values) values.push_back({name, v});
      jf["stores"].push_back({{"label", s.label}, {"values", values}});
    }
    j["findings"].push_back(jf);
  }
  j["notes"] = r.notes;
  j["timingMillis"] = r.timing_ms;
  return j.dump(2) + "\n";
}

Report parse_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what(), {1, 1});
  }
  try {
    if (j.at("schemaVersion").get<int>() != kReportSchemaVersion) {
      throw ParseError("unsupported report schemaVersion", {1, 1});
    }
    Report r;
    r.tool = j.at("tool").get<std::string>();
    auto st = parse_status(j.at("status").get<std::string>());
    if (!st) throw ParseError("unknown report status", {1, 1});
    r.status = *st;
    const auto& je = j.at("evidence");
    r.evidence.kind = je.at("kind").get<std::string>();
    r.evidence.domain = je.at("domain").get<std::string>();
    r.evidence.arity = je.at("arity").get<std::size_t>();
    r.evidence.count = je.at("count").get<std::uint64_t>();
    r.evidence.unit = je.at("unit").get<std::string>();
    r.evidence.trials = je.at("trials").get<std::uint64_t>();
    r.evidence.seed = je.at("seed").get<std::uint64_t>();
    for (const auto& jf : j.at("findings")) {
      Finding f;
      f.kind = jf.at("kind").get<std::string>();
      f.message = jf.at("message").get<std::string>();
      if (!jf.at("location").is_null()) {
        f.location = SourceLoc{jf["location"].at("line").get<int>(), jf["location"].at("column").get<int>()};
      }
      for (const auto& js : jf.at("stores")) {
        StoreRecord s;
        s.label = js.at("label").get<std::string>();
        for (const auto& kv : js.at("values")) s.values.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<Value>());
        f.stores.push_back(std::move(s));
      }
      r.findings.push_back(std::move(f));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.timing_ms = j.at("timingMillis").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), {1, 1});
  }
}

}  // namespace relcheck
