#pragma once

// Information-flow control over the WHILE language: the syntax-directed type
// system, bounded semantic noninterference checks, a hybrid checker backed by
// trusted entries, a runtime monitor, and delimited release.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relcheck/domain.hpp"
#include "relcheck/lang.hpp"

namespace relcheck::ifc {

enum class Label { Low, High };

inline bool leq(Label a, Label b) { return a == Label::Low || b == Label::High; }
inline Label join(Label a, Label b) { return a == Label::High || b == Label::High ? Label::High : Label::Low; }
inline Label meet(Label a, Label b) { return a == Label::Low || b == Label::Low ? Label::Low : Label::High; }

std::string to_string(Label l);
std::optional<Label> parse_label(std::string_view text);  // "Low"/"High", any case, or "L"/"H"

/// Labels for every declared variable, in declaration order.
struct LabelEnv {
  VarsPtr vars;
  std::vector<Label> labels;

  Label of(std::size_t slot) const { return labels[slot]; }
  Label of(std::string_view name) const;
};

/// "lo=Low,hi=High"; every declared variable must be labeled exactly once.
LabelEnv parse_labels(std::string_view text, const VarsPtr& vars);
std::string to_string(const LabelEnv& env);

bool low_equiv(const LabelEnv& env, const Store& s0, const Store& s1);

Label tc_exp(const LabelEnv& env, const Exp& e);

struct TypeError {
  SourceLoc loc;
  std::string command;
  std::string detail;
};

using TcResult = std::variant<Label, TypeError>;

/// The greatest pc label under which c is typable, or the first offending
/// assignment/branch.
TcResult tc_com(const LabelEnv& env, const Com& c);

struct PairWitness {
  Store s0;
  Store s1;
};

/// Vacuous at High.
Verdict<PairWitness> ni_exp_check(const LabelEnv& env, const Exp& e, Label l, const TestDomain& d);

struct NiWitness {
  enum class Kind { Ni, WriteDown };
  Kind kind;
  Store s0;
  std::optional<Store> s1;  // Ni only
  std::string var;          // the Low variable that differs or was written
};

/// Noninterference of c at pc level l, then no write below l. Runs ending
/// OutOfFuel are skipped (termination-insensitive).
Verdict<NiWitness> ni_com_check(const LabelEnv& env, const Com& c, Label l, const TestDomain& d);

struct TrustedEntry {
  enum class Evidence { SemanticallyChecked, Assumed };
  ComPtr command;
  Label label = Label::Low;
  Evidence evidence = Evidence::Assumed;
  std::optional<TestDomain> domain;  // set for SemanticallyChecked
};

/// Runs ni_com_check for a SemanticallyChecked entry; Assumed entries pass.
Verdict<NiWitness> verify_trusted(const LabelEnv& env, const TrustedEntry& entry);

/// tc_com, except that any subterm equal (by AST, ignoring locations) to a
/// trusted command takes the stored label.
TcResult tc_com_hybrid(const LabelEnv& env, const Com& c, const std::vector<TrustedEntry>& trusted);

struct MonitorOutcome {
  enum class Kind { Normal, OutOfFuel, Violation };
  Kind kind;
  Store store;
  std::optional<SourceLoc> at;  // the rejected assignment for Violation
};

std::string to_string(MonitorOutcome::Kind k);

/// Metric-mode execution with label tracking; an assignment r := e needs
/// label(e) joined with pc to flow into Γ(r). Branch and loop bodies run
/// with pc raised by the guard's label.
MonitorOutcome monitor_run(const LabelEnv& env, Label pc, const Com& c, const Store& s);

using MonitorFn = std::function<MonitorOutcome(const LabelEnv&, Label, const Com&, const Store&)>;

/// Low-equivalent starting pairs whose monitored runs both end Normal must
/// end low-equivalent.
Verdict<PairWitness> dyn_ifc_check(const LabelEnv& env, const Com& c, Label pc, const TestDomain& d,
                                   const MonitorFn& monitor = monitor_run);

/// As ni for plain runs, restricted to pairs that also agree on the value of
/// every declassified expression.
Verdict<PairWitness> delimited_release_check(const LabelEnv& env, const Program& p, const std::vector<ExpPtr>& declass,
                                             const TestDomain& d);

}  // namespace relcheck::ifc
