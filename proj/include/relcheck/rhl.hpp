#pragma once

// Relational Hoare logic over pairs of WHILE commands.
//
// A judgement relates a left and a right command under a precondition and a
// postcondition on store pairs. Its semantic reading: from pre-related
// stores, if both runs complete then post relates the final stores, and the
// two sides co-terminate. semtest_judgement checks the first part by
// enumeration and only reports co-termination mismatches as inconclusive.
//
// check_proof validates derivations built from a fixed rule set. Every side
// condition is discharged semantically by enumerating store pairs over the
// test domain, so an accepted proof is bounded evidence over that domain.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "relcheck/domain.hpp"
#include "relcheck/lang.hpp"
#include "relcheck/sexp.hpp"

namespace relcheck::rhl {

enum class Side { Left, Right };
enum class CmpOp { Eq, Ne, Lt, Le };

struct RelExp;
using RelExpPtr = std::shared_ptr<const RelExp>;

struct ConstE {
  Value value;
};
struct SideVar {
  Side side;
  std::string name;
};
struct ArithE {
  BinOpKind op;
  RelExpPtr lhs;
  RelExpPtr rhs;
};
struct RelExp {
  std::variant<ConstE, SideVar, ArithE> node;
};

struct RelFormula;
using FormulaPtr = std::shared_ptr<const RelFormula>;

struct TrueF {};
struct AndF {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
struct OrF {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
struct NotF {
  FormulaPtr inner;
};
struct CmpF {
  CmpOp op;
  RelExpPtr lhs;
  RelExpPtr rhs;
};
struct RelFormula {
  std::variant<TrueF, AndF, OrF, NotF, CmpF> node;
};

RelExpPtr constant(Value v);
RelExpPtr side_var(Side side, std::string name);
RelExpPtr arith(BinOpKind op, RelExpPtr lhs, RelExpPtr rhs);
/// A program expression evaluated on one side of the pair.
RelExpPtr lift(Side side, const Exp& e);

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_cmp(CmpOp op, RelExpPtr lhs, RelExpPtr rhs);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
/// L(x) = R(x) for each name.
FormulaPtr f_agree(const std::vector<std::string>& names);
/// The loop/branch guard read as a boolean on one side: guard != 0.
FormulaPtr guard_holds(Side side, const Exp& guard);

bool eval_formula(const RelFormula& f, const Store& left, const Store& right);
Value eval_rel_exp(const RelExp& e, const Store& left, const Store& right);

std::string to_string(const RelFormula& f);
std::string to_string(const RelExp& e);

/// Formula syntax:
///   true | false | NAME | (and F...) | (or F...) | (not F) | (iff F F)
///   (= T T) | (!= T T) | (< T T) | (<= T T) | (> T T) | (>= T T)
///   (guard L "exp") | (guard R "exp")
///   T := INT | (L x) | (R x) | (+ T T) | (- T T) | (* T T) | (lt T T)
/// NAME refers to an entry of `defines`.
FormulaPtr parse_formula(const sexp::Node& n, const std::map<std::string, FormulaPtr>& defines = {});
FormulaPtr parse_formula(std::string_view text);

struct Judgement {
  Program left;
  Program right;
  FormulaPtr pre;
  FormulaPtr post;
};

struct SemtestResult {
  enum class Status { Pass, Counterexample, InconclusiveTermination };
  Status status = Status::Pass;
  std::optional<Store> left;
  std::optional<Store> right;
  std::string detail;
  std::uint64_t examined = 0;
};

/// Enumerates all pre-related store pairs and runs both sides in fuel mode
/// with d.fuel_bound. The first post failure is reported; failing that, the
/// first pair where exactly one side completed.
SemtestResult semtest_judgement(const Judgement& j, const TestDomain& d);

enum class Rule {
  RSkip,
  RAssign,
  RSeq,
  RIf,
  RWhile,
  RConseq,
  DeadAssignL,
  DeadAssignR,
  DeadWhileL,
  DeadWhileR,
  SkipElimL,
  SkipElimR,
  Semantic,
};

std::string to_string(Rule r);
std::optional<Rule> parse_rule(std::string_view name);  // script spelling, e.g. "dead-assign-l"
std::string script_name(Rule r);

/// One derivation step. Commands and formulas left null are inherited from
/// what the parent rule expects of this premise (the root must state all
/// four). `arg` is the intermediate formula for RSeq and the invariant for
/// RWhile/DeadWhile.
struct ProofNode {
  Rule rule = Rule::Semantic;
  ComPtr left;
  ComPtr right;
  FormulaPtr pre;
  FormulaPtr post;
  FormulaPtr arg;
  std::vector<ProofNode> premises;
  SourceLoc loc;
};

struct ProofTree {
  VarsPtr left_vars;
  VarsPtr right_vars;
  ProofNode root;
};

/// (proof (vars ...) | (left-vars ...) (right-vars ...)
///        (define NAME FORMULA)*
///        NODE)
/// NODE := (RULE [:left "com"] [:right "com"] [:pre F] [:post F] [:mid F | :phi F] NODE*)
ProofTree parse_proof_script(std::string_view text);

struct NodeReport {
  enum class Status { Ok, Counterexample, Inconclusive };
  std::string path;  // "0", "0.1", ...
  Rule rule;
  Status status = Status::Ok;
  std::string detail;
  std::optional<Store> left;
  std::optional<Store> right;
  SourceLoc loc;
};

struct ProofReport {
  std::vector<NodeReport> nodes;  // pre-order
  std::uint64_t pairs_examined = 0;

  bool accepted() const;
  bool has_counterexample() const;
};

/// Throws MalformedProof on shape or arity mismatches; side-condition
/// failures are reported per node.
ProofReport check_proof(const ProofTree& tree, const TestDomain& d);

}  // namespace relcheck::rhl
