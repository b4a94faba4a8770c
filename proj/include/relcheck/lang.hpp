#pragma once

// WHILE language: AST, concrete syntax, and the two definitional interpreters.
//
//   program := "vars" ident ("," ident)* ";" com
//   com     := "skip" | ident ":=" exp | com ";" com
//            | "if" "(" exp "==" "0" ")" "{" com "}" "else" "{" com "}"
//            | "while" "(" exp "!=" "0" ")" ["decr" exp] "{" com "}"
//            | "{" com "}"
//   exp     := integer | ident | exp ("+"|"-"|"*") exp | "lt" "(" exp "," exp ")" | "(" exp ")"
//
// Sequencing is left-associative, so "a; b; c" is Seq(Seq(a, b), c).

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relcheck/common.hpp"

namespace relcheck {

enum class BinOpKind { Add, Sub, Mul, Lt };

struct Exp;
struct Com;
using ExpPtr = std::shared_ptr<const Exp>;
using ComPtr = std::shared_ptr<const Com>;

struct IntLit {
  Value value;
};
struct VarRef {
  std::string name;
  std::size_t slot;
};
struct BinOp {
  BinOpKind op;
  ExpPtr lhs;
  ExpPtr rhs;
};

struct Exp {
  std::variant<IntLit, VarRef, BinOp> node;
  SourceLoc loc;
};

struct Skip {};
struct Assign {
  std::string target;
  std::size_t slot;
  ExpPtr rhs;
};
struct Seq {
  ComPtr first;
  ComPtr second;
};
/// Runs then_branch when the guard evaluates to 0.
struct If {
  ExpPtr guard;
  ComPtr then_branch;
  ComPtr else_branch;
};
/// Iterates while the guard is nonzero. metric may be null.
struct While {
  ExpPtr guard;
  ComPtr body;
  ExpPtr metric;
};

struct Com {
  std::variant<Skip, Assign, Seq, If, While> node;
  SourceLoc loc;
};

using VarList = std::vector<std::string>;
using VarsPtr = std::shared_ptr<const VarList>;

VarsPtr make_vars(VarList names);  // throws DuplicateDeclaration
std::optional<std::size_t> slot_of(const VarList& vars, std::string_view name);

struct Program {
  VarsPtr vars;
  ComPtr body;
};

/// Total map from a program's declared variables to integers.
class Store {
 public:
  Store() = default;
  Store(VarsPtr vars, std::vector<Value> values);
  static Store zeros(VarsPtr vars);

  std::size_t size() const { return values_.size(); }
  Value operator[](std::size_t slot) const { return values_[slot]; }
  Value& operator[](std::size_t slot) { return values_[slot]; }
  Value get(std::string_view name) const;  // throws UndeclaredVariable
  void set(std::string_view name, Value v);

  const VarList& names() const { return *vars_; }
  const VarsPtr& vars() const { return vars_; }
  const std::vector<Value>& values() const { return values_; }

  /// "x=1 y=2"
  std::string to_string() const;

  friend bool operator==(const Store& a, const Store& b) { return a.values_ == b.values_; }

 private:
  VarsPtr vars_;
  std::vector<Value> values_;
};

// AST construction. Var/assign builders take the resolved slot.
ExpPtr make_lit(Value v);
ExpPtr make_var(std::string name, std::size_t slot);
ExpPtr make_binop(BinOpKind op, ExpPtr lhs, ExpPtr rhs);
ComPtr make_skip();
ComPtr make_assign(std::string target, std::size_t slot, ExpPtr rhs);
ComPtr make_seq(ComPtr first, ComPtr second);
ComPtr make_if(ExpPtr guard, ComPtr then_branch, ComPtr else_branch);
ComPtr make_while(ExpPtr guard, ComPtr body, ExpPtr metric);

Program parse_program(std::string_view text);
ExpPtr parse_exp(std::string_view text, const VarList& vars);
ComPtr parse_com(std::string_view text, const VarList& vars);
/// "x=1,y=2"; unlisted variables start at 0.
Store parse_store(std::string_view text, const VarsPtr& vars);

std::string to_string(const Exp& e);
std::string to_string(const Com& c);
std::string to_string(const Program& p);
std::string to_string(BinOpKind op);

/// Structural equality; variables compare by name, source locations ignored.
bool equal(const Exp& a, const Exp& b);
bool equal(const Com& a, const Com& b);
bool is_skip(const Com& c);

/// Re-resolves variable slots by name against another declaration list.
ExpPtr rebind(const ExpPtr& e, const VarList& vars);
ComPtr rebind(const ComPtr& c, const VarList& vars);

/// Throws MissingMetric for the first While without a decr clause.
void require_metrics(const Com& c);

Value eval_exp(const Store& s, const Exp& e);

struct Outcome {
  enum class Kind { Normal, OutOfFuel };
  Kind kind;
  Store store;

  bool normal() const { return kind == Kind::Normal; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Metric mode: each loop's decr expression must be nonnegative on entry and
/// strictly decrease (staying nonnegative) across every iteration.
Outcome run_metric(const Program& p, const Store& s);
Outcome run_metric(const Com& c, const Store& s);

struct FuelResult {
  bool completed;
  Store final;

  friend bool operator==(const FuelResult&, const FuelResult&) = default;
};

/// Fuel mode: one unit per loop iteration, global across the run; metrics
/// are ignored.
FuelResult run_fuel(const Program& p, const Store& s, std::uint64_t fuel);
FuelResult run_fuel(const Com& c, const Store& s, std::uint64_t fuel);

}  // namespace relcheck
