#pragma once

// Minimal s-expression reader shared by proof scripts and sampling programs.
// Atoms are symbols, integers, or double-quoted strings; ';' starts a comment.

#include <string>
#include <string_view>
#include <vector>

#include "relcheck/common.hpp"

namespace relcheck::sexp {

struct Node {
  enum class Kind { Symbol, Integer, String, List };
  Kind kind = Kind::List;
  std::string text;
  Value integer = 0;
  std::vector<Node> items;
  SourceLoc loc;

  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_list() const { return kind == Kind::List; }
  /// Head symbol of a nonempty list, else "".
  std::string_view head() const;
};

std::vector<Node> parse_all(std::string_view text);
Node parse_one(std::string_view text);

std::string to_string(const Node& n);

[[noreturn]] void fail(const Node& at, const std::string& msg);

}  // namespace relcheck::sexp
