#include <cctype>

#include "relcheck/rhl.hpp"

namespace relcheck::rhl {

namespace {

using sexp::Node;

RelExpPtr parse_term(const Node& n) {
  if (n.kind == Node::Kind::Integer) return constant(n.integer);
  if (!n.is_list() || n.items.empty()) sexp::fail(n, "expected a term, got " + sexp::to_string(n));
  auto head = n.head();
  if (head == "L" || head == "R") {
    if (n.items.size() != 2 || n.items[1].kind != Node::Kind::Symbol) sexp::fail(n, "expected (L var) or (R var)");
    return side_var(head == "L" ? Side::Left : Side::Right, n.items[1].text);
  }
  std::optional<BinOpKind> op;
  if (head == "+") op = BinOpKind::Add;
  if (head == "-") op = BinOpKind::Sub;
  if (head == "*") op = BinOpKind::Mul;
  if (head == "lt") op = BinOpKind::Lt;
  if (!op) sexp::fail(n, "unknown term operator '" + std::string(head) + "'");
  if (n.items.size() < 3) sexp::fail(n, "operator needs two operands");
  auto acc = parse_term(n.items[1]);
  for (std::size_t i = 2; i < n.items.size(); ++i) acc = arith(*op, acc, parse_term(n.items[i]));
  if (*op == BinOpKind::Lt && n.items.size() != 3) sexp::fail(n, "lt takes two operands");
  return acc;
}

}  // namespace

FormulaPtr parse_formula(const Node& n, const std::map<std::string, FormulaPtr>& defines) {
  if (n.kind == Node::Kind::Symbol) {
    if (n.text == "true") return f_true();
    if (n.text == "false") return f_false();
    auto it = defines.find(n.text);
    if (it == defines.end()) sexp::fail(n, "unknown formula name '" + n.text + "'");
    return it->second;
  }
  if (!n.is_list() || n.items.empty()) sexp::fail(n, "expected a formula, got " + sexp::to_string(n));
  auto head = n.head();
  auto sub = [&](std::size_t i) { return parse_formula(n.items[i], defines); };
  if (head == "and" || head == "or") {
    if (n.items.size() < 2) return head == "and" ? f_true() : f_false();
    auto acc = sub(1);
    for (std::size_t i = 2; i < n.items.size(); ++i) acc = head == "and" ? f_and(acc, sub(i)) : f_or(acc, sub(i));
    return acc;
  }
  if (head == "not") {
    if (n.items.size() != 2) sexp::fail(n, "not takes one operand");
    return f_not(sub(1));
  }
  if (head == "iff") {
    if (n.items.size() != 3) sexp::fail(n, "iff takes two operands");
    return f_iff(sub(1), sub(2));
  }
  if (head == "guard") {
    if (n.items.size() != 3 || !(n.items[1].is_symbol("L") || n.items[1].is_symbol("R")) ||
        n.items[2].kind != Node::Kind::String) {
      sexp::fail(n, "expected (guard L|R \"exp\")");
    }
    // Every identifier in the guard text is taken as a variable; SideVar
    // lookups resolve names against the actual stores at evaluation time.
    const auto& text = n.items[2].text;
    VarList names;
    for (std::size_t i = 0; i < text.size();) {
      if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
        std::size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
        std::string word = text.substr(i, j - i);
        if (word != "lt" && !slot_of(names, word)) names.push_back(word);
        i = j;
      } else {
        ++i;
      }
    }
    auto e = parse_exp(text, names);
    return guard_holds(n.items[1].is_symbol("L") ? Side::Left : Side::Right, *e);
  }
  static const std::pair<const char*, CmpOp> cmps[] = {
      {"=", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<", CmpOp::Lt}, {"<=", CmpOp::Le}};
  for (auto [name, op] : cmps) {
    if (head == name) {
      if (n.items.size() != 3) sexp::fail(n, std::string(name) + " takes two operands");
      return f_cmp(op, parse_term(n.items[1]), parse_term(n.items[2]));
    }
  }
  if (head == ">" || head == ">=") {
    if (n.items.size() != 3) sexp::fail(n, std::string(head) + " takes two operands");
    return f_cmp(head == ">" ? CmpOp::Lt : CmpOp::Le, parse_term(n.items[2]), parse_term(n.items[1]));
  }
  sexp::fail(n, "unknown formula form '" + std::string(head) + "'");
}

FormulaPtr parse_formula(std::string_view text) { return parse_formula(sexp::parse_one(text)); }

namespace {

VarsPtr parse_var_list(const Node& n) {
  VarList names;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    if (n.items[i].kind != Node::Kind::Symbol) sexp::fail(n.items[i], "expected a variable name");
    names.push_back(n.items[i].text);
  }
  return make_vars(std::move(names));
}

class ScriptReader {
 public:
  ProofTree read(const std::vector<Node>& top) {
    if (top.size() != 1 || top[0].head() != "proof") {
      throw ParseError("proof script must be a single (proof ...) form", top.empty() ? SourceLoc{1, 1} : top[0].loc);
    }
    const Node& proof = top[0];
    const Node* root = nullptr;
    for (std::size_t i = 1; i < proof.items.size(); ++i) {
      const Node& item = proof.items[i];
      auto head = item.head();
      if (head == "vars") {
        tree_.left_vars = tree_.right_vars = parse_var_list(item);
      } else if (head == "left-vars") {
        tree_.left_vars = parse_var_list(item);
      } else if (head == "right-vars") {
        tree_.right_vars = parse_var_list(item);
      } else if (head == "define") {
        if (item.items.size() != 3 || item.items[1].kind != Node::Kind::Symbol) {
          sexp::fail(item, "expected (define NAME FORMULA)");
        }
        defines_[item.items[1].text] = parse_formula(item.items[2], defines_);
      } else {
        if (root) sexp::fail(item, "proof has more than one root node");
        root = &item;
      }
    }
    if (!tree_.left_vars || !tree_.right_vars) throw ParseError("proof script declares no variables", proof.loc);
    if (!root) throw ParseError("proof script has no root node", proof.loc);
    tree_.root = node(*root);
    return std::move(tree_);
  }

 private:
  ProofNode node(const Node& n) {
    if (!n.is_list() || n.items.empty() || n.items[0].kind != Node::Kind::Symbol) {
      sexp::fail(n, "expected a rule application");
    }
    auto rule = parse_rule(n.items[0].text);
    if (!rule) sexp::fail(n, "unknown rule '" + n.items[0].text + "'");
    ProofNode out;
    out.rule = *rule;
    out.loc = n.loc;
    for (std::size_t i = 1; i < n.items.size(); ++i) {
      const Node& item = n.items[i];
      if (item.kind == Node::Kind::Symbol && !item.text.empty() && item.text[0] == ':') {
        if (i + 1 >= n.items.size()) sexp::fail(item, "keyword " + item.text + " needs a value");
        const Node& value = n.items[++i];
        const auto& key = item.text;
        if (key == ":left" || key == ":right") {
          if (value.kind != Node::Kind::String) sexp::fail(value, key + " expects a quoted command");
          const auto& vars = key == ":left" ? *tree_.left_vars : *tree_.right_vars;
          (key == ":left" ? out.left : out.right) = parse_com(value.text, vars);
        } else if (key == ":pre") {
          out.pre = parse_formula(value, defines_);
        } else if (key == ":post") {
          out.post = parse_formula(value, defines_);
        } else if (key == ":mid" || key == ":phi") {
          out.arg = parse_formula(value, defines_);
        } else {
          sexp::fail(item, "unknown keyword " + key);
        }
      } else {
        out.premises.push_back(node(item));
      }
    }
    return out;
  }

  ProofTree tree_;
  std::map<std::string, FormulaPtr> defines_;
};

}  // namespace

ProofTree parse_proof_script(std::string_view text) { return ScriptReader().read(sexp::parse_all(text)); }

}  // namespace relcheck::rhl
