#include <cctype>
#include <charconv>

#include "relcheck/lang.hpp"

namespace relcheck {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  Value value = 0;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      SourceLoc loc{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", 0, loc});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          advance();
        }
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), 0, loc});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        Value v = 0;
        auto text = src_.substr(start, pos_ - start);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc()) throw ParseError("integer literal out of range", loc);
        out.push_back({Tok::Int, std::string(text), v, loc});
      } else {
        static constexpr std::string_view two[] = {":=", "==", "!="};
        bool matched = false;
        for (auto sym : two) {
          if (src_.substr(pos_, 2) == sym) {
            advance();
            advance();
            out.push_back({Tok::Sym, std::string(sym), 0, loc});
            matched = true;
            break;
          }
        }
        if (matched) continue;
        if (std::string_view("+-*(),;{}").find(c) == std::string_view::npos) {
          throw ParseError(std::string("unexpected character '") + c + "'", loc);
        }
        advance();
        out.push_back({Tok::Sym, std::string(1, c), 0, loc});
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "vars" || s == "skip" || s == "if" || s == "else" || s == "while" || s == "decr" || s == "lt";
}

class Parser {
 public:
  Parser(std::string_view text, const VarList* vars) : toks_(Lexer(text).run()), vars_(vars) {}

  Program program() {
    expect_word("vars");
    VarList names;
    do {
      names.push_back(ident("variable name"));
    } while (accept(","));
    expect(";");
    auto vars = make_vars(std::move(names));
    vars_ = vars.get();
    auto body = com();
    accept(";");
    expect_end();
    return Program{vars, body};
  }

  ComPtr com_only() {
    auto c = com();
    expect_end();
    return c;
  }

  ExpPtr exp_only() {
    auto e = exp();
    expect_end();
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  bool at_sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at_word(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }

  bool accept(std::string_view s) {
    if (at_sym(s)) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const auto& t = peek();
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + expected + ", got " + got, t.loc);
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("'" + std::string(s) + "'");
  }

  void expect_word(std::string_view s) {
    if (!at_word(s)) fail("'" + std::string(s) + "'");
    ++pos_;
  }

  void expect_end() const {
    if (peek().kind != Tok::End) fail("end of input");
  }

  std::string ident(const std::string& what) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail(what);
    return toks_[pos_++].text;
  }

  std::size_t resolve(const std::string& name) const {
    auto slot = slot_of(*vars_, name);
    if (!slot) throw UndeclaredVariable(name);
    return *slot;
  }

  ComPtr com() {
    SourceLoc loc = peek().loc;
    auto c = com_atom();
    while (accept(";")) {
      if (at_sym("}") || peek().kind == Tok::End) break;
      auto rhs = com_atom();
      c = std::make_shared<const Com>(Com{Seq{c, rhs}, loc});
    }
    return c;
  }

  ComPtr com_atom() {
    SourceLoc loc = peek().loc;
    auto make = [&](auto node) { return std::make_shared<const Com>(Com{std::move(node), loc}); };
    if (at_word("skip")) {
      ++pos_;
      return make(Skip{});
    }
    if (at_word("if")) {
      ++pos_;
      expect("(");
      auto guard = exp();
      expect("==");
      zero_literal();
      expect(")");
      auto then_branch = block();
      expect_word("else");
      auto else_branch = block();
      return make(If{guard, then_branch, else_branch});
    }
    if (at_word("while")) {
      ++pos_;
      expect("(");
      auto guard = exp();
      expect("!=");
      zero_literal();
      expect(")");
      ExpPtr metric;
      if (at_word("decr")) {
        ++pos_;
        metric = exp();
      }
      auto body = block();
      return make(While{guard, body, metric});
    }
    if (at_sym("{")) return block();
    if (peek().kind == Tok::Ident && !is_keyword(peek().text)) {
      auto target = ident("assignment target");
      std::size_t slot = resolve(target);
      expect(":=");
      auto rhs = exp();
      return make(Assign{target, slot, rhs});
    }
    fail("command");
  }

  ComPtr block() {
    expect("{");
    auto c = com();
    expect("}");
    return c;
  }

  void zero_literal() {
    if (peek().kind != Tok::Int || peek().value != 0) fail("0");
    ++pos_;
  }

  ExpPtr exp() {
    auto lhs = term();
    while (at_sym("+") || at_sym("-")) {
      SourceLoc loc = peek().loc;
      auto op = toks_[pos_++].text == "+" ? BinOpKind::Add : BinOpKind::Sub;
      auto rhs = term();
      lhs = std::make_shared<const Exp>(Exp{BinOp{op, lhs, rhs}, loc});
    }
    return lhs;
  }

  ExpPtr term() {
    auto lhs = atom();
    while (at_sym("*")) {
      SourceLoc loc = peek().loc;
      ++pos_;
      auto rhs = atom();
      lhs = std::make_shared<const Exp>(Exp{BinOp{BinOpKind::Mul, lhs, rhs}, loc});
    }
    return lhs;
  }

  ExpPtr atom() {
    SourceLoc loc = peek().loc;
    auto make = [&](auto node) { return std::make_shared<const Exp>(Exp{std::move(node), loc}); };
    if (peek().kind == Tok::Int) return make(IntLit{toks_[pos_++].value});
    if (at_sym("-") && toks_[pos_ + 1].kind == Tok::Int) {
      ++pos_;
      return make(IntLit{-toks_[pos_++].value});
    }
    if (accept("(")) {
      auto e = exp();
      expect(")");
      return e;
    }
    if (at_word("lt")) {
      ++pos_;
      expect("(");
      auto a = exp();
      expect(",");
      auto b = exp();
      expect(")");
      return make(BinOp{BinOpKind::Lt, a, b});
    }
    if (peek().kind == Tok::Ident && !is_keyword(peek().text)) {
      auto name = toks_[pos_++].text;
      return make(VarRef{name, resolve(name)});
    }
    fail("expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const VarList* vars_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text, nullptr).program(); }

ExpPtr parse_exp(std::string_view text, const VarList& vars) { return Parser(text, &vars).exp_only(); }

ComPtr parse_com(std::string_view text, const VarList& vars) { return Parser(text, &vars).com_only(); }

Store parse_store(std::string_view text, const VarsPtr& vars) {
  Store s = Store::zeros(vars);
  std::size_t pos = 0;
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ParseError("store entry '" + std::string(item) + "' lacks '='", {1, static_cast<int>(pos) + 1});
      auto name = trim(item.substr(0, eq));
      auto num = trim(item.substr(eq + 1));
      Value v = 0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
      if (ec != std::errc() || ptr != num.data() + num.size()) {
        throw ParseError("bad value '" + std::string(num) + "' for " + std::string(name), {1, static_cast<int>(pos) + 1});
      }
      s.set(name, v);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return s;
}

}  // namespace relcheck
