#include <cctype>
#include <charconv>

#include "relcheck/sexp.hpp"

namespace relcheck::sexp {

std::string_view Node::head() const {
  if (kind != Kind::List || items.empty() || items.front().kind != Kind::Symbol) return {};
  return items.front().text;
}

void fail(const Node& at, const std::string& msg) { throw ParseError(msg, at.loc); }

namespace {

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<Node> all() {
    std::vector<Node> out;
    skip();
    while (pos_ < src_.size()) {
      out.push_back(node());
      skip();
    }
    return out;
  }

 private:
  SourceLoc here() const { return {line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_[pos_] == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Node node() {
    Node n;
    n.loc = here();
    char c = src_[pos_];
    if (c == '(') {
      advance();
      n.kind = Node::Kind::List;
      skip();
      while (pos_ < src_.size() && src_[pos_] != ')') {
        n.items.push_back(node());
        skip();
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated list", n.loc);
      advance();
      return n;
    }
    if (c == ')') throw ParseError("unexpected ')'", n.loc);
    if (c == '"') {
      advance();
      n.kind = Node::Kind::String;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
        n.text += src_[pos_];
        advance();
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated string", n.loc);
      advance();
      return n;
    }
    std::size_t start = pos_;
    while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
           src_[pos_] != ')' && src_[pos_] != '"' && src_[pos_] != ';') {
      advance();
    }
    n.text = std::string(src_.substr(start, pos_ - start));
    Value v = 0;
    auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), v);
    if (ec == std::errc() && ptr == n.text.data() + n.text.size()) {
      n.kind = Node::Kind::Integer;
      n.integer = v;
    } else {
      n.kind = Node::Kind::Symbol;
    }
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Node> parse_all(std::string_view text) { return Reader(text).all(); }

Node parse_one(std::string_view text) {
  auto nodes = parse_all(text);
  if (nodes.size() != 1) throw ParseError("expected exactly one s-expression", {1, 1});
  return nodes.front();
}

std::string to_string(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Symbol: return n.text;
    case Node::Kind::Integer: return std::to_string(n.integer);
    case Node::Kind::String: return "\"" + n.text + "\"";
    case Node::Kind::List: {
      std::string out = "(";
      for (std::size_t i = 0; i < n.items.size(); ++i) {
        if (i) out += ' ';
        out += to_string(n.items[i]);
      }
      return out + ")";
    }
  }
  return {};
}

}  // namespace relcheck::sexp
