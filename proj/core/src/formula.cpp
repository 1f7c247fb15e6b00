#include "subsig/formula.hpp"

#include <bit>
#include <cctype>
#include <memory>
#include <vector>

namespace subsig {

namespace {

struct Node {
  enum class Kind { Var, And, Or, AtLeast } kind;
  int var = 0;                                  // Var
  int threshold = 0;                            // AtLeast
  std::uint32_t var_mask = 0;                   // AtLeast (multiplicity-free fast path)
  std::vector<int> vars;                        // AtLeast operands (may repeat)
  std::vector<std::unique_ptr<Node>> children;  // And / Or

  bool eval(std::uint32_t mask) const {
    switch (kind) {
      case Kind::Var:
        return (mask >> (var - 1)) & 1u;
      case Kind::And:
        for (const auto& c : children)
          if (!c->eval(mask)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children)
          if (c->eval(mask)) return true;
        return false;
      case Kind::AtLeast: {
        if (vars.size() == static_cast<std::size_t>(std::popcount(var_mask)))
          return std::popcount(mask & var_mask) >= threshold;
        int up = 0;
        for (int v : vars) up += (mask >> (v - 1)) & 1u;
        return up >= threshold;
      }
    }
    return false;
  }
};

class Parser {
 public:
  Parser(const std::string& text, int n) : text_(text), n_(n) {}

  std::unique_ptr<Node> run() {
    auto root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected '") + c + "' " + what);
  }

  int parse_int() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected an integer");
    long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000) fail("integer literal too large");
      ++pos_;
    }
    return static_cast<int>(value);
  }

  int parse_var() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 'x') fail("expected a variable 'x<int>'");
    ++pos_;
    const std::size_t at = pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      pos_ = at;
      fail("expected a variable index after 'x'");
    }
    const int index = parse_int();
    if (index < 1 || index > n_) {
      pos_ = at;
      fail("variable index x" + std::to_string(index) + " outside 1.." + std::to_string(n_));
    }
    return index;
  }

  std::unique_ptr<Node> parse_expr() {
    auto first = parse_term();
    if (!accept('|')) return first;
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::Or;
    node->children.push_back(std::move(first));
    do {
      node->children.push_back(parse_term());
    } while (accept('|'));
    return node;
  }

  std::unique_ptr<Node> parse_term() {
    auto first = parse_factor();
    if (!accept('&')) return first;
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::And;
    node->children.push_back(std::move(first));
    do {
      node->children.push_back(parse_factor());
    } while (accept('&'));
    return node;
  }

  std::unique_ptr<Node> parse_factor() {
    skip_ws();
    if (accept('(')) {
      auto inner = parse_expr();
      expect(')', "to close the group");
      return inner;
    }
    if (pos_ < text_.size() && text_[pos_] == 'k') return parse_at_least();
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::Var;
    node->var = parse_var();
    return node;
  }

  std::unique_ptr<Node> parse_at_least() {
    static const std::string kw = "k-of-n(";
    if (text_.compare(pos_, kw.size(), kw) != 0) fail("expected 'k-of-n('");
    pos_ += kw.size();
    auto node = std::make_unique<Node>();
    node->kind = Node::Kind::AtLeast;
    const std::size_t k_at = pos_;
    node->threshold = parse_int();
    expect(';', "after the k-of-n threshold");
    node->vars.push_back(parse_var());
    while (accept(',')) node->vars.push_back(parse_var());
    expect(')', "to close k-of-n");
    if (node->threshold < 1 || node->threshold > static_cast<int>(node->vars.size())) {
      pos_ = k_at;
      fail("k-of-n threshold " + std::to_string(node->threshold) + " outside 1.." +
           std::to_string(node->vars.size()));
    }
    for (int v : node->vars) node->var_mask |= std::uint32_t{1} << (v - 1);
    return node;
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

StructureFunction parse_structure(const std::string& expr, int n) {
  if (n < 1 || n > kMaxComponents)
    throw CapabilityError("component count " + std::to_string(n) + " outside 1.." +
                          std::to_string(kMaxComponents));
  Parser parser(expr, n);
  const auto root = parser.run();
  return StructureFunction(n, [&](std::uint32_t mask) { return root->eval(mask); });
}

}  // namespace subsig
