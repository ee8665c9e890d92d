#include "delaycert/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "delaycert/error.hpp"

namespace delaycert::expr {

namespace {

NodePtr make(Node node) { return std::make_shared<const Node>(std::move(node)); }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make({Binary{BinaryOp::Add, lhs, term()}});
      else if (accept('-'))
        lhs = make({Binary{BinaryOp::Sub, lhs, term()}});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = make({Binary{BinaryOp::Mul, lhs, factor()}});
      else if (accept('/'))
        lhs = make({Binary{BinaryOp::Div, lhs, factor()}});
      else
        return lhs;
    }
  }

  NodePtr factor() {
    NodePtr b = base();
    if (accept('^')) return make({Binary{BinaryOp::Pow, b, factor()}});
    return b;
  }

  NodePtr base() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return make({Unary{UnaryOp::Neg, base()}});
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "sigma") return make({Variable{}});
      UnaryOp op;
      if (word == "abs")
        op = UnaryOp::Abs;
      else if (word == "exp")
        op = UnaryOp::Exp;
      else if (word == "sin")
        op = UnaryOp::Sin;
      else if (word == "cos")
        op = UnaryOp::Cos;
      else if (word == "tanh")
        op = UnaryOp::Tanh;
      else {
        pos_ = start;
        fail("unknown identifier '" + std::string(word) + "'");
      }
      if (!accept('(')) fail("expected '(' after function name");
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make({Unary{op, arg}});
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make({Constant{value}});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Node& node, double sigma) {
  struct Visitor {
    double sigma;
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Variable&) const { return sigma; }
    double operator()(const Unary& u) const {
      const double x = eval(*u.arg, sigma);
      switch (u.op) {
        case UnaryOp::Neg: return -x;
        case UnaryOp::Abs: return std::abs(x);
        case UnaryOp::Exp: return std::exp(x);
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Tanh: return std::tanh(x);
      }
      return x;
    }
    double operator()(const Binary& b) const {
      const double x = eval(*b.lhs, sigma);
      const double y = eval(*b.rhs, sigma);
      switch (b.op) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div:
          if (y == 0.0) throw EvaluationError("division by zero");
          return x / y;
        case BinaryOp::Pow: return std::pow(x, y);
      }
      return x;
    }
  };
  return std::visit(Visitor{sigma}, node.data);
}

std::string print(const Node& node) {
  struct Visitor {
    std::string operator()(const Constant& c) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", c.value);
      return buf;
    }
    std::string operator()(const Variable&) const { return "sigma"; }
    std::string operator()(const Unary& u) const {
      const std::string arg = print(*u.arg);
      switch (u.op) {
        case UnaryOp::Neg: return "(-" + arg + ")";
        case UnaryOp::Abs: return "abs(" + arg + ")";
        case UnaryOp::Exp: return "exp(" + arg + ")";
        case UnaryOp::Sin: return "sin(" + arg + ")";
        case UnaryOp::Cos: return "cos(" + arg + ")";
        case UnaryOp::Tanh: return "tanh(" + arg + ")";
      }
      return arg;
    }
    std::string operator()(const Binary& b) const {
      static constexpr const char* symbols[] = {" + ", " - ", " * ", " / ", "^"};
      return "(" + print(*b.lhs) + symbols[static_cast<int>(b.op)] + print(*b.rhs) + ")";
    }
  };
  return std::visit(Visitor{}, node.data);
}

}  // namespace

double ExprTree::evaluate(double sigma) const {
  if (!root_) throw EvaluationError("empty expression");
  const double v = eval(*root_, sigma);
  if (!std::isfinite(v)) throw EvaluationError("expression evaluated to a non-finite value");
  return v;
}

std::string ExprTree::to_string() const { return root_ ? print(*root_) : std::string(); }

ExprTree parse_expression(std::string_view text) { return ExprTree(Parser(text).parse()); }

}  // namespace delaycert::expr
