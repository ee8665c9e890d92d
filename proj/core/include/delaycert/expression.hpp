#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace delaycert::expr {

enum class UnaryOp { Neg, Abs, Exp, Sin, Cos, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
  double value;
};
struct Variable {};
struct Unary {
  UnaryOp op;
  NodePtr arg;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};

struct Node {
  std::variant<Constant, Variable, Unary, Binary> data;
};

// Scalar expression in the single variable `sigma`.
//
// Grammar (left-associative binaries, right-associative '^'):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?
//   base   := number | 'sigma' | fn '(' expr ')' | '(' expr ')' | '-' base
//   fn     := abs | exp | sin | cos | tanh
class ExprTree {
 public:
  ExprTree() = default;
  explicit ExprTree(NodePtr root) : root_(std::move(root)) {}

  // Throws EvaluationError on division by zero or a non-finite result.
  double evaluate(double sigma) const;

  // Fully parenthesised text that parses back to the same tree.
  std::string to_string() const;

  const NodePtr& root() const { return root_; }
  bool empty() const { return !root_; }

 private:
  NodePtr root_;
};

// Throws SyntaxError carrying the byte offset of the offending token.
ExprTree parse_expression(std::string_view text);

}  // namespace delaycert::expr
