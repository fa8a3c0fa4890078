#pragma once

// Closed-form scalar fields g(x, y) given as text.
//
// Grammar (standard precedence, whitespace-insensitive):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x' | 'y' | 'pi' | 'e' | fn '(' expr ')' | '(' expr ')'
//   fn      := exp | log | sqrt | sin | cos | tan | sinh | cosh | tanh

#include <memory>
#include <string>
#include <string_view>

#include "geoweb/jet.hpp"

namespace geoweb {

enum class NodeKind { number, variable, constant, negate, add, sub, mul, div, pow, call };

struct Node {
  NodeKind kind = NodeKind::number;
  double number = 0.0;  // literal value, or the value of a named constant
  char variable = 'x';
  std::string name;     // constant or function name
  Analytic fn = Analytic::exp;
  std::shared_ptr<const Node> lhs;  // sole child of negate/call
  std::shared_ptr<const Node> rhs;
};

class Expression {
 public:
  /// Throws SyntaxError carrying the byte offset of the problem.
  static Expression parse(std::string_view text);

  /// Canonical, fully parenthesized serialization; parse(print()) rebuilds the same tree.
  std::string print() const;

  const Node& root() const { return *root_; }
  bool depends_on_variables() const;

  /// Truncated Taylor expansion at p. Throws EvalDomainError.
  Jet2 eval_jet(Point p, int degree) const;

  double eval(double x, double y) const;
  long double eval(long double x, long double y) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

std::string print(const Node& node);
bool structurally_equal(const Node& a, const Node& b);

}  // namespace geoweb
