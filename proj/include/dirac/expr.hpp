#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dirac::expr {

enum class Var { T, X, Y, Z };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Tan, Tanh, Exp, Sqrt, Log };

struct Node;
/// Immutable expression tree; subtrees are shared.
using Expr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Variable, Negate, Binary, Call };
  Kind kind = Kind::Number;
  double value = 0.0;
  Var var = Var::T;
  BinaryOp op = BinaryOp::Add;
  Func func = Func::Sin;
  Expr lhs;  // operand for Negate and Call
  Expr rhs;
};

Expr number(double v);
Expr variable(Var v);
Expr negate(Expr e);
Expr binary(BinaryOp op, Expr l, Expr r);
Expr call(Func f, Expr arg);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar, loosest first: + -, * /, unary minus, ^ (right-associative).
/// Identifiers: t x y z, the constant pi, and sin cos tan tanh exp sqrt log.
Expr parse(std::string_view source);

/// Values for t, x, y, z with a presence mask.
struct Env {
  std::array<double, 4> values{0.0, 0.0, 0.0, 0.0};
  std::array<bool, 4> present{false, false, false, false};

  static Env txyz(double t, double x, double y = 0.0, double z = 0.0) {
    return Env{{t, x, y, z}, {true, true, true, true}};
  }
  Env& set(Var v, double value) {
    values[static_cast<std::size_t>(v)] = value;
    present[static_cast<std::size_t>(v)] = true;
    return *this;
  }
};

/// Throws EvalError for a missing variable or a non-finite/domain-violating result.
double eval(const Expr& e, const Env& env);

/// Symbolic d/d(var), with literal subtrees constant-folded.
Expr differentiate(const Expr& e, Var var);

/// Fully parenthesised text that parses back to the same tree.
std::string print(const Expr& e);

bool structurally_equal(const Expr& l, const Expr& r);
bool depends_on(const Expr& e, Var var);
/// True when the tree is a literal that folds to exactly zero.
bool is_zero_literal(const Expr& e);

}  // namespace dirac::expr
