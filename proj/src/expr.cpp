#include "dirac/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <vector>

namespace dirac::expr {

Expr number(double v) {
  Node n;
  n.kind = Node::Kind::Number;
  n.value = v;
  return std::make_shared<const Node>(std::move(n));
}

Expr variable(Var v) {
  Node n;
  n.kind = Node::Kind::Variable;
  n.var = v;
  return std::make_shared<const Node>(std::move(n));
}

Expr negate(Expr e) {
  Node n;
  n.kind = Node::Kind::Negate;
  n.lhs = std::move(e);
  return std::make_shared<const Node>(std::move(n));
}

Expr binary(BinaryOp op, Expr l, Expr r) {
  Node n;
  n.kind = Node::Kind::Binary;
  n.op = op;
  n.lhs = std::move(l);
  n.rhs = std::move(r);
  return std::make_shared<const Node>(std::move(n));
}

Expr call(Func f, Expr arg) {
  Node n;
  n.kind = Node::Kind::Call;
  n.func = f;
  n.lhs = std::move(arg);
  return std::make_shared<const Node>(std::move(n));
}

namespace {

struct FuncName {
  std::string_view name;
  Func func;
};
constexpr FuncName kFunctions[] = {{"sin", Func::Sin},   {"cos", Func::Cos}, {"tan", Func::Tan},
                                   {"tanh", Func::Tanh}, {"exp", Func::Exp}, {"sqrt", Func::Sqrt},
                                   {"log", Func::Log}};

std::string_view func_name(Func f) {
  for (const auto& fn : kFunctions)
    if (fn.func == f) return fn.name;
  return "?";
}

char var_name(Var v) {
  switch (v) {
    case Var::T: return 't';
    case Var::X: return 'x';
    case Var::Y: return 'y';
    case Var::Z: return 'z';
  }
  return '?';
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+'))
        lhs = binary(BinaryOp::Add, lhs, parse_product());
      else if (accept('-'))
        lhs = binary(BinaryOp::Sub, lhs, parse_product());
      else
        return lhs;
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = binary(BinaryOp::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = binary(BinaryOp::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return negate(parse_unary());
    return parse_power();
  }

  // base ^ exponent, where the exponent may itself carry a unary minus and
  // chains to the right.
  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return binary(BinaryOp::Pow, base, parse_unary());
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return number(v);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);
    if (id == "t") return variable(Var::T);
    if (id == "x") return variable(Var::X);
    if (id == "y") return variable(Var::Y);
    if (id == "z") return variable(Var::Z);
    if (id == "pi") return number(std::numbers::pi);
    for (const auto& fn : kFunctions) {
      if (fn.name != id) continue;
      if (!accept('(')) throw ParseError("expected '(' after " + std::string(id), pos_);
      std::vector<Expr> args;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')') {
        ++pos_;
      } else {
        args.push_back(parse_sum());
        while (accept(',')) args.push_back(parse_sum());
        if (!accept(')')) throw ParseError("expected ')'", pos_);
      }
      if (args.size() != 1)
        throw ParseError(std::string(id) + " takes 1 argument, got " + std::to_string(args.size()), start);
      return call(fn.func, args.front());
    }
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 1e15; }

double power(double base, double exponent) {
  if (is_integer(exponent)) return checked(std::pow(base, exponent), "^");
  if (base > 0.0) return checked(std::exp(exponent * std::log(base)), "^");
  if (base == 0.0 && exponent > 0.0) return 0.0;
  throw EvalError("domain error: negative or zero base with non-integer exponent");
}

double apply(Func f, double a) {
  switch (f) {
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Tan: return checked(std::tan(a), "tan");
    case Func::Tanh: return std::tanh(a);
    case Func::Exp: return checked(std::exp(a), "exp");
    case Func::Sqrt:
      if (a < 0.0) throw EvalError("domain error: sqrt of negative value");
      return std::sqrt(a);
    case Func::Log:
      if (a <= 0.0) throw EvalError("domain error: log of non-positive value");
      return std::log(a);
  }
  return 0.0;
}

std::optional<double> literal(const Expr& e) {
  if (e->kind == Node::Kind::Number) return e->value;
  if (e->kind == Node::Kind::Negate && e->lhs->kind == Node::Kind::Number) return -e->lhs->value;
  return std::nullopt;
}

// Literals never carry a sign so that printing and re-parsing agree.
Expr lit(double v) { return v < 0.0 ? negate(number(-v)) : number(v); }

Expr make_neg(const Expr& a) {
  if (auto v = literal(a)) return lit(-*v);
  if (a->kind == Node::Kind::Negate) return a->lhs;
  return negate(a);
}

Expr make_add(const Expr& a, const Expr& b) {
  auto va = literal(a), vb = literal(b);
  if (va && vb) return lit(*va + *vb);
  if (va && *va == 0.0) return b;
  if (vb && *vb == 0.0) return a;
  return binary(BinaryOp::Add, a, b);
}

Expr make_sub(const Expr& a, const Expr& b) {
  auto va = literal(a), vb = literal(b);
  if (va && vb) return lit(*va - *vb);
  if (vb && *vb == 0.0) return a;
  if (va && *va == 0.0) return make_neg(b);
  return binary(BinaryOp::Sub, a, b);
}

Expr make_mul(const Expr& a, const Expr& b) {
  auto va = literal(a), vb = literal(b);
  if (va && vb) return lit(*va * *vb);
  if ((va && *va == 0.0) || (vb && *vb == 0.0)) return number(0.0);
  if (va && *va == 1.0) return b;
  if (vb && *vb == 1.0) return a;
  return binary(BinaryOp::Mul, a, b);
}

Expr make_div(const Expr& a, const Expr& b) {
  auto va = literal(a), vb = literal(b);
  if (va && vb && *vb != 0.0) return lit(*va / *vb);
  if (va && *va == 0.0) return number(0.0);
  if (vb && *vb == 1.0) return a;
  return binary(BinaryOp::Div, a, b);
}

Expr make_pow(const Expr& a, const Expr& b) {
  auto vb = literal(b);
  if (vb && *vb == 1.0) return a;
  if (vb && *vb == 0.0) return number(1.0);
  return binary(BinaryOp::Pow, a, b);
}

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

double eval(const Expr& e, const Env& env) {
  switch (e->kind) {
    case Node::Kind::Number: return e->value;
    case Node::Kind::Variable: {
      const auto i = static_cast<std::size_t>(e->var);
      if (!env.present[i]) throw EvalError(std::string("missing variable '") + var_name(e->var) + "'");
      return env.values[i];
    }
    case Node::Kind::Negate: return -eval(e->lhs, env);
    case Node::Kind::Call: return apply(e->func, eval(e->lhs, env));
    case Node::Kind::Binary: {
      const double l = eval(e->lhs, env);
      const double r = eval(e->rhs, env);
      switch (e->op) {
        case BinaryOp::Add: return checked(l + r, "+");
        case BinaryOp::Sub: return checked(l - r, "-");
        case BinaryOp::Mul: return checked(l * r, "*");
        case BinaryOp::Div:
          if (r == 0.0) throw EvalError("division by zero");
          return checked(l / r, "/");
        case BinaryOp::Pow: return power(l, r);
      }
    }
  }
  throw EvalError("corrupt expression node");
}

bool depends_on(const Expr& e, Var var) {
  switch (e->kind) {
    case Node::Kind::Number: return false;
    case Node::Kind::Variable: return e->var == var;
    case Node::Kind::Negate:
    case Node::Kind::Call: return depends_on(e->lhs, var);
    case Node::Kind::Binary: return depends_on(e->lhs, var) || depends_on(e->rhs, var);
  }
  return false;
}

Expr differentiate(const Expr& e, Var var) {
  if (!depends_on(e, var)) return number(0.0);
  switch (e->kind) {
    case Node::Kind::Number: return number(0.0);
    case Node::Kind::Variable: return number(1.0);
    case Node::Kind::Negate: return make_neg(differentiate(e->lhs, var));
    case Node::Kind::Call: {
      const Expr& u = e->lhs;
      const Expr du = differentiate(u, var);
      Expr outer;
      switch (e->func) {
        case Func::Sin: outer = call(Func::Cos, u); break;
        case Func::Cos: outer = make_neg(call(Func::Sin, u)); break;
        case Func::Tan: outer = make_div(number(1.0), make_pow(call(Func::Cos, u), number(2.0))); break;
        case Func::Tanh: outer = make_sub(number(1.0), make_pow(call(Func::Tanh, u), number(2.0))); break;
        case Func::Exp: outer = e; break;
        case Func::Sqrt: outer = make_div(number(1.0), make_mul(number(2.0), e)); break;
        case Func::Log: outer = make_div(number(1.0), u); break;
      }
      return make_mul(outer, du);
    }
    case Node::Kind::Binary: {
      const Expr& u = e->lhs;
      const Expr& v = e->rhs;
      const Expr du = differentiate(u, var);
      const Expr dv = differentiate(v, var);
      switch (e->op) {
        case BinaryOp::Add: return make_add(du, dv);
        case BinaryOp::Sub: return make_sub(du, dv);
        case BinaryOp::Mul: return make_add(make_mul(du, v), make_mul(u, dv));
        case BinaryOp::Div:
          return make_div(make_sub(make_mul(du, v), make_mul(u, dv)), make_pow(v, number(2.0)));
        case BinaryOp::Pow: {
          if (!depends_on(v, var)) {
            // v u^(v-1) u'
            Expr reduced = literal(v) ? lit(*literal(v) - 1.0) : make_sub(v, number(1.0));
            return make_mul(make_mul(v, make_pow(u, reduced)), du);
          }
          // u^v (v' log u + v u' / u)
          return make_mul(e, make_add(make_mul(dv, call(Func::Log, u)), make_div(make_mul(v, du), u)));
        }
      }
    }
  }
  return number(0.0);
}

std::string print(const Expr& e) {
  switch (e->kind) {
    case Node::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      return buf;
    }
    case Node::Kind::Variable: return std::string(1, var_name(e->var));
    case Node::Kind::Negate: return "(-" + print(e->lhs) + ")";
    case Node::Kind::Call: return std::string(func_name(e->func)) + "(" + print(e->lhs) + ")";
    case Node::Kind::Binary: {
      const char* op = "+";
      switch (e->op) {
        case BinaryOp::Add: op = " + "; break;
        case BinaryOp::Sub: op = " - "; break;
        case BinaryOp::Mul: op = " * "; break;
        case BinaryOp::Div: op = " / "; break;
        case BinaryOp::Pow: op = " ^ "; break;
      }
      return "(" + print(e->lhs) + op + print(e->rhs) + ")";
    }
  }
  return "";
}

bool structurally_equal(const Expr& l, const Expr& r) {
  if (l == r) return true;
  if (!l || !r || l->kind != r->kind) return false;
  switch (l->kind) {
    case Node::Kind::Number: return l->value == r->value;
    case Node::Kind::Variable: return l->var == r->var;
    case Node::Kind::Negate: return structurally_equal(l->lhs, r->lhs);
    case Node::Kind::Call: return l->func == r->func && structurally_equal(l->lhs, r->lhs);
    case Node::Kind::Binary:
      return l->op == r->op && structurally_equal(l->lhs, r->lhs) && structurally_equal(l->rhs, r->rhs);
  }
  return false;
}

bool is_zero_literal(const Expr& e) {
  auto v = literal(e);
  return v && *v == 0.0;
}

}  // namespace dirac::expr
