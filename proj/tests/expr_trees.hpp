#pragma once

#include <random>

#include "dirac/expr.hpp"

namespace oracle {

using namespace dirac::expr;

// Random trees over t, x, y, z. Singular functions get guarded arguments so
// most samples evaluate; the few that still fail are skipped by the caller.
class TreeGen {
 public:
  explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

  Expr operator()(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(11)) {
      case 0: return negate((*this)(depth - 1));
      case 1: return binary(BinaryOp::Add, (*this)(depth - 1), (*this)(depth - 1));
      case 2: return binary(BinaryOp::Sub, (*this)(depth - 1), (*this)(depth - 1));
      case 3:
      case 4: return binary(BinaryOp::Mul, (*this)(depth - 1), (*this)(depth - 1));
      case 5: return binary(BinaryOp::Div, (*this)(depth - 1), shifted(Func::Cos, depth - 1, 2.0));
      case 6: return binary(BinaryOp::Pow, (*this)(depth - 1), number(double(2 + pick(2))));
      case 7: return binary(BinaryOp::Pow, shifted(Func::Sin, depth - 1, 1.5), (*this)(depth - 1));
      case 8: {
        const Func f[] = {Func::Sin, Func::Cos, Func::Tanh};
        return call(f[pick(3)], (*this)(depth - 1));
      }
      case 9: {
        const Func f[] = {Func::Sqrt, Func::Log};
        return call(f[pick(2)], shifted(Func::Sin, depth - 1, 1.5));
      }
      default: {
        // bounded arguments keep exp and tan away from overflow and poles
        auto bounded = call(Func::Sin, (*this)(depth - 1));
        return pick(2) ? call(Func::Exp, bounded) : call(Func::Tan, binary(BinaryOp::Mul, number(0.5), bounded));
      }
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  Expr leaf() {
    if (pick(2)) return variable(static_cast<Var>(pick(4)));
    return number(std::round(std::uniform_real_distribution<double>(0.1, 3.0)(rng_) * 1000) / 1000);
  }
  // c + f(sub), positive for c > 1
  Expr shifted(Func f, int depth, double c) { return binary(BinaryOp::Add, number(c), call(f, (*this)(depth))); }

  std::mt19937_64 rng_;
};

}  // namespace oracle
