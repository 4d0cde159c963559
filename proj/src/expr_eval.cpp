#include "rseries/expr.hpp"

namespace rseries {

Evaluator::Evaluator(const FunctionDef& f, unsigned digits) : f_(f), digits_(digits) {
  WorkingPrecision precision(digits_);
  entry_ = compile(f_.root());
}

std::size_t Evaluator::compile(const Node& node) {
  Instr instr{Code::Literal, 0, 0, Real(0), &node};
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          instr.value = parse_real(n.text);
        } else if constexpr (std::is_same_v<T, Variable>) {
          instr.code = Code::Var;
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          instr.value = n.which == Constant::Pi ? real_pi() : real_e();
        } else if constexpr (std::is_same_v<T, Negate>) {
          instr.code = Code::Neg;
          instr.lhs = compile(*n.operand);
        } else if constexpr (std::is_same_v<T, Call>) {
          switch (n.fn) {
            case Builtin::Sin: instr.code = Code::Sin; break;
            case Builtin::Cos: instr.code = Code::Cos; break;
            case Builtin::Exp: instr.code = Code::Exp; break;
            case Builtin::Ln: instr.code = Code::Ln; break;
            case Builtin::Sqrt: instr.code = Code::Sqrt; break;
            case Builtin::Abs: instr.code = Code::Abs; break;
          }
          instr.lhs = compile(*n.arg);
        } else {
          switch (n.op) {
            case BinaryOp::Add: instr.code = Code::Add; break;
            case BinaryOp::Sub: instr.code = Code::Sub; break;
            case BinaryOp::Mul: instr.code = Code::Mul; break;
            case BinaryOp::Div: instr.code = Code::Div; break;
            case BinaryOp::Pow: instr.code = Code::Pow; break;
          }
          instr.lhs = compile(*n.lhs);
          instr.rhs = compile(*n.rhs);
        }
      },
      node.kind);
  program_.push_back(std::move(instr));
  return program_.size() - 1;
}

Real Evaluator::operator()(const Real& x) const {
  WorkingPrecision precision(digits_);
  return run(entry_, x);
}

Real Evaluator::run(std::size_t index, const Real& x) const {
  const Instr& in = program_[index];
  auto fail = [&](const std::string& what) -> DomainError {
    const std::string sub = render(*in.source);
    return DomainError(sub, x, what + " in '" + sub + "' at x = " + to_short_string(x, 20));
  };
  switch (in.code) {
    case Code::Literal: return in.value;
    case Code::Var: return Real(x);
    case Code::Neg: return -run(in.lhs, x);
    case Code::Add: return run(in.lhs, x) + run(in.rhs, x);
    case Code::Sub: return run(in.lhs, x) - run(in.rhs, x);
    case Code::Mul: return run(in.lhs, x) * run(in.rhs, x);
    case Code::Div: {
      Real num = run(in.lhs, x);
      Real den = run(in.rhs, x);
      if (den == 0) throw fail("division by zero");
      return num / den;
    }
    case Code::Pow: {
      Real base = run(in.lhs, x);
      Real exponent = run(in.rhs, x);
      const bool integral = exponent == floor(exponent);
      if (base == 0) {
        if (exponent < 0) throw fail("division by zero");
        return exponent == 0 ? Real(1) : Real(0);
      }
      if (base < 0 && !integral) throw fail("negative base with non-integer exponent");
      return pow(base, exponent);
    }
    case Code::Sin: return sin(run(in.lhs, x));
    case Code::Cos: return cos(run(in.lhs, x));
    case Code::Exp: return exp(run(in.lhs, x));
    case Code::Ln: {
      Real arg = run(in.lhs, x);
      if (arg <= 0) throw fail("logarithm of a non-positive value");
      return log(arg);
    }
    case Code::Sqrt: {
      Real arg = run(in.lhs, x);
      if (arg < 0) throw fail("square root of a negative value");
      return sqrt(arg);
    }
    case Code::Abs: return abs(run(in.lhs, x));
  }
  return Real(0);
}

Real evaluate(const FunctionDef& f, const Real& x, unsigned digits) {
  return Evaluator(f, digits)(x);
}

}  // namespace rseries
