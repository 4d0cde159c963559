#include "rseries/expr.hpp"

namespace rseries {

namespace {

// Binding strength, loosest first; atoms bind tightest.
int precedence(const Node& node) {
  if (const auto* b = std::get_if<Binary>(&node.kind)) {
    switch (b->op) {
      case BinaryOp::Add:
      case BinaryOp::Sub: return 1;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 2;
      case BinaryOp::Pow: return 4;
    }
  }
  if (std::holds_alternative<Negate>(node.kind)) return 3;
  return 5;
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

void emit(const Node& node, std::string& out);

void emit_wrapped(const Node& node, bool parens, std::string& out) {
  if (parens) out += '(';
  emit(node, out);
  if (parens) out += ')';
}

void emit(const Node& node, std::string& out) {
  std::visit(
      [&out](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          out += n.text;
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += 'x';
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          out += n.which == Constant::Pi ? "pi" : "e";
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          emit_wrapped(*n.operand, precedence(*n.operand) < 4, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          out += builtin_name(n.fn);
          out += '(';
          emit(*n.arg, out);
          out += ')';
        } else {
          const int lp = precedence(*n.lhs);
          const int rp = precedence(*n.rhs);
          bool lhs_parens = false;
          bool rhs_parens = false;
          switch (n.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
              rhs_parens = rp <= 1;
              break;
            case BinaryOp::Mul:
            case BinaryOp::Div:
              lhs_parens = lp < 2;
              rhs_parens = rp <= 2;
              break;
            case BinaryOp::Pow:
              // base is an atom, exponent a factor
              lhs_parens = lp < 5;
              rhs_parens = rp < 3;
              break;
          }
          emit_wrapped(*n.lhs, lhs_parens, out);
          out += ' ';
          out += op_symbol(n.op);
          out += ' ';
          emit_wrapped(*n.rhs, rhs_parens, out);
        }
      },
      node.kind);
}

}  // namespace

std::string render(const Node& node) {
  std::string out;
  emit(node, out);
  return out;
}

std::string render(const FunctionDef& f) { return render(f.root()); }

}  // namespace rseries
