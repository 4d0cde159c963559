#pragma once

#include "rseries/real.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rseries {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Builtin { Sin, Cos, Exp, Ln, Sqrt, Abs };
enum class Constant { Pi, E };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  std::string text;  // literal as written; converted at evaluation precision
};
struct Variable {};
struct NamedConstant {
  Constant which;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Builtin fn;
  NodePtr arg;
};

struct Node {
  std::variant<Number, Variable, NamedConstant, Negate, Binary, Call> kind;
};

/// Structural equality of expression trees.
bool operator==(const Node& lhs, const Node& rhs);

std::string_view builtin_name(Builtin fn);

/// Parsed defining function f(x). Immutable after construction.
class FunctionDef {
 public:
  FunctionDef(NodePtr root, std::string source_text)
      : root_(std::move(root)), source_(std::move(source_text)) {}

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::string& source_text() const { return source_; }

  friend bool operator==(const FunctionDef& lhs, const FunctionDef& rhs) {
    return *lhs.root_ == *rhs.root_;
  }

 private:
  NodePtr root_;
  std::string source_;
};

/// Truncated Taylor data a1, a2, ..., am of f at 0. a1 is stored explicitly.
struct TaylorDef {
  std::vector<Real> coefficients;
  std::optional<Real> radius_hint;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Arity };
  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}
  Kind kind() const { return kind_; }
  /// Byte offset into the source text.
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Raised for ln/sqrt of negative values, division by zero and negative
/// bases under non-integer powers.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string subexpression, const Real& x, const std::string& what)
      : std::runtime_error(what), subexpression_(std::move(subexpression)), x_(x) {}
  const std::string& subexpression() const { return subexpression_; }
  const Real& x() const { return x_; }

 private:
  std::string subexpression_;
  Real x_;
};

FunctionDef parse(std::string_view text);

/// Canonical rendering: binary operators surrounded by single spaces,
/// parentheses only where precedence or associativity requires them.
std::string render(const FunctionDef& f);
std::string render(const Node& node);

/// Parses "a1,a2,..." (decimals or p/q ratios) at the working precision.
TaylorDef parse_taylor(std::string_view text);

/// Polynomial a1 x + a2 x^2 + ... built from Taylor data; zero terms are dropped.
FunctionDef taylor_polynomial(const TaylorDef& taylor);

/// Evaluation-ready form of a FunctionDef at a fixed precision: literals and
/// named constants are converted once. Calls are const and side-effect free.
class Evaluator {
 public:
  explicit Evaluator(const FunctionDef& f, unsigned digits = WorkingPrecision::current());

  Real operator()(const Real& x) const;
  unsigned digits() const { return digits_; }
  const FunctionDef& function() const { return f_; }

 private:
  enum class Code { Literal, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Ln, Sqrt, Abs };
  struct Instr {
    Code code;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    Real value;
    const Node* source = nullptr;
  };

  std::size_t compile(const Node& node);
  Real run(std::size_t index, const Real& x) const;

  FunctionDef f_;
  unsigned digits_;
  std::vector<Instr> program_;
  std::size_t entry_ = 0;
};

/// One-shot evaluation of f at x with `digits` significant digits.
Real evaluate(const FunctionDef& f, const Real& x, unsigned digits = kDefaultDigits);

}  // namespace rseries
