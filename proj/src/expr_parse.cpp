#include "rseries/expr.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace rseries {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok type;
  std::string_view text;
  std::size_t offset;
};

constexpr std::array<std::pair<std::string_view, Builtin>, 6> kBuiltins{{
    {"sin", Builtin::Sin},
    {"cos", Builtin::Cos},
    {"exp", Builtin::Exp},
    {"ln", Builtin::Ln},
    {"sqrt", Builtin::Sqrt},
    {"abs", Builtin::Abs},
}};

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) return {Tok::End, {}, pos_};
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (is_digit(c)) return number(start);
    if (is_alpha(c)) {
      while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      return {Tok::Ident, src_.substr(start, pos_ - start), start};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, src_.substr(start, 1), start};
      case '-': return {Tok::Minus, src_.substr(start, 1), start};
      case '*': return {Tok::Star, src_.substr(start, 1), start};
      case '/': return {Tok::Slash, src_.substr(start, 1), start};
      case '^': return {Tok::Caret, src_.substr(start, 1), start};
      case '(': return {Tok::LParen, src_.substr(start, 1), start};
      case ')': return {Tok::RParen, src_.substr(start, 1), start};
      case ',': return {Tok::Comma, src_.substr(start, 1), start};
      default:
        throw ParseError(ParseError::Kind::Syntax, start,
                         "unexpected character '" + std::string(1, c) + "' at offset " +
                             std::to_string(start));
    }
  }

 private:
  Token number(std::size_t start) {
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      if (pos_ >= src_.size() || !is_digit(src_[pos_])) {
        throw ParseError(ParseError::Kind::Syntax, pos_,
                         "expected digits after decimal point at offset " + std::to_string(pos_));
      }
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    // An exponent only counts if digits follow; otherwise 'e' is left for the
    // next token (and "2e" then fails as implicit multiplication).
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && is_digit(src_[look])) {
        pos_ = look;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      }
    }
    return {Tok::Number, src_.substr(start, pos_ - start), start};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

NodePtr make(auto&& kind) { return std::make_shared<const Node>(Node{std::forward<decltype(kind)>(kind)}); }

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr root = expr();
    if (cur_.type != Tok::End) fail_syntax("unexpected '" + std::string(cur_.text) + "'");
    return root;
  }

 private:
  void advance() { cur_ = lexer_.next(); }

  [[noreturn]] void fail_syntax(const std::string& msg) const {
    throw ParseError(ParseError::Kind::Syntax, cur_.offset,
                     msg + " at offset " + std::to_string(cur_.offset));
  }

  void expect(Tok type, std::string_view what) {
    if (cur_.type != type) {
      fail_syntax("expected " + std::string(what) +
                  (cur_.type == Tok::End ? std::string(" before end of input")
                                         : ", found '" + std::string(cur_.text) + "'"));
    }
    advance();
  }

  // expr := term (("+"|"-") term)*
  NodePtr expr() {
    NodePtr lhs = term();
    while (cur_.type == Tok::Plus || cur_.type == Tok::Minus) {
      const BinaryOp op = cur_.type == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = make(Binary{op, lhs, term()});
    }
    return lhs;
  }

  // term := factor (("*"|"/") factor)*
  NodePtr term() {
    NodePtr lhs = factor();
    while (cur_.type == Tok::Star || cur_.type == Tok::Slash) {
      const BinaryOp op = cur_.type == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      advance();
      lhs = make(Binary{op, lhs, factor()});
    }
    return lhs;
  }

  // factor := ("-")? power
  NodePtr factor() {
    if (cur_.type == Tok::Minus) {
      advance();
      return make(Negate{power()});
    }
    return power();
  }

  // power := atom ("^" factor)?
  NodePtr power() {
    NodePtr base = atom();
    if (cur_.type == Tok::Caret) {
      advance();
      return make(Binary{BinaryOp::Pow, base, factor()});
    }
    return base;
  }

  NodePtr atom() {
    const Token tok = cur_;
    switch (tok.type) {
      case Tok::Number:
        advance();
        return make(Number{std::string(tok.text)});
      case Tok::LParen: {
        advance();
        NodePtr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        return identifier(tok);
      case Tok::End:
        fail_syntax("unexpected end of input");
      default:
        fail_syntax("unexpected '" + std::string(tok.text) + "'");
    }
  }

  NodePtr identifier(const Token& tok) {
    advance();
    if (tok.text == "x") return make(Variable{});
    if (tok.text == "pi") return make(NamedConstant{Constant::Pi});
    if (tok.text == "e") return make(NamedConstant{Constant::E});
    for (const auto& [name, fn] : kBuiltins) {
      if (tok.text != name) continue;
      expect(Tok::LParen, "'(' after " + std::string(name));
      if (cur_.type == Tok::RParen) {
        throw ParseError(ParseError::Kind::Arity, tok.offset,
                         std::string(name) + " expects 1 argument, got 0 at offset " +
                             std::to_string(tok.offset));
      }
      NodePtr arg = expr();
      if (cur_.type == Tok::Comma) {
        throw ParseError(ParseError::Kind::Arity, tok.offset,
                         std::string(name) + " expects 1 argument, got more at offset " +
                             std::to_string(tok.offset));
      }
      expect(Tok::RParen, "')'");
      return make(Call{fn, arg});
    }
    throw ParseError(ParseError::Kind::UnknownIdentifier, tok.offset,
                     "unknown identifier '" + std::string(tok.text) + "' at offset " +
                         std::to_string(tok.offset));
  }

  Lexer lexer_;
  Token cur_{Tok::End, {}, 0};
};

}  // namespace

std::string_view builtin_name(Builtin fn) {
  for (const auto& [name, b] : kBuiltins) {
    if (b == fn) return name;
  }
  return "?";
}

bool operator==(const Node& lhs, const Node& rhs) {
  if (lhs.kind.index() != rhs.kind.index()) return false;
  return std::visit(
      [&rhs](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(rhs.kind);
        if constexpr (std::is_same_v<T, Number>) {
          return a.text == b.text;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, NamedConstant>) {
          return a.which == b.which;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return *a.operand == *b.operand;
        } else if constexpr (std::is_same_v<T, Binary>) {
          return a.op == b.op && *a.lhs == *b.lhs && *a.rhs == *b.rhs;
        } else {
          return a.fn == b.fn && *a.arg == *b.arg;
        }
      },
      lhs.kind);
}

FunctionDef parse(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(ParseError::Kind::Syntax, 0, "empty expression");
  }
  return FunctionDef(Parser(text).parse_all(), std::string(text));
}

TaylorDef parse_taylor(std::string_view text) {
  TaylorDef taylor;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    taylor.coefficients.push_back(parse_real(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return taylor;
}

FunctionDef taylor_polynomial(const TaylorDef& taylor) {
  NodePtr sum;
  for (std::size_t i = 0; i < taylor.coefficients.size(); ++i) {
    const Real& a = taylor.coefficients[i];
    if (a == 0) continue;
    NodePtr monomial = make(Variable{});
    if (i > 0) {
      monomial = make(Binary{BinaryOp::Pow, monomial, make(Number{std::to_string(i + 1)})});
    }
    if (abs(a) != 1) monomial = make(Binary{BinaryOp::Mul, make(Number{to_string(abs(a))}), monomial});
    if (!sum) {
      sum = a < 0 ? make(Negate{monomial}) : monomial;
    } else {
      sum = make(Binary{a < 0 ? BinaryOp::Sub : BinaryOp::Add, sum, monomial});
    }
  }
  if (!sum) sum = make(Number{"0"});
  std::string text = render(*sum);
  return FunctionDef(std::move(sum), std::move(text));
}

}  // namespace rseries
