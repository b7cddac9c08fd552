#ifndef ATBENCH_CONSTRAINT_HPP
#define ATBENCH_CONSTRAINT_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atbench/domain.hpp"
#include "atbench/error.hpp"

namespace atbench {

/// Constraint expressions over parameter values.
///
/// Grammar (lowest to highest precedence):
///
///     expr   := or
///     or     := and { ("||" | "or") and }
///     and    := cmp { ("&&" | "and") cmp }
///     cmp    := sum [ ("==" | "!=" | "<=" | "<" | ">=" | ">") sum ]
///     sum    := term { ("+" | "-") term }
///     term   := factor { ("*" | "/" | "%") factor }
///     factor := number | string | "true" | "false" | identifier
///             | "(" expr ")" | "!" factor | "-" factor
///
/// Expressions are type checked when parsed. Numbers are evaluated as 64-bit
/// reals. `%` needs integer-typed operands (integer parameters, integer
/// literals and their sums, differences, products and remainders) and uses
/// floored modulo; a zero divisor makes the constraint false. Strings may only
/// be compared with `==` and `!=` against other strings.
class Constraint {
public:
  enum class Op {
    Number, String, Boolean, Param,
    Neg, Not,
    Add, Sub, Mul, Div, Mod,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or,
  };

  enum class Type { Int, Real, Bool, String };

  struct Node {
    Op op;
    Type type;
    int lhs = -1;
    int rhs = -1;
    double number = 0.0;
    std::string text;
    std::size_t param = 0;
  };

  static Node make_node(Op op, Type type, int lhs = -1, int rhs = -1, double number = 0.0) {
    Node n{op, type, lhs, rhs, number, std::string{}, 0};
    return n;
  }

  static Constraint parse(std::string_view source, std::span<const ParamDomain> domains) {
    Constraint c;
    c.source_ = std::string(source);
    c.numeric_.resize(domains.size());
    c.strings_.resize(domains.size());
    for (std::size_t d = 0; d < domains.size(); ++d) {
      for (const auto& v : domains[d].values()) {
        c.numeric_[d].push_back(as_double(v));
        c.strings_[d].push_back(std::holds_alternative<std::string>(v) ? std::get<std::string>(v)
                                                                       : std::string{});
      }
    }
    Parser p{source, domains, c.nodes_, 0, Parser::Token{}};
    c.root_ = p.parse();
    if (c.nodes_[c.root_].type == Type::String) {
      throw TypeError("constraint '" + c.source_ + "' evaluates to a string");
    }
    for (const auto& n : c.nodes_) {
      if (n.op == Op::Param) {
        c.params_.push_back(n.param);
      }
    }
    return c;
  }

  const std::string& source() const { return source_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

  /// Parameter positions referenced by the expression (with repeats).
  const std::vector<std::size_t>& referenced_params() const { return params_; }

  std::size_t count(Op op) const {
    std::size_t n = 0;
    for (const auto& node : nodes_) {
      n += node.op == op;
    }
    return n;
  }

  /// True iff the expression holds for the values selected by `indices`.
  bool holds(std::span<const Index> indices) const {
    const Scalar r = eval(root_, indices);
    return r.num != 0.0 && !std::isnan(r.num);
  }

private:
  struct Scalar {
    double num = 0.0;
    const std::string* str = nullptr;
  };

  Scalar eval(int id, std::span<const Index> idx) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.op) {
    case Op::Number:
    case Op::Boolean:
      return {n.number, nullptr};
    case Op::String:
      return {0.0, &n.text};
    case Op::Param:
      return {numeric_[n.param][idx[n.param]], &strings_[n.param][idx[n.param]]};
    case Op::Neg:
      return {-eval(n.lhs, idx).num, nullptr};
    case Op::Not: {
      const double v = eval(n.lhs, idx).num;
      return {std::isnan(v) ? v : (v == 0.0 ? 1.0 : 0.0), nullptr};
    }
    case Op::And: {
      const double l = eval(n.lhs, idx).num;
      if (std::isnan(l) || l == 0.0) {
        return {l, nullptr};
      }
      const double r = eval(n.rhs, idx).num;
      return {std::isnan(r) ? r : (r != 0.0 ? 1.0 : 0.0), nullptr};
    }
    case Op::Or: {
      const double l = eval(n.lhs, idx).num;
      if (std::isnan(l) || l != 0.0) {
        return {std::isnan(l) ? l : 1.0, nullptr};
      }
      const double r = eval(n.rhs, idx).num;
      return {std::isnan(r) ? r : (r != 0.0 ? 1.0 : 0.0), nullptr};
    }
    default:
      break;
    }
    const Scalar a = eval(n.lhs, idx);
    const Scalar b = eval(n.rhs, idx);
    const bool strings = nodes_[static_cast<std::size_t>(n.lhs)].type == Type::String;
    // an undefined operand (zero divisor) makes every enclosing expression undefined
    if (!strings && (std::isnan(a.num) || std::isnan(b.num))) {
      return {std::nan(""), nullptr};
    }
    switch (n.op) {
    case Op::Add: return {a.num + b.num, nullptr};
    case Op::Sub: return {a.num - b.num, nullptr};
    case Op::Mul: return {a.num * b.num, nullptr};
    case Op::Div: return {b.num == 0.0 ? std::nan("") : a.num / b.num, nullptr};
    case Op::Mod: return {floored_mod(a.num, b.num), nullptr};
    case Op::Eq: return {(strings ? *a.str == *b.str : a.num == b.num) ? 1.0 : 0.0, nullptr};
    case Op::Ne: return {(strings ? *a.str != *b.str : a.num != b.num) ? 1.0 : 0.0, nullptr};
    case Op::Lt: return {a.num < b.num ? 1.0 : 0.0, nullptr};
    case Op::Le: return {a.num <= b.num ? 1.0 : 0.0, nullptr};
    case Op::Gt: return {a.num > b.num ? 1.0 : 0.0, nullptr};
    case Op::Ge: return {a.num >= b.num ? 1.0 : 0.0, nullptr};
    default: return {};
    }
  }

  static double floored_mod(double a, double b) {
    if (b == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
      return std::nan("");
    }
    const auto x = static_cast<std::int64_t>(a);
    const auto y = static_cast<std::int64_t>(b);
    std::int64_t r = x % y;
    if (r != 0 && ((r < 0) != (y < 0))) {
      r += y;
    }
    return static_cast<double>(r);
  }

  struct Parser {
    std::string_view src;
    std::span<const ParamDomain> domains;
    std::vector<Node>& nodes;
    std::size_t pos = 0;

    enum class Tok { End, Number, String, Ident, Op, LParen, RParen };
    struct Token {
      Tok kind = Tok::End;
      std::string text;
      std::size_t at = 0;
    };
    Token cur;

    int parse() {
      advance();
      const int root = parse_or();
      if (cur.kind != Tok::End) {
        fail("unexpected '" + cur.text + "'");
      }
      return root;
    }

    [[noreturn]] void fail(const std::string& what) const {
      throw SyntaxError("constraint '" + std::string(src) + "': " + what + " at offset " +
                        std::to_string(cur.at));
    }

    void advance() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
        ++pos;
      }
      cur = Token{};
      cur.at = pos;
      if (pos >= src.size()) {
        cur.kind = Tok::End;
        cur.text = "end of input";
        return;
      }
      const char ch = src[pos];
      if (std::isdigit(static_cast<unsigned char>(ch)) ||
          (ch == '.' && pos + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
        std::size_t end = pos;
        while (end < src.size() && (std::isdigit(static_cast<unsigned char>(src[end])) || src[end] == '.')) {
          ++end;
        }
        if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
          std::size_t e = end + 1;
          if (e < src.size() && (src[e] == '+' || src[e] == '-')) {
            ++e;
          }
          if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
            end = e;
            while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) {
              ++end;
            }
          }
        }
        cur.kind = Tok::Number;
        cur.text = std::string(src.substr(pos, end - pos));
        pos = end;
        return;
      }
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t end = pos;
        while (end < src.size() && (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_')) {
          ++end;
        }
        cur.kind = Tok::Ident;
        cur.text = std::string(src.substr(pos, end - pos));
        pos = end;
        return;
      }
      if (ch == '"' || ch == '\'') {
        std::size_t end = pos + 1;
        while (end < src.size() && src[end] != ch) {
          ++end;
        }
        if (end >= src.size()) {
          fail("unterminated string literal");
        }
        cur.kind = Tok::String;
        cur.text = std::string(src.substr(pos + 1, end - pos - 1));
        pos = end + 1;
        return;
      }
      if (ch == '(' || ch == ')') {
        cur.kind = ch == '(' ? Tok::LParen : Tok::RParen;
        cur.text = std::string(1, ch);
        ++pos;
        return;
      }
      static constexpr std::string_view two[] = {"==", "!=", "<=", ">=", "&&", "||"};
      for (auto op : two) {
        if (src.substr(pos, 2) == op) {
          cur.kind = Tok::Op;
          cur.text = std::string(op);
          pos += 2;
          return;
        }
      }
      if (std::string_view("<>+-*/%!").find(ch) != std::string_view::npos) {
        cur.kind = Tok::Op;
        cur.text = std::string(1, ch);
        ++pos;
        return;
      }
      cur.text = std::string(1, ch);
      fail("unexpected character '" + cur.text + "'");
    }

    bool at_op(std::string_view op) const { return cur.kind == Tok::Op && cur.text == op; }
    bool at_word(std::string_view w) const { return cur.kind == Tok::Ident && cur.text == w; }

    int add(Node n) {
      nodes.push_back(std::move(n));
      return static_cast<int>(nodes.size() - 1);
    }

    Type type_of(int id) const { return nodes[static_cast<std::size_t>(id)].type; }

    void require_not_string(int id, std::string_view op) const {
      if (type_of(id) == Type::String) {
        throw TypeError("constraint '" + std::string(src) + "': string operand under '" +
                        std::string(op) + "'");
      }
    }

    int binary(Op op, std::string_view text, int l, int r) {
      Type t = Type::Bool;
      switch (op) {
      case Op::Add: case Op::Sub: case Op::Mul:
        require_not_string(l, text);
        require_not_string(r, text);
        t = (type_of(l) == Type::Int && type_of(r) == Type::Int) ? Type::Int : Type::Real;
        break;
      case Op::Div:
        require_not_string(l, text);
        require_not_string(r, text);
        t = Type::Real;
        break;
      case Op::Mod:
        if (type_of(l) != Type::Int || type_of(r) != Type::Int) {
          throw TypeError("constraint '" + std::string(src) + "': '%' requires integer operands");
        }
        t = Type::Int;
        break;
      case Op::Eq: case Op::Ne:
        if ((type_of(l) == Type::String) != (type_of(r) == Type::String)) {
          throw TypeError("constraint '" + std::string(src) + "': string compared with non-string");
        }
        break;
      default:
        require_not_string(l, text);
        require_not_string(r, text);
        break;
      }
      return add(make_node(op, t, l, r));
    }

    int parse_or() {
      int l = parse_and();
      while (at_op("||") || at_word("or")) {
        const std::string text = cur.text;
        advance();
        l = binary(Op::Or, text, l, parse_and());
      }
      return l;
    }

    int parse_and() {
      int l = parse_cmp();
      while (at_op("&&") || at_word("and")) {
        const std::string text = cur.text;
        advance();
        l = binary(Op::And, text, l, parse_cmp());
      }
      return l;
    }

    int parse_cmp() {
      int l = parse_sum();
      static constexpr std::pair<std::string_view, Op> ops[] = {
          {"==", Op::Eq}, {"!=", Op::Ne}, {"<=", Op::Le}, {"<", Op::Lt}, {">=", Op::Ge}, {">", Op::Gt}};
      for (auto [text, op] : ops) {
        if (at_op(text)) {
          advance();
          return binary(op, text, l, parse_sum());
        }
      }
      return l;
    }

    int parse_sum() {
      int l = parse_term();
      while (at_op("+") || at_op("-")) {
        const std::string text = cur.text;
        advance();
        l = binary(text == "+" ? Op::Add : Op::Sub, text, l, parse_term());
      }
      return l;
    }

    int parse_term() {
      int l = parse_factor();
      while (at_op("*") || at_op("/") || at_op("%")) {
        const std::string text = cur.text;
        advance();
        const Op op = text == "*" ? Op::Mul : text == "/" ? Op::Div : Op::Mod;
        l = binary(op, text, l, parse_factor());
      }
      return l;
    }

    int parse_factor() {
      if (cur.kind == Tok::Number) {
        const std::string text = cur.text;
        const bool integral = text.find_first_of(".eE") == std::string::npos;
        double value = 0.0;
        try {
          std::size_t used = 0;
          value = std::stod(text, &used);
          if (used != text.size()) {
            fail("malformed number '" + text + "'");
          }
        } catch (const std::logic_error&) {
          fail("malformed number '" + text + "'");
        }
        advance();
        return add(make_node(Op::Number, integral ? Type::Int : Type::Real, -1, -1, value));
      }
      if (cur.kind == Tok::String) {
        Node n = make_node(Op::String, Type::String);
        n.text = cur.text;
        advance();
        return add(std::move(n));
      }
      if (cur.kind == Tok::Ident) {
        const std::string name = cur.text;
        if (name == "true" || name == "True" || name == "false" || name == "False") {
          advance();
          return add(make_node(Op::Boolean, Type::Bool, -1, -1, (name[0] == 't' || name[0] == 'T') ? 1.0 : 0.0));
        }
        if (name == "and" || name == "or") {
          fail("unexpected '" + name + "'");
        }
        for (std::size_t d = 0; d < domains.size(); ++d) {
          if (domains[d].name() == name) {
            advance();
            Type t = Type::Real;
            switch (domains[d].kind()) {
            case ValueKind::Integer: t = Type::Int; break;
            case ValueKind::Real: t = Type::Real; break;
            case ValueKind::Boolean: t = Type::Bool; break;
            case ValueKind::String: t = Type::String; break;
            }
            Node n = make_node(Op::Param, t);
            n.param = d;
            n.text = name;
            return add(std::move(n));
          }
        }
        throw UnknownParameter("constraint '" + std::string(src) + "': unknown parameter '" + name + "'");
      }
      if (cur.kind == Tok::LParen) {
        advance();
        const int inner = parse_or();
        if (cur.kind != Tok::RParen) {
          fail("expected ')'");
        }
        advance();
        return inner;
      }
      if (at_op("!")) {
        advance();
        const int operand = parse_factor();
        require_not_string(operand, "!");
        return add(make_node(Op::Not, Type::Bool, operand));
      }
      if (at_op("-")) {
        advance();
        const int operand = parse_factor();
        require_not_string(operand, "-");
        return add(make_node(Op::Neg, type_of(operand) == Type::Int ? Type::Int : Type::Real, operand));
      }
      fail(cur.kind == Tok::End ? "unexpected end of input" : "unexpected '" + cur.text + "'");
    }
  };

  std::string source_;
  std::vector<Node> nodes_;
  int root_ = -1;
  std::vector<std::size_t> params_;
  std::vector<std::vector<double>> numeric_;
  std::vector<std::vector<std::string>> strings_;
};

/// Parses `source` against the declared parameter domains.
inline Constraint parse_constraint(std::string_view source, std::span<const ParamDomain> domains) {
  return Constraint::parse(source, domains);
}

} // namespace atbench

#endif // ATBENCH_CONSTRAINT_HPP
