#include "netforge/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

#include "netforge/error.hpp"

namespace netforge {

namespace {

using Node = Formula::Node;
using NodePtr = Formula::NodePtr;
using BinaryOp = Formula::BinaryOp;
using Function = Formula::Function;

struct FunctionInfo {
  Function function;
  std::string_view name;
  std::size_t min_args;
  std::size_t max_args;  // 0 = unbounded
};

constexpr FunctionInfo kFunctions[] = {
    {Function::Min, "min", 1, 0},   {Function::Max, "max", 1, 0},   {Function::Abs, "abs", 1, 1},
    {Function::Sqrt, "sqrt", 1, 1}, {Function::Exp, "exp", 1, 1},   {Function::Ln, "ln", 1, 1},
    {Function::Log10, "log10", 1, 1}, {Function::Pow, "pow", 2, 2},
};

const FunctionInfo& info(Function f) {
  for (const auto& fi : kFunctions) {
    if (fi.function == f) return fi;
  }
  return kFunctions[0];
}

NodePtr make(auto value) { return std::make_shared<const Node>(Node{std::move(value)}); }

bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == text_.size()) throw SyntaxError(Errc::SyntaxError, pos_, "empty formula");
    NodePtr root = sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(Errc::SyntaxError, pos_, message); }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr lhs = product();
    for (;;) {
      if (accept('+')) {
        NodePtr rhs = product();
        lhs = make(Formula::Binary{BinaryOp::Add, lhs, std::move(rhs)});
      } else if (accept('-')) {
        NodePtr rhs = product();
        lhs = make(Formula::Binary{BinaryOp::Sub, lhs, std::move(rhs)});
      } else {
        return lhs;
      }
    }
  }

  NodePtr product() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        NodePtr rhs = unary();
        lhs = make(Formula::Binary{BinaryOp::Mul, lhs, std::move(rhs)});
      } else if (accept('/')) {
        NodePtr rhs = unary();
        lhs = make(Formula::Binary{BinaryOp::Div, lhs, std::move(rhs)});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      NodePtr operand = unary();
      return make(Formula::Negate{std::move(operand)});
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) {
      // Operands go through locals: GCC 11 leaks the copied `base` if a braced
      // initializer throws part way.
      NodePtr exponent = unary();
      return make(Formula::Binary{BinaryOp::Pow, std::move(base), std::move(exponent)});
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of formula");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (is_digit(c) || c == '.') return number();
    if (is_ident_start(c)) return identifier_or_call();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      pos_ = start;
      fail("malformed number");
    }
    return make(Formula::Number{value});
  }

  NodePtr identifier_or_call() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (!accept('(')) return make(Formula::Identifier{std::move(name)});

    auto function = function_from_name(name);
    if (!function) throw SyntaxError(Errc::UnknownFunction, start, "unknown function '" + name + "'");
    std::vector<NodePtr> args;
    if (!accept(')')) {
      do {
        args.push_back(sum());
      } while (accept(','));
      if (!accept(')')) fail("expected ')' or ','");
    }
    const auto& fi = info(*function);
    if (args.size() < fi.min_args || (fi.max_args != 0 && args.size() > fi.max_args)) {
      throw SyntaxError(Errc::SyntaxError, start,
                        "wrong number of arguments to " + name + "(): " + std::to_string(args.size()));
    }
    return make(Formula::Call{*function, std::move(args)});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength used to decide where parentheses are needed when printing.
int precedence(const Node& n) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Formula::Binary>) {
          switch (v.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub: return 1;
            case BinaryOp::Mul:
            case BinaryOp::Div: return 2;
            case BinaryOp::Pow: return 4;
          }
          return 0;
        } else if constexpr (std::is_same_v<T, Formula::Negate>) {
          return 3;
        } else {
          return 5;
        }
      },
      n.value);
}

void print(const Node& n, std::string& out);

void print_wrapped(const Node& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print(n, out);
  if (parens) out += ')';
}

void print(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Formula::Number>) {
          out += format_shortest(v.value);
        } else if constexpr (std::is_same_v<T, Formula::Identifier>) {
          out += v.name;
        } else if constexpr (std::is_same_v<T, Formula::Negate>) {
          out += '-';
          print_wrapped(*v.operand, precedence(*v.operand) < 3, out);
        } else if constexpr (std::is_same_v<T, Formula::Binary>) {
          const int p = precedence(n);
          if (v.op == BinaryOp::Pow) {
            print_wrapped(*v.lhs, precedence(*v.lhs) <= 4, out);
            out += '^';
            print_wrapped(*v.rhs, precedence(*v.rhs) < 3, out);
            return;
          }
          print_wrapped(*v.lhs, precedence(*v.lhs) < p, out);
          switch (v.op) {
            case BinaryOp::Add: out += " + "; break;
            case BinaryOp::Sub: out += " - "; break;
            case BinaryOp::Mul: out += " * "; break;
            case BinaryOp::Div: out += " / "; break;
            case BinaryOp::Pow: break;
          }
          print_wrapped(*v.rhs, precedence(*v.rhs) <= p, out);
        } else if constexpr (std::is_same_v<T, Formula::Call>) {
          out += to_string(v.function);
          out += '(';
          for (std::size_t i = 0; i < v.args.size(); ++i) {
            if (i) out += ", ";
            print(*v.args[i], out);
          }
          out += ')';
        }
      },
      n.value);
}

double checked(double value, const char* what) {
  if (!std::isfinite(value)) throw Error(Errc::NonFiniteResult, std::string(what) + " produced a non-finite value");
  return value;
}

double eval(const Node& n, const Formula::Lookup& lookup) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Formula::Number>) {
          return v.value;
        } else if constexpr (std::is_same_v<T, Formula::Identifier>) {
          auto value = lookup ? lookup(v.name) : std::nullopt;
          if (!value) throw Error(Errc::UnresolvedIdentifier, "'" + v.name + "' is not defined");
          return checked(*value, v.name.c_str());
        } else if constexpr (std::is_same_v<T, Formula::Negate>) {
          return -eval(*v.operand, lookup);
        } else if constexpr (std::is_same_v<T, Formula::Binary>) {
          const double a = eval(*v.lhs, lookup);
          const double b = eval(*v.rhs, lookup);
          switch (v.op) {
            case BinaryOp::Add: return checked(a + b, "addition");
            case BinaryOp::Sub: return checked(a - b, "subtraction");
            case BinaryOp::Mul: return checked(a * b, "multiplication");
            case BinaryOp::Div:
              if (b == 0.0) throw Error(Errc::DivisionByZero, "division by zero");
              return checked(a / b, "division");
            case BinaryOp::Pow: return checked(std::pow(a, b), "power");
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, Formula::Call>) {
          std::vector<double> args;
          args.reserve(v.args.size());
          for (const auto& arg : v.args) args.push_back(eval(*arg, lookup));
          switch (v.function) {
            case Function::Min: {
              double m = args[0];
              for (double x : args) m = std::min(m, x);
              return m;
            }
            case Function::Max: {
              double m = args[0];
              for (double x : args) m = std::max(m, x);
              return m;
            }
            case Function::Abs: return std::fabs(args[0]);
            case Function::Sqrt: return checked(std::sqrt(args[0]), "sqrt");
            case Function::Exp: return checked(std::exp(args[0]), "exp");
            case Function::Ln: return checked(std::log(args[0]), "ln");
            case Function::Log10: return checked(std::log10(args[0]), "log10");
            case Function::Pow: return checked(std::pow(args[0], args[1]), "pow");
          }
          return 0.0;
        }
      },
      n.value);
}

void collect(const Node& n, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Formula::Identifier>) {
          if (std::find(out.begin(), out.end(), v.name) == out.end()) out.push_back(v.name);
        } else if constexpr (std::is_same_v<T, Formula::Negate>) {
          collect(*v.operand, out);
        } else if constexpr (std::is_same_v<T, Formula::Binary>) {
          collect(*v.lhs, out);
          collect(*v.rhs, out);
        } else if constexpr (std::is_same_v<T, Formula::Call>) {
          for (const auto& a : v.args) collect(*a, out);
        }
      },
      n.value);
}

NodePtr number_node(double value) {
  if (std::signbit(value)) return make(Formula::Negate{make(Formula::Number{-value})});
  return make(Formula::Number{value});
}

NodePtr subst(const NodePtr& n, const Formula::Lookup& lookup) {
  return std::visit(
      [&](const auto& v) -> NodePtr {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Formula::Identifier>) {
          if (auto value = lookup(v.name); value && std::isfinite(*value)) return number_node(*value);
          return n;
        } else if constexpr (std::is_same_v<T, Formula::Negate>) {
          return make(Formula::Negate{subst(v.operand, lookup)});
        } else if constexpr (std::is_same_v<T, Formula::Binary>) {
          NodePtr lhs = subst(v.lhs, lookup);
          NodePtr rhs = subst(v.rhs, lookup);
          return make(Formula::Binary{v.op, std::move(lhs), std::move(rhs)});
        } else if constexpr (std::is_same_v<T, Formula::Call>) {
          std::vector<NodePtr> args;
          for (const auto& a : v.args) args.push_back(subst(a, lookup));
          return make(Formula::Call{v.function, std::move(args)});
        } else {
          return n;
        }
      },
      n->value);
}

bool equal(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  return std::visit(
      [&](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.value);
        if constexpr (std::is_same_v<T, Formula::Number>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, Formula::Identifier>) {
          return va.name == vb.name;
        } else if constexpr (std::is_same_v<T, Formula::Negate>) {
          return equal(*va.operand, *vb.operand);
        } else if constexpr (std::is_same_v<T, Formula::Binary>) {
          return va.op == vb.op && equal(*va.lhs, *vb.lhs) && equal(*va.rhs, *vb.rhs);
        } else if constexpr (std::is_same_v<T, Formula::Call>) {
          if (va.function != vb.function || va.args.size() != vb.args.size()) return false;
          for (std::size_t i = 0; i < va.args.size(); ++i) {
            if (!equal(*va.args[i], *vb.args[i])) return false;
          }
          return true;
        }
      },
      a.value);
}

}  // namespace

std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string_view to_string(Formula::Function f) noexcept { return info(f).name; }

std::optional<Formula::Function> function_from_name(std::string_view name) noexcept {
  for (const auto& fi : kFunctions) {
    if (fi.name == name) return fi.function;
  }
  return std::nullopt;
}

Formula Formula::parse(std::string_view text) { return Formula(Parser(text).parse()); }

Formula Formula::number(double value) {
  if (!std::isfinite(value) || std::signbit(value)) {
    throw Error(Errc::InvalidNumber, "formula literals must be finite and non-negative; use negate()");
  }
  return Formula(make(Number{value}));
}

Formula Formula::identifier(std::string name) {
  // Function names stay valid identifiers; they only mean a call when followed by '('.
  if (name.empty() || !is_ident_start(name[0]) ||
      !std::all_of(name.begin(), name.end(), [](char c) { return is_ident_char(c); })) {
    throw Error(Errc::SyntaxError, "invalid identifier '" + name + "'");
  }
  return Formula(make(Identifier{std::move(name)}));
}

Formula Formula::negate(Formula operand) { return Formula(make(Negate{std::move(operand.root_)})); }

Formula Formula::binary(BinaryOp op, Formula lhs, Formula rhs) {
  return Formula(make(Binary{op, std::move(lhs.root_), std::move(rhs.root_)}));
}

Formula Formula::call(Function function, std::vector<Formula> args) {
  const auto& fi = info(function);
  if (args.size() < fi.min_args || (fi.max_args != 0 && args.size() > fi.max_args)) {
    throw Error(Errc::SyntaxError, "wrong number of arguments to " + std::string(fi.name) + "()");
  }
  std::vector<NodePtr> nodes;
  for (auto& a : args) nodes.push_back(std::move(a.root_));
  return Formula(make(Call{function, std::move(nodes)}));
}

std::string Formula::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

double Formula::evaluate(const Lookup& lookup) const { return eval(*root_, lookup); }

std::vector<std::string> Formula::identifiers() const {
  std::vector<std::string> out;
  collect(*root_, out);
  return out;
}

Formula Formula::substitute(const Lookup& lookup) const { return Formula(subst(root_, lookup)); }

bool operator==(const Formula& a, const Formula& b) { return a.root_ == b.root_ || equal(*a.root_, *b.root_); }

}  // namespace netforge
