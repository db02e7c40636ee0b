#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace netforge {

/// Arithmetic expression over real literals and parameter identifiers.
///
/// Grammar, lowest to highest precedence:
///
///     sum     := product (('+' | '-') product)*
///     product := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?
///     primary := NUMBER | IDENT | IDENT '(' sum (',' sum)* ')' | '(' sum ')'
///
/// so `^` is right-associative and `-x^2` parses as `-(x^2)`. Literals in the
/// tree are always non-negative; negation is an explicit node.
class Formula {
 public:
  enum class BinaryOp { Add, Sub, Mul, Div, Pow };
  enum class Function { Min, Max, Abs, Sqrt, Exp, Ln, Log10, Pow };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Number { double value; };
  struct Identifier { std::string name; };
  struct Negate { NodePtr operand; };
  struct Binary { BinaryOp op; NodePtr lhs; NodePtr rhs; };
  struct Call { Function function; std::vector<NodePtr> args; };

  struct Node {
    std::variant<Number, Identifier, Negate, Binary, Call> value;
  };

  /// Resolves an identifier to a number, or nullopt when unknown.
  using Lookup = std::function<std::optional<double>(std::string_view)>;

  /// Throws SyntaxError (Errc::SyntaxError / Errc::UnknownFunction) with the
  /// byte offset of the offending token.
  static Formula parse(std::string_view text);

  static Formula number(double value);
  static Formula identifier(std::string name);
  static Formula negate(Formula operand);
  static Formula binary(BinaryOp op, Formula lhs, Formula rhs);
  static Formula call(Function function, std::vector<Formula> args);

  /// Canonical text with minimal parentheses; `parse(f.to_string()) == f`.
  std::string to_string() const;

  /// Throws UnresolvedIdentifier, DivisionByZero, or NonFiniteResult.
  double evaluate(const Lookup& lookup) const;

  /// Distinct free identifiers in order of first appearance.
  std::vector<std::string> identifiers() const;

  /// Replaces identifiers that `lookup` resolves with their numeric value.
  Formula substitute(const Lookup& lookup) const;

  const Node& root() const noexcept { return *root_; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

std::string_view to_string(Formula::Function f) noexcept;
std::optional<Formula::Function> function_from_name(std::string_view name) noexcept;

/// Shortest decimal text that parses back to exactly `value`.
std::string format_shortest(double value);

}  // namespace netforge
