#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "netforge/formula.hpp"
#include "netforge/ordered_map.hpp"
#include "netforge/random.hpp"

namespace netforge {

/// One parameter value: a finite number, verbatim text, a formula over sibling
/// parameters, or a distribution sampled at evaluation time.
class ParamValue {
 public:
  using Variant = std::variant<double, std::string, Formula, RandomSpec>;

  ParamValue() : value_(0.0) {}
  ParamValue(double number);  // NOLINT(google-explicit-constructor)
  ParamValue(int number) : ParamValue(static_cast<double>(number)) {}  // NOLINT
  ParamValue(std::string text) : value_(std::move(text)) {}             // NOLINT
  ParamValue(const char* text) : value_(std::string(text)) {}          // NOLINT
  ParamValue(Formula formula) : value_(std::move(formula)) {}          // NOLINT
  ParamValue(RandomSpec spec);                                          // NOLINT

  bool is_number() const noexcept { return std::holds_alternative<double>(value_); }
  bool is_text() const noexcept { return std::holds_alternative<std::string>(value_); }
  bool is_formula() const noexcept { return std::holds_alternative<Formula>(value_); }
  bool is_random() const noexcept { return std::holds_alternative<RandomSpec>(value_); }

  double number() const { return std::get<double>(value_); }
  const std::string& text() const { return std::get<std::string>(value_); }
  const Formula& formula() const { return std::get<Formula>(value_); }
  const RandomSpec& random() const { return std::get<RandomSpec>(value_); }

  const Variant& variant() const noexcept { return value_; }

  friend bool operator==(const ParamValue&, const ParamValue&) = default;

 private:
  Variant value_;
};

using Params = OrderedMap<ParamValue>;
using ParamSet = OrderedMap<Params>;

using EvaluatedValue = std::variant<double, std::string>;
using EvaluatedParams = OrderedMap<EvaluatedValue>;
using EvalContext = OrderedMap<double>;

/// `base` shadowed by `overrides`; keys new to `overrides` are appended.
Params merge_params(const Params& base, const Params& overrides);

/// Resolves every parameter to a number or text.
///
/// Formulas are evaluated after their dependencies; ties in the dependency
/// order are broken by name, and random specs are drawn from `rng` in that
/// same order, so the result does not depend on insertion order. Sibling
/// parameters shadow `context` names. Output keeps the insertion order of
/// `params`.
///
/// Throws CycleError, or Error with UnresolvedIdentifier, NonNumericReference,
/// DivisionByZero, NonFiniteResult, InvalidSpec.
EvaluatedParams eval_params(const Params& params, const EvalContext& context, Rng& rng);
inline EvaluatedParams eval_params(const Params& params, Rng& rng) { return eval_params(params, {}, rng); }

/// Looks up a process corner; throws UnknownCornerError listing what exists.
const Params& corner(const ParamSet& set, std::string_view name);

/// Parses a SPICE-style number such as `1p`, `4.7k`, `2meg`, `-3e-2`. Suffixes
/// are case-insensitive (f p n u m k meg g t). Returns nullopt if any
/// character is left over or the value is not finite.
std::optional<double> parse_si_number(std::string_view text);

}  // namespace netforge
