#include "netforge/params.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "netforge/error.hpp"

namespace netforge {

ParamValue::ParamValue(double number) : value_(number) {
  if (!std::isfinite(number)) throw Error(Errc::InvalidNumber, "parameter values must be finite");
}

ParamValue::ParamValue(RandomSpec spec) : value_(spec) { spec.validate(); }

Params merge_params(const Params& base, const Params& overrides) {
  Params out = base;
  for (const auto& [name, value] : overrides) out.set(name, value);
  return out;
}

namespace {

std::vector<std::string> dependencies(const ParamValue& value, const Params& params) {
  std::vector<std::string> deps;
  if (!value.is_formula()) return deps;
  for (auto& id : value.formula().identifiers()) {
    if (params.contains(id)) deps.push_back(std::move(id));
  }
  return deps;
}

std::vector<std::string> find_cycle(const std::map<std::string, std::vector<std::string>>& deps,
                                    const std::set<std::string>& remaining) {
  // Every remaining node sits on or leads to a cycle; walk until a repeat.
  std::vector<std::string> path;
  std::string node = *remaining.begin();
  while (std::find(path.begin(), path.end(), node) == path.end()) {
    path.push_back(node);
    const auto& next = deps.at(node);
    auto it = std::find_if(next.begin(), next.end(), [&](const auto& d) { return remaining.count(d) != 0; });
    node = *it;
  }
  std::vector<std::string> cycle(std::find(path.begin(), path.end(), node), path.end());
  cycle.push_back(node);
  return cycle;
}

}  // namespace

EvaluatedParams eval_params(const Params& params, const EvalContext& context, Rng& rng) {
  std::map<std::string, std::vector<std::string>> deps;
  std::map<std::string, std::vector<std::string>> dependents;
  std::map<std::string, std::size_t> pending;
  for (const auto& [name, value] : params) {
    auto d = dependencies(value, params);
    std::sort(d.begin(), d.end());
    pending[name] = d.size();
    for (const auto& dep : d) dependents[dep].push_back(name);
    deps[name] = std::move(d);
  }

  std::set<std::string> ready;
  for (const auto& [name, count] : pending) {
    if (count == 0) ready.insert(name);
  }

  std::map<std::string, EvaluatedValue> resolved;
  auto lookup = [&](std::string_view id) -> std::optional<double> {
    if (params.contains(id)) {
      const auto& v = resolved.at(std::string(id));
      if (const double* d = std::get_if<double>(&v)) return *d;
      throw Error(Errc::NonNumericReference, "'" + std::string(id) + "' is text and cannot be used in a formula");
    }
    if (const double* c = context.get(id)) return *c;
    return std::nullopt;
  };

  while (!ready.empty()) {
    const std::string name = *ready.begin();
    ready.erase(ready.begin());
    const ParamValue& value = *params.get(name);
    EvaluatedValue out;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out = v;
          } else if constexpr (std::is_same_v<T, std::string>) {
            out = v;
          } else if constexpr (std::is_same_v<T, RandomSpec>) {
            const double s = sample(v, rng);
            if (!std::isfinite(s)) throw Error(Errc::NonFiniteResult, "sample for '" + name + "' is not finite");
            out = s;
          } else if constexpr (std::is_same_v<T, Formula>) {
            try {
              out = v.evaluate(lookup);
            } catch (const Error& e) {
              throw Error(e.code(), "in parameter '" + name + "': " + e.what());
            }
          }
        },
        value.variant());
    resolved.emplace(name, std::move(out));
    for (const auto& dependent : dependents[name]) {
      if (--pending[dependent] == 0) ready.insert(dependent);
    }
  }

  if (resolved.size() != params.size()) {
    std::set<std::string> remaining;
    for (const auto& [name, value] : params) {
      if (!resolved.count(name)) remaining.insert(name);
    }
    throw CycleError(find_cycle(deps, remaining));
  }

  EvaluatedParams out;
  for (const auto& [name, value] : params) out.set(name, resolved.at(name));
  return out;
}

const Params& corner(const ParamSet& set, std::string_view name) {
  if (const Params* p = set.get(name)) return *p;
  throw UnknownCornerError(std::string(name), set.keys());
}

std::optional<double> parse_si_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string body(text);
  if (body.front() == '+') body.erase(0, 1);

  double value = 0.0;
  const char* first = body.data();
  const char* last = body.data() + body.size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc() || ptr == first) return std::nullopt;

  std::string suffix(ptr, last);
  std::transform(suffix.begin(), suffix.end(), suffix.begin(), [](unsigned char c) { return std::tolower(c); });
  if (!suffix.empty()) {
    static const std::pair<const char*, int> kSuffixes[] = {
        {"meg", 6}, {"f", -15}, {"p", -12}, {"n", -9}, {"u", -6}, {"m", -3}, {"k", 3}, {"g", 9}, {"t", 12},
    };
    const std::string mantissa(first, ptr);
    if (mantissa.find_first_of("eE") != std::string::npos) return std::nullopt;
    auto it = std::find_if(std::begin(kSuffixes), std::end(kSuffixes), [&](const auto& s) { return suffix == s.first; });
    if (it == std::end(kSuffixes)) return std::nullopt;
    // Re-parse with a decimal exponent so the result is correctly rounded.
    const std::string scaled = mantissa + "e" + std::to_string(it->second);
    auto r = std::from_chars(scaled.data(), scaled.data() + scaled.size(), value);
    if (r.ec != std::errc() || r.ptr != scaled.data() + scaled.size()) return std::nullopt;
  }
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace netforge
