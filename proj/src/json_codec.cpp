#include "json_codec.hpp"

#include <algorithm>
#include <cmath>

#include "netforge/error.hpp"

namespace netforge::detail {

std::string pointer_escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

namespace {

double finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(Errc::SchemaError, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(Errc::SchemaError, path, "number is not finite");
  return v;
}

RandomSpec random_from_json(Distribution d, const json& args, const std::string& path) {
  if (!args.is_array() || args.size() != 2) {
    throw SchemaError(Errc::SchemaError, path, "expected a two-element array");
  }
  RandomSpec spec{d, finite_number(args[0], path + "/0"), finite_number(args[1], path + "/1")};
  try {
    spec.validate();
  } catch (const Error& e) {
    throw SchemaError(Errc::InvalidSpec, path, e.what());
  }
  return spec;
}

}  // namespace

ParamValue param_value_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return ParamValue(finite_number(j, path));
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (auto v = parse_si_number(s)) return ParamValue(*v);
    return ParamValue(s);
  }
  if (!j.is_object() || j.size() != 1) {
    throw SchemaError(Errc::SchemaError, path, "expected a number, a string, or a single-key directive object");
  }
  const auto first = j.begin();
  const std::string& key = first.key();
  const json& arg = first.value();
  const std::string sub = path + "/" + pointer_escape(key);
  if (key == "$formula") {
    if (!arg.is_string()) throw SchemaError(Errc::SchemaError, sub, "formula must be a string");
    try {
      return ParamValue(Formula::parse(arg.get<std::string>()));
    } catch (const Error& e) {
      throw SchemaError(e.code(), sub, e.what());
    }
  }
  if (key == "$gauss") return ParamValue(random_from_json(Distribution::Gauss, arg, sub));
  if (key == "$uniform") return ParamValue(random_from_json(Distribution::Uniform, arg, sub));
  if (key == "$lognormal") return ParamValue(random_from_json(Distribution::Lognormal, arg, sub));
  if (key == "$text") {
    if (!arg.is_string()) throw SchemaError(Errc::SchemaError, sub, "text must be a string");
    return ParamValue(arg.get<std::string>());
  }
  if (!key.empty() && key[0] == '$') throw SchemaError(Errc::UnknownDirective, sub, "unknown directive '" + key + "'");
  throw SchemaError(Errc::SchemaError, path, "expected a number, a string, or a directive object");
}

json param_value_to_json(const ParamValue& value) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::string>) {
          // Numeric-looking text would read back as a number.
          if (parse_si_number(v)) return json{{"$text", v}};
          return v;
        } else if constexpr (std::is_same_v<T, Formula>) {
          return json{{"$formula", v.to_string()}};
        } else {
          const std::string key = "$" + std::string(to_string(v.distribution));
          return json{{key, json::array({v.a, v.b})}};
        }
      },
      value.variant());
}

Params params_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(Errc::SchemaError, path, "expected an object of parameters");
  Params out;
  for (const auto& [name, value] : j.items()) {
    out.set(name, param_value_from_json(value, path + "/" + pointer_escape(name)));
  }
  return out;
}

json params_to_json(const Params& params) {
  json out = json::object();
  for (const auto& [name, value] : params) out[name] = param_value_to_json(value);
  return out;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
    throw ParseError(line, e.what());
  }
}

}  // namespace netforge::detail
