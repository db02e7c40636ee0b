#include "netforge/build_doc.hpp"

#include <cmath>
#include <filesystem>
#include <functional>

#include "json_codec.hpp"
#include "netforge/error.hpp"
#include "netforge/manip.hpp"
#include "netforge/readers.hpp"

namespace netforge {

namespace {

using detail::json;

// Keeps inject() draws independent from the parameter stream that uses the
// same seed at export time.
constexpr std::uint64_t kBuildStream = 0x6a09e667f3bcc908ULL;

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  throw SchemaError(Errc::SchemaError, path, message);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + detail::pointer_escape(key); }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& required_field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  const json* v = optional_field(obj, key);
  if (!v) schema(path, std::string("missing field '") + key + "'");
  return *v;
}

std::string as_text(const json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a non-negative integer");
  const double v = j.get<double>();
  if (!(v >= 0) || std::floor(v) != v || v > 1e9) schema(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

long long as_integer(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    schema(path, "expected an integer");
  }
  if (!j.is_number()) schema(path, "expected an integer");
  const double v = j.get<double>();
  if (std::floor(v) != v || std::fabs(v) > 1e15) schema(path, "expected an integer");
  return static_cast<long long>(v);
}

// ---------------------------------------------------------------------------
// ${variable} substitution and {"$each": ...} expansion

class Expander {
 public:
  explicit Expander(const std::map<std::string, double>& vars) : vars_(vars) {}

  json expand(const json& j, const std::string& path) const {
    if (j.is_string()) return expand_string(j.get<std::string>(), path);
    if (j.is_object()) {
      json out = json::object();
      for (const auto& [k, v] : j.items()) out[k] = expand(v, child(path, k));
      return out;
    }
    if (j.is_array()) {
      json out = json::array();
      for (std::size_t i = 0; i < j.size(); ++i) {
        json item = expand(j[i], child(path, i));
        if (item.is_object() && item.contains("$each")) {
          for (auto& e : each(item, child(path, i))) out.push_back(std::move(e));
        } else {
          out.push_back(std::move(item));
        }
      }
      return out;
    }
    return j;
  }

 private:
  json expand_string(const std::string& s, const std::string& path) const {
    if (s.find("${") == std::string::npos) return s;
    std::string out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const std::size_t open = s.find("${", pos);
      if (open == std::string::npos) {
        out += s.substr(pos);
        break;
      }
      const std::size_t close = s.find('}', open);
      if (close == std::string::npos) schema(path, "unterminated '${' in \"" + s + "\"");
      const std::string name = s.substr(open + 2, close - open - 2);
      auto it = vars_.find(name);
      if (it == vars_.end()) schema(path, "unknown variable '" + name + "'");
      // A string that is exactly one reference becomes a number.
      if (open == 0 && close == s.size() - 1) return it->second;
      out += s.substr(pos, open - pos);
      out += format_shortest(it->second);
      pos = close + 1;
    }
    return out;
  }

  static std::vector<json> each(const json& item, const std::string& path) {
    const std::string pattern = as_text(item["$each"], child(path, "$each"));
    const std::size_t count = as_count(required_field(item, "count", path), child(path, "count"));
    const std::string var = item.contains("var") ? as_text(item["var"], child(path, "var")) : "i";
    const std::string token = "{" + var + "}";
    std::vector<json> out;
    for (std::size_t k = 0; k < count; ++k) {
      std::string s = pattern;
      for (std::size_t p = s.find(token); p != std::string::npos; p = s.find(token, p)) {
        s.replace(p, token.size(), std::to_string(k));
      }
      out.emplace_back(s);
    }
    return out;
  }

  const std::map<std::string, double>& vars_;
};

std::string replace_coords(std::string s, const ArrayCoord& c, bool two_d) {
  auto sub = [&](const std::string& token, std::size_t value) {
    for (std::size_t p = s.find(token); p != std::string::npos; p = s.find(token, p)) {
      s.replace(p, token.size(), std::to_string(value));
    }
  };
  if (two_d) {
    sub("{x}", c.x);
    sub("{y}", c.y);
  } else {
    sub("{i}", c.x);
  }
  return s;
}

// ---------------------------------------------------------------------------

using Labels = std::map<std::string, std::vector<Instance>>;

struct Target {
  std::function<std::vector<Instance>(std::span<const Instance>)> add;
  std::function<void(Model)> add_model;  // empty inside subcircuit bodies
};

class DocBuilder {
 public:
  explicit DocBuilder(const BuildOptions& options) : options_(options) {}

  BuildResult build(const json& raw) {
    if (!raw.is_object()) schema("", "build document must be an object");
    const json& version = required_field(raw, "version", "");
    if (!version.is_number_integer() || version.get<long long>() != kBuildDocVersion) {
      schema("/version", "unsupported build document version " + version.dump());
    }

    if (const json* vars = optional_field(raw, "variables")) {
      if (!vars->is_object()) schema("/variables", "expected an object");
      for (const auto& [k, v] : vars->items()) {
        if (!v.is_number()) schema(child("/variables", k), "variables must be numbers");
        vars_[k] = v.get<double>();
      }
    }
    for (const auto& [k, v] : options_.variables) vars_[k] = v;

    json doc = json::object();
    Expander expander(vars_);
    for (const auto& [k, v] : raw.items()) doc[k] = k == "variables" ? v : expander.expand(v, "/" + k);

    BuildResult result;
    if (options_.seed) {
      result.seed = *options_.seed;
    } else if (const json* s = optional_field(doc, "seed")) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
        schema("/seed", "expected a non-negative integer");
      }
      result.seed = s->get<std::uint64_t>();
    } else {
      result.seed = options_.default_seed;
    }
    result.seed += options_.seed_offset;
    rng_.reseed(result.seed ^ kBuildStream);

    corner_ = options_.corner.value_or("TT");
    if (!options_.corner) {
      if (const json* c = optional_field(doc, "corner")) corner_ = as_text(*c, "/corner");
    }
    result.corner = corner_;
    if (const json* t = optional_field(doc, "title")) result.title = as_text(*t, "/title");

    Circuit& circuit = result.circuit;
    circuit.set_seed(result.seed);

    if (const json* files = optional_field(doc, "params_files")) read_param_files(*files);
    if (const json* models = optional_field(doc, "models")) read_models(*models, circuit);
    if (const json* comps = optional_field(doc, "components")) read_components(*comps);
    if (const json* subs = optional_field(doc, "subcircuits")) read_subcircuits(*subs);
    if (const json* globals = optional_field(doc, "globals")) {
      if (!globals->is_array()) schema("/globals", "expected an array");
      std::set<std::string> g;
      for (std::size_t i = 0; i < globals->size(); ++i) g.insert(as_text((*globals)[i], child("/globals", i)));
      circuit.set_globals(std::move(g));
    }

    Target top{[&](std::span<const Instance> xs) { return circuit.add(xs); },
               [&](Model m) { circuit.add(std::move(m)); }};
    if (const json* ops = optional_field(doc, "circuit")) run_list(*ops, "/circuit", top);

    if (const json* dirs = optional_field(doc, "directives")) {
      if (!dirs->is_array()) schema("/directives", "expected an array");
      for (std::size_t i = 0; i < dirs->size(); ++i) circuit.add_directive(as_text((*dirs)[i], child("/directives", i)));
    }
    return result;
  }

 private:
  std::string resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    if (path.is_absolute()) return path.string();
    return (std::filesystem::path(options_.base_dir) / path).string();
  }

  void read_param_files(const json& files) {
    if (!files.is_array()) schema("/params_files", "expected an array of paths");
    for (std::size_t i = 0; i < files.size(); ++i) {
      const ParamFile pf = read_param_file_path(resolve_path(as_text(files[i], child("/params_files", i))));
      for (const auto& [device, set] : pf) params_.set(device, set);
    }
  }

  Model model_from_json(const json& j, const std::string& path) {
    Params params;
    if (const json* p = optional_field(j, "params")) params = detail::params_from_json(*p, child(path, "params"));
    return Model(as_text(required_field(j, "name", path), child(path, "name")),
                 as_text(required_field(j, "type", path), child(path, "type")), std::move(params));
  }

  void read_models(const json& models, Circuit& circuit) {
    if (!models.is_array()) schema("/models", "expected an array");
    for (std::size_t i = 0; i < models.size(); ++i) {
      const std::string path = child("/models", i);
      const json& m = models[i];
      if (!m.is_object()) schema(path, "expected an object");
      if (const json* file = optional_field(m, "file")) {
        for (auto& model : parse_spice_models(read_text_file(resolve_path(as_text(*file, child(path, "file")))))) {
          circuit.add(std::move(model));
        }
      } else {
        circuit.add(model_from_json(m, path));
      }
    }
  }

  void check_new_template(const std::string& name, const std::string& path) const {
    if (components_.count(name) || subckts_.count(name)) schema(path, "template '" + name + "' is already declared");
  }

  void read_components(const json& comps) {
    if (!comps.is_object()) schema("/components", "expected an object keyed by template name");
    for (const auto& [key, spec] : comps.items()) {
      const std::string path = child("/components", key);
      check_new_template(key, path);
      if (!spec.is_object()) schema(path, "expected an object");

      Params inline_params;
      if (const json* p = optional_field(spec, "params")) inline_params = detail::params_from_json(*p, child(path, "params"));
      std::optional<std::string> prefix;
      if (const json* p = optional_field(spec, "prefix")) prefix = as_text(*p, child(path, "prefix"));
      std::string name = key;
      if (const json* n = optional_field(spec, "name")) name = as_text(*n, child(path, "name"));

      if (const json* va = optional_field(spec, "veriloga")) {
        const Component parsed = parse_veriloga(read_text_file(resolve_path(as_text(*va, child(path, "veriloga")))));
        components_[key] = make_component(optional_field(spec, "name") ? name : parsed.name(), parsed.ports(),
                                          merge_params(parsed.params(), inline_params),
                                          prefix.value_or(parsed.prefix()), parsed.metadata());
        continue;
      }

      const json& ports_json = required_field(spec, "ports", path);
      if (!ports_json.is_array()) schema(child(path, "ports"), "expected an array");
      std::vector<NetRef> ports;
      for (std::size_t i = 0; i < ports_json.size(); ++i) ports.push_back(plain_net(ports_json[i], child(child(path, "ports"), i)));

      Params params;
      if (const json* device = optional_field(spec, "device")) {
        const std::string dev = as_text(*device, child(path, "device"));
        const ParamSet* set = params_.get(dev);
        if (!set) schema(child(path, "device"), "no device '" + dev + "' in the parameter files");
        params = corner(*set, corner_);
      }
      params = merge_params(params, inline_params);

      Metadata meta;
      if (const json* m = optional_field(spec, "metadata")) {
        if (!m->is_object()) schema(child(path, "metadata"), "expected an object");
        for (const auto& [k, v] : m->items()) meta.set(k, as_text(v, child(child(path, "metadata"), k)));
      }
      components_[key] = make_component(name, std::move(ports), std::move(params), prefix, std::move(meta));
    }
  }

  void read_subcircuits(const json& subs) {
    if (!subs.is_object()) schema("/subcircuits", "expected an object keyed by subcircuit name");
    for (const auto& [key, spec] : subs.items()) {
      const std::string path = child("/subcircuits", key);
      check_new_template(key, path);
      Subcircuit sub(key, pin_list(required_field(spec, "pins", path), child(path, "pins")), optional_params(spec, path));
      Target target{[&](std::span<const Instance> xs) { return sub.add(xs); }, {}};
      if (const json* body = optional_field(spec, "body")) run_list(*body, child(path, "body"), target);
      if (const json* fixed = optional_field(spec, "fixed"); fixed && fixed->is_boolean() && fixed->get<bool>()) sub.fix();
      subckts_[key] = std::make_shared<const Subcircuit>(std::move(sub));
    }
  }

  Params optional_params(const json& spec, const std::string& path) {
    if (const json* p = optional_field(spec, "params")) return detail::params_from_json(*p, child(path, "params"));
    return {};
  }

  static std::vector<std::string> pin_list(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array of pin names");
    std::vector<std::string> pins;
    for (std::size_t i = 0; i < j.size(); ++i) pins.push_back(as_text(j[i], child(path, i)));
    return pins;
  }

  static NetRef plain_net(const json& j, const std::string& path) {
    if (j.is_string()) return NetRef(j.get<std::string>());
    if (j.is_number()) return NetRef(static_cast<std::uint64_t>(as_count(j, path)));
    schema(path, "expected a net name or number");
  }

  NetRef net_spec(const json& j, const std::string& path, const Labels& labels) const {
    if (!j.is_object()) return plain_net(j, path);
    const std::string label = as_text(required_field(j, "tap", path), child(path, "tap"));
    auto it = labels.find(label);
    if (it == labels.end()) schema(child(path, "tap"), "no earlier operation labelled '" + label + "'");
    const auto& insts = it->second;
    long long index = as_integer(required_field(j, "index", path), child(path, "index"));
    if (index < 0) index += static_cast<long long>(insts.size());
    if (index < 0 || index >= static_cast<long long>(insts.size())) schema(child(path, "index"), "tap index out of range");
    const Instance& inst = insts[static_cast<std::size_t>(index)];
    long long port = optional_field(j, "port") ? as_integer(j["port"], child(path, "port")) : -1;
    if (port < 0) port += static_cast<long long>(inst.arity());
    if (port < 0 || port >= static_cast<long long>(inst.arity())) schema(child(path, "port"), "tap port out of range");
    return inst.nets()[static_cast<std::size_t>(port)];
  }

  std::vector<NetRef> net_list(const json& j, const std::string& path, const Labels& labels) const {
    if (!j.is_array()) schema(path, "expected an array of nets");
    std::vector<NetRef> nets;
    for (std::size_t i = 0; i < j.size(); ++i) nets.push_back(net_spec(j[i], child(path, i), labels));
    return nets;
  }

  Instance template_of(const json& of, const std::string& path, const Labels& labels) {
    if (of.is_string()) {
      const std::string name = of.get<std::string>();
      if (auto it = components_.find(name); it != components_.end()) return Instance(it->second);
      if (auto it = subckts_.find(name); it != subckts_.end()) return Instance(it->second);
      schema(path, "unknown template '" + name + "'");
    }
    if (of.is_object() && of.value("op", "") == "instance") return instance_op(of, path, labels);
    schema(path, "expected a template name or an instance operation");
  }

  Instance instance_op(const json& op, const std::string& path, const Labels& labels) {
    Instance inst = template_of(required_field(op, "of", path), child(path, "of"), labels);
    if (const json* nets = optional_field(op, "nets")) inst = rebind(inst, net_list(*nets, child(path, "nets"), labels));
    if (const json* net = optional_field(op, "net")) inst = rebind(inst, net_spec(*net, child(path, "net"), labels));
    if (const json* p = optional_field(op, "params")) inst = override_params(inst, detail::params_from_json(*p, child(path, "params")));
    return inst;
  }

  ChainOptions chain_options(const json& op, const std::string& path) {
    ChainOptions o;
    if (const json* p = optional_field(op, "in_port")) o.in_port = as_count(*p, child(path, "in_port"));
    if (const json* p = optional_field(op, "out_port")) o.out_port = as_count(*p, child(path, "out_port"));
    if (const json* p = optional_field(op, "net_prefix")) o.net_prefix = as_text(*p, child(path, "net_prefix"));
    return o;
  }

  Manipulation array_op(const json& op, const std::string& path, const Labels& labels) {
    const Instance base = template_of(required_field(op, "of", path), child(path, "of"), labels);
    const json& shape_json = required_field(op, "shape", path);
    if (!shape_json.is_array() || shape_json.empty() || shape_json.size() > 2) {
      schema(child(path, "shape"), "expected [length] or [rows, cols]");
    }
    const ArrayShape shape = shape_json.size() == 1
                                 ? ArrayShape::line(as_count(shape_json[0], child(child(path, "shape"), 0)))
                                 : ArrayShape::grid(as_count(shape_json[0], child(child(path, "shape"), 0)),
                                                    as_count(shape_json[1], child(child(path, "shape"), 1)));
    const json nets = op.contains("nets") ? op["nets"] : json::array();
    if (!nets.is_array()) schema(child(path, "nets"), "expected an array");
    auto port_fn = [&](const ArrayCoord& c) {
      std::vector<NetRef> out;
      for (std::size_t i = 0; i < nets.size(); ++i) {
        json spec = nets[i];
        if (spec.is_string()) {
          spec = replace_coords(spec.get<std::string>(), c, shape.two_d);
        } else if (spec.is_object() && spec.contains("index") && spec["index"].is_string()) {
          spec["index"] = replace_coords(spec["index"].get<std::string>(), c, shape.two_d);
        }
        out.push_back(net_spec(spec, child(child(path, "nets"), i), labels));
      }
      return out;
    };
    return array(shape, base, port_fn);
  }

  Manipulation eval_op(const json& op, const std::string& path, const Labels& labels) {
    if (!op.is_object()) schema(path, "expected an operation object");
    const std::string kind = as_text(required_field(op, "op", path), child(path, "op"));
    if (kind == "instance") return Manipulation({instance_op(op, path, labels)});
    if (kind == "parallel") {
      return parallel(template_of(required_field(op, "of", path), child(path, "of"), labels),
                      as_count(required_field(op, "n", path), child(path, "n")));
    }
    if (kind == "chain") {
      return chain(template_of(required_field(op, "of", path), child(path, "of"), labels),
                   as_count(required_field(op, "n", path), child(path, "n")), chain_options(op, path));
    }
    if (kind == "named_chain") {
      return named_chain(template_of(required_field(op, "of", path), child(path, "of"), labels),
                         as_count(required_field(op, "n", path), child(path, "n")),
                         as_text(required_field(op, "out_name", path), child(path, "out_name")), chain_options(op, path));
    }
    if (kind == "array") return array_op(op, path, labels);
    if (kind == "inject") {
      const Manipulation children = eval_op(required_field(op, "children", path), child(path, "children"), labels);
      const json& p = required_field(op, "p", path);
      if (!p.is_number()) schema(child(path, "p"), "expected a probability");
      std::optional<Instance> defect;
      if (const json* d = optional_field(op, "defect")) defect = template_of(*d, child(path, "defect"), labels);
      return inject(children, p.get<double>(), rng_, defect);
    }
    if (kind == "concat") {
      const json& items = required_field(op, "items", path);
      if (!items.is_array()) schema(child(path, "items"), "expected an array of operations");
      std::vector<Manipulation> parts;
      for (std::size_t i = 0; i < items.size(); ++i) parts.push_back(eval_op(items[i], child(child(path, "items"), i), labels));
      return concat(parts);
    }
    if (kind == "add_model" || kind == "into_subckt") schema(path, "'" + kind + "' cannot be nested inside another operation");
    schema(child(path, "op"), "unknown operation '" + kind + "'");
  }

  void into_subckt_op(const json& op, const std::string& path) {
    const std::string name = as_text(required_field(op, "name", path), child(path, "name"));
    check_new_template(name, child(path, "name"));
    Circuit body;
    Target target{[&](std::span<const Instance> xs) { return body.add(xs); }, {}};
    if (const json* ops = optional_field(op, "body")) run_list(*ops, child(path, "body"), target);
    Subcircuit sub = body.into_subckt(name, pin_list(required_field(op, "pins", path), child(path, "pins")),
                                      optional_params(op, path));
    if (const json* fixed = optional_field(op, "fixed"); fixed && fixed->is_boolean() && fixed->get<bool>()) sub.fix();
    subckts_[name] = std::make_shared<const Subcircuit>(std::move(sub));
  }

  void run_list(const json& ops, const std::string& path, Target& target) {
    if (!ops.is_array()) schema(path, "expected an array of operations");
    Labels labels;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const json& op = ops[i];
      const std::string opath = child(path, i);
      if (!op.is_object()) schema(opath, "expected an operation object");
      const std::string kind = as_text(required_field(op, "op", opath), child(opath, "op"));
      if (kind == "add_model") {
        if (!target.add_model) schema(opath, "add_model is only allowed in the top-level circuit");
        target.add_model(model_from_json(op, opath));
        continue;
      }
      if (kind == "into_subckt") {
        into_subckt_op(op, opath);
        continue;
      }
      auto added = target.add(eval_op(op, opath, labels));
      if (const json* label = optional_field(op, "label")) labels[as_text(*label, child(opath, "label"))] = std::move(added);
    }
  }

  const BuildOptions& options_;
  std::map<std::string, double> vars_;
  ParamFile params_;
  std::string corner_;
  std::map<std::string, ComponentRef> components_;
  std::map<std::string, SubcircuitRef> subckts_;
  Rng rng_;
};

}  // namespace

BuildResult build_document(std::string_view json_text, const BuildOptions& options) {
  return DocBuilder(options).build(detail::parse_json(json_text));
}

}  // namespace netforge
