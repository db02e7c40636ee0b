#include <limits>

#include "json_codec.hpp"
#include "netforge/error.hpp"
#include "netforge/exporters.hpp"

namespace netforge {

using detail::json;

namespace {

// ---------------------------------------------------------------------------
// Writing

json net_to_json(const NetRef& net) {
  switch (net.kind()) {
    case NetRef::Kind::Unconnected: return "";
    case NetRef::Kind::Named: return net.name();
    case NetRef::Kind::Numbered: return net.number();
    case NetRef::Kind::Generated: break;
  }
  throw Error(Errc::InvalidNetName, "generated net " + net.str() + " was never added to a container");
}

json nets_to_json(const std::vector<NetRef>& nets) {
  json out = json::array();
  for (const auto& n : nets) out.push_back(net_to_json(n));
  return out;
}

json metadata_to_json(const Metadata& meta) {
  json out = json::object();
  for (const auto& [k, v] : meta) out[k] = v;
  return out;
}

json context_to_json(const EvalContext& ctx) {
  json out = json::object();
  for (const auto& [k, v] : ctx) out[k] = v;
  return out;
}

json counters_to_json(const std::map<std::string, std::uint64_t>& counters) {
  json out = json::object();
  for (const auto& [k, v] : counters) out[k] = v;
  return out;
}

class Writer {
 public:
  json circuit(const Circuit& c) {
    json out;
    out["version"] = kJsonIrVersion;
    out["instances"] = instances(c.instances());
    out["seed"] = c.seed();
    json globals = json::array();
    for (const auto& g : c.globals()) globals.push_back(g);
    out["globals"] = globals;
    json directives = json::array();
    for (const auto& d : c.directives()) directives.push_back(d);
    out["directives"] = directives;
    json models = json::array();
    for (const auto& [name, m] : c.models()) {
      models.push_back({{"name", m.name}, {"type", m.base_type}, {"params", detail::params_to_json(m.params)}});
    }
    out["models"] = models;
    out["subcircuits"] = subcircuits(c.subcircuits());
    out["counters"] = counters_to_json(c.scope().counters());
    out["chain_counter"] = c.scope().chain_counter();
    // Filled last: the tables above register every component they use.
    out["components"] = components_;
    return out;
  }

 private:
  json instances(const std::vector<Instance>& list) {
    json out = json::array();
    for (const auto& inst : list) {
      json j;
      j["designator"] = inst.designator();
      if (inst.is_subcircuit()) {
        j["subcircuit"] = inst.master();
      } else {
        j["component"] = component_index(std::get<ComponentRef>(inst.templ()));
      }
      j["nets"] = nets_to_json(inst.nets());
      j["params"] = detail::params_to_json(inst.overrides());
      j["context"] = context_to_json(inst.context());
      out.push_back(std::move(j));
    }
    return out;
  }

  json subcircuits(const OrderedMap<SubcircuitRef>& defs) {
    json out = json::array();
    for (const auto& [name, def] : defs) {
      json j;
      j["name"] = def->name();
      j["pins"] = def->pins();
      j["params"] = detail::params_to_json(def->params());
      j["fixed"] = def->fixed();
      j["subcircuits"] = subcircuits(def->nested());
      j["body"] = instances(def->body());
      j["counters"] = counters_to_json(def->scope().counters());
      j["chain_counter"] = def->scope().chain_counter();
      out.push_back(std::move(j));
    }
    return out;
  }

  std::size_t component_index(const ComponentRef& c) {
    for (std::size_t i = 0; i < seen_.size(); ++i) {
      if (seen_[i] == c || *seen_[i] == *c) return i;
    }
    seen_.push_back(c);
    components_.push_back({{"name", c->name()},
                           {"ports", nets_to_json(c->ports())},
                           {"params", detail::params_to_json(c->params())},
                           {"prefix", c->prefix()},
                           {"metadata", metadata_to_json(c->metadata())}});
    return seen_.size() - 1;
  }

  std::vector<ComponentRef> seen_;
  json components_ = json::array();
};

// ---------------------------------------------------------------------------
// Reading

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(Errc::SchemaError, path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(Errc::SchemaError, path, std::string("missing field '") + key + "'");
  return *it;
}

std::string text_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError(Errc::SchemaError, path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::uint64_t uint_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError(Errc::SchemaError, path + "/" + key, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

const json& array_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(Errc::SchemaError, path + "/" + key, "expected an array");
  return v;
}

const json& object_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_object()) throw SchemaError(Errc::SchemaError, path + "/" + key, "expected an object");
  return v;
}

template <typename F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(e.code(), path, e.what());
  }
}

NetRef net_from_json(const json& j, const std::string& path) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    return NetRef(j.get<std::uint64_t>());
  }
  if (j.is_string()) return wrap(path, [&] { return NetRef(j.get<std::string>()); });
  throw SchemaError(Errc::SchemaError, path, "net must be a string or a non-negative integer");
}

std::vector<NetRef> nets_from_json(const json& arr, const std::string& path) {
  std::vector<NetRef> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(net_from_json(arr[i], path + "/" + std::to_string(i)));
  return out;
}

std::map<std::string, std::uint64_t> counters_from_json(const json& obj, const std::string& path) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [k, v] : obj.items()) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw SchemaError(Errc::SchemaError, path + "/" + k, "expected a non-negative integer");
    }
    out[k] = v.get<std::uint64_t>();
  }
  return out;
}

class Reader {
 public:
  Circuit circuit(const json& doc) {
    if (!doc.is_object()) throw SchemaError(Errc::SchemaError, "", "expected an object");
    const json& version = field(doc, "version", "");
    if (!version.is_number_integer()) throw SchemaError(Errc::SchemaError, "/version", "expected an integer");
    if (version.get<std::int64_t>() != kJsonIrVersion) {
      throw Error(Errc::VersionMismatch, "JSON IR version " + version.dump() + " is not supported (expected " +
                                             std::to_string(kJsonIrVersion) + ")");
    }
    read_components(array_field(doc, "components", ""));

    Circuit c;
    c.set_seed(uint_field(doc, "seed", ""));
    std::set<std::string> globals;
    const json& g = array_field(doc, "globals", "");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_string()) throw SchemaError(Errc::SchemaError, "/globals/" + std::to_string(i), "expected a string");
      globals.insert(g[i].get<std::string>());
    }
    c.set_globals(std::move(globals));
    const json& d = array_field(doc, "directives", "");
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d[i].is_string()) {
        throw SchemaError(Errc::SchemaError, "/directives/" + std::to_string(i), "expected a string");
      }
      c.add_directive(d[i].get<std::string>());
    }
    const json& models = array_field(doc, "models", "");
    for (std::size_t i = 0; i < models.size(); ++i) {
      const std::string path = "/models/" + std::to_string(i);
      Model m = wrap(path, [&] {
        return Model(text_field(models[i], "name", path), text_field(models[i], "type", path),
                     detail::params_from_json(field(models[i], "params", path), path + "/params"));
      });
      wrap(path, [&] { c.add(std::move(m)); });
    }

    Scope& scope = c.scope();
    read_scope(doc, "", scope, {});
    return c;
  }

 private:
  using Chain = std::vector<const Scope*>;

  void read_components(const json& arr) {
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/components/" + std::to_string(i);
      const json& j = arr[i];
      components_.push_back(wrap(path, [&] {
        Metadata meta;
        for (const auto& [k, v] : object_field(j, "metadata", path).items()) {
          if (!v.is_string()) throw SchemaError(Errc::SchemaError, path + "/metadata/" + k, "expected a string");
          meta.set(k, v.get<std::string>());
        }
        return make_component(text_field(j, "name", path),
                              nets_from_json(array_field(j, "ports", path), path + "/ports"),
                              detail::params_from_json(field(j, "params", path), path + "/params"),
                              text_field(j, "prefix", path), std::move(meta));
      }));
    }
  }

  // Definitions first, so body instances can point at them.
  void read_scope(const json& obj, const std::string& path, Scope& scope, Chain outer) {
    const json& subs = array_field(obj, "subcircuits", path);
    Chain chain = outer;
    chain.insert(chain.begin(), &scope);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const std::string sp = path + "/subcircuits/" + std::to_string(i);
      SubcircuitRef def = read_subcircuit(subs[i], sp, chain);
      wrap(sp, [&] { scope.define(std::move(def), false); });
    }
    const char* list_key = path.empty() ? "instances" : "body";
    const json& list = array_field(obj, list_key, path);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ip = path + "/" + list_key + "/" + std::to_string(i);
      Instance inst = read_instance(list[i], ip, chain);
      wrap(ip, [&] { scope.insert_verbatim(std::move(inst)); });
    }
    scope.set_counters(counters_from_json(object_field(obj, "counters", path), path + "/counters"));
    scope.set_chain_counter(uint_field(obj, "chain_counter", path));
  }

  SubcircuitRef read_subcircuit(const json& j, const std::string& path, const Chain& outer) {
    const json& pins_json = array_field(j, "pins", path);
    std::vector<std::string> pins;
    for (std::size_t i = 0; i < pins_json.size(); ++i) {
      if (!pins_json[i].is_string()) {
        throw SchemaError(Errc::SchemaError, path + "/pins/" + std::to_string(i), "expected a string");
      }
      pins.push_back(pins_json[i].get<std::string>());
    }
    Subcircuit sub = wrap(path, [&] {
      return Subcircuit(text_field(j, "name", path), std::move(pins),
                        detail::params_from_json(field(j, "params", path), path + "/params"));
    });
    read_scope(j, path, sub.scope(), outer);
    const json& fixed = field(j, "fixed", path);
    if (!fixed.is_boolean()) throw SchemaError(Errc::SchemaError, path + "/fixed", "expected a boolean");
    sub.set_fixed(fixed.get<bool>());
    return std::make_shared<const Subcircuit>(std::move(sub));
  }

  Instance read_instance(const json& j, const std::string& path, const Chain& chain) {
    std::optional<Instance> inst;
    if (j.is_object() && j.contains("subcircuit")) {
      const std::string name = text_field(j, "subcircuit", path);
      for (const Scope* s : chain) {
        if (const SubcircuitRef* def = s->subcircuits().get(name)) {
          inst.emplace(*def);
          break;
        }
      }
      if (!inst) throw SchemaError(Errc::SchemaError, path + "/subcircuit", "unknown subcircuit '" + name + "'");
    } else {
      const std::uint64_t index = uint_field(j, "component", path);
      if (index >= components_.size()) {
        throw SchemaError(Errc::SchemaError, path + "/component", "component index out of range");
      }
      inst.emplace(components_[index]);
    }
    wrap(path, [&] {
      inst->set_nets(nets_from_json(array_field(j, "nets", path), path + "/nets"));
      inst->set_overrides(detail::params_from_json(field(j, "params", path), path + "/params"));
      EvalContext ctx;
      for (const auto& [k, v] : object_field(j, "context", path).items()) {
        if (!v.is_number()) throw SchemaError(Errc::SchemaError, path + "/context/" + k, "expected a number");
        ctx.set(k, v.get<double>());
      }
      inst->set_context(std::move(ctx));
      inst->set_designator(text_field(j, "designator", path));
    });
    return *inst;
  }

  std::vector<ComponentRef> components_;
};

}  // namespace

std::string export_json(const Circuit& circuit) { return Writer().circuit(circuit).dump(2) + "\n"; }

Circuit import_json(std::string_view text) { return Reader().circuit(detail::parse_json(text)); }

std::string write_param_file(const ParamFile& file) {
  json out = json::object();
  for (const auto& [device, set] : file) {
    json corners = json::object();
    for (const auto& [name, params] : set) corners[name] = detail::params_to_json(params);
    out[device] = std::move(corners);
  }
  return out.dump(2) + "\n";
}

}  // namespace netforge
