#include "netforge/core.hpp"

#include <algorithm>
#include <cctype>

#include "netforge/error.hpp"

namespace netforge {

std::string default_prefix(std::string_view name) {
  auto it = std::find_if(name.begin(), name.end(), [](unsigned char c) { return std::isalpha(c) != 0; });
  if (it == name.end()) return "X";
  return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(*it))));
}

Component::Component(std::string name, std::vector<NetRef> ports, Params params, std::optional<std::string> prefix,
                     Metadata metadata)
    : name_(std::move(name)), ports_(std::move(ports)), params_(std::move(params)), metadata_(std::move(metadata)) {
  if (name_.empty()) throw Error(Errc::EmptyName, "component name must not be empty");
  if (ports_.empty()) throw Error(Errc::EmptyPorts, "component '" + name_ + "' needs at least one port");
  prefix_ = prefix && !prefix->empty() ? *prefix : default_prefix(name_);
}

ComponentRef make_component(std::string name, std::vector<NetRef> ports, Params params,
                            std::optional<std::string> prefix, Metadata metadata) {
  return std::make_shared<const Component>(std::move(name), std::move(ports), std::move(params), std::move(prefix),
                                           std::move(metadata));
}

Model::Model(std::string name_, std::string base_type_, Params params_)
    : name(std::move(name_)), base_type(std::move(base_type_)), params(std::move(params_)) {
  if (name.empty()) throw Error(Errc::EmptyName, "model name must not be empty");
  if (base_type.empty()) throw Error(Errc::EmptyName, "model '" + name + "' needs a base type");
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(ComponentRef component) : template_(std::move(component)) {
  if (!std::get<ComponentRef>(template_)) throw Error(Errc::EmptyName, "null component template");
  nets_ = default_nets();
}

Instance::Instance(SubcircuitRef subcircuit) : template_(std::move(subcircuit)) {
  if (!std::get<SubcircuitRef>(template_)) throw Error(Errc::EmptyName, "null subcircuit template");
  nets_ = default_nets();
}

Instance::Instance(const Subcircuit& subcircuit) : Instance(std::make_shared<const Subcircuit>(subcircuit)) {}

const Component* Instance::component() const noexcept {
  auto* c = std::get_if<ComponentRef>(&template_);
  return c ? c->get() : nullptr;
}

const Subcircuit* Instance::subcircuit() const noexcept {
  auto* s = std::get_if<SubcircuitRef>(&template_);
  return s ? s->get() : nullptr;
}

const std::string& Instance::master() const noexcept {
  if (const Component* c = component()) return c->name();
  return subcircuit()->name();
}

std::vector<NetRef> Instance::default_nets() const {
  if (const Component* c = component()) return c->ports();
  const auto& pins = subcircuit()->pins();
  return {pins.begin(), pins.end()};
}

std::string Instance::designator_prefix() const {
  if (const Component* c = component()) return c->prefix();
  return "X";
}

Params Instance::effective_params() const {
  const Params& base = component() ? component()->params() : subcircuit()->params();
  return merge_params(base, overrides_);
}

void Instance::set_net(std::size_t port, NetRef net) {
  if (port >= nets_.size()) {
    throw Error(Errc::PortOutOfRange,
                "port " + std::to_string(port) + " out of range for '" + master() + "' with " +
                    std::to_string(nets_.size()) + " ports");
  }
  nets_[port] = std::move(net);
}

void Instance::set_nets(std::vector<NetRef> nets) {
  if (nets.size() != nets_.size()) {
    throw Error(Errc::ArityMismatch, "'" + master() + "' has " + std::to_string(nets_.size()) + " ports, got " +
                                         std::to_string(nets.size()) + " nets");
  }
  nets_ = std::move(nets);
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.nets_ != b.nets_ || a.overrides_ != b.overrides_ || a.context_ != b.context_ ||
      a.designator_ != b.designator_ || a.template_.index() != b.template_.index()) {
    return false;
  }
  if (const Component* ca = a.component()) return ca == b.component() || *ca == *b.component();
  const Subcircuit* sa = a.subcircuit();
  return sa == b.subcircuit() || *sa == *b.subcircuit();
}

Instance rebind(const Instance& source, std::vector<NetRef> nets) {
  Instance out = source;
  out.set_nets(std::move(nets));
  out.set_designator({});
  return out;
}

Instance rebind(const Instance& source, NetRef net) {
  Instance out = source;
  const auto& nets = out.nets();
  auto it = std::find_if(nets.begin(), nets.end(), [](const NetRef& n) { return n.is_unconnected(); });
  out.set_net(it == nets.end() ? 0 : static_cast<std::size_t>(it - nets.begin()), std::move(net));
  out.set_designator({});
  return out;
}

Instance override_params(const Instance& source, const Params& overrides) {
  Instance out = source;
  out.set_overrides(merge_params(source.overrides(), overrides));
  out.set_designator({});
  return out;
}

bool is_global(const NetRef& net, const std::set<std::string>& globals) {
  if (net.kind() != NetRef::Kind::Named && net.kind() != NetRef::Kind::Numbered) return false;
  return globals.count(net.str()) != 0;
}

// ---------------------------------------------------------------------------
// Scope

std::vector<Instance> Scope::add(std::span<const Instance> instances) {
  // Work on copies so a failed insert leaves the scope untouched.
  auto counters = counters_;
  auto chain_counter = chain_counter_;
  auto subcircuits = subcircuits_;
  try {
    // Generated nets from one add call share a chain number per group, in
    // order of first appearance.
    std::map<std::pair<std::string, std::uint64_t>, std::uint64_t> groups;
    std::vector<Instance> staged;
    staged.reserve(instances.size());
    for (const Instance& source : instances) {
      Instance inst = source;
      for (std::size_t p = 0; p < inst.arity(); ++p) {
        const NetRef& net = inst.nets()[p];
        if (!net.is_generated()) continue;
        auto key = std::make_pair(net.name(), net.number());
        auto it = groups.find(key);
        if (it == groups.end()) it = groups.emplace(key, ++chain_counter).first;
        inst.set_net(p, NetRef(net.name() + "net_" + std::to_string(it->second) + "_" + std::to_string(net.link())));
      }
      if (inst.is_subcircuit()) define(std::get<SubcircuitRef>(inst.templ()), true);
      const std::string prefix = inst.designator_prefix();
      inst.set_designator(prefix + std::to_string(++counters[prefix]));
      staged.push_back(std::move(inst));
    }
    instances_.insert(instances_.end(), staged.begin(), staged.end());
    counters_ = std::move(counters);
    chain_counter_ = chain_counter;
    return staged;
  } catch (...) {
    subcircuits_ = std::move(subcircuits);
    throw;
  }
}

void Scope::define(SubcircuitRef def, bool allow_identical) {
  if (const SubcircuitRef* existing = subcircuits_.get(def->name())) {
    if (allow_identical && (*existing == def || **existing == *def)) return;
    throw Error(Errc::DuplicateSubcircuitName, "subcircuit '" + def->name() + "' is already defined");
  }
  const std::string name = def->name();
  subcircuits_.set(name, std::move(def));
}

void Scope::insert_verbatim(Instance instance) {
  if (instance.is_subcircuit()) define(std::get<SubcircuitRef>(instance.templ()), true);
  instances_.push_back(std::move(instance));
}

bool operator==(const Scope& a, const Scope& b) {
  if (a.instances_ != b.instances_ || a.counters_ != b.counters_ || a.chain_counter_ != b.chain_counter_ ||
      a.subcircuits_.size() != b.subcircuits_.size()) {
    return false;
  }
  auto ib = b.subcircuits_.begin();
  for (const auto& [name, def] : a.subcircuits_) {
    if (name != ib->first || !(def == ib->second || *def == *ib->second)) return false;
    ++ib;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Subcircuit

namespace {
void check_pins(const std::vector<std::string>& pins) {
  for (std::size_t i = 0; i < pins.size(); ++i) {
    NetRef check(pins[i]);  // validates the name
    if (check.is_unconnected()) throw Error(Errc::InvalidNetName, "empty pin name");
    for (std::size_t j = 0; j < i; ++j) {
      if (pins[j] == pins[i]) throw Error(Errc::DuplicatePins, "pin '" + pins[i] + "' listed twice");
    }
  }
}
}  // namespace

Subcircuit::Subcircuit(std::string name, std::vector<std::string> pins, Params params)
    : name_(std::move(name)), pins_(std::move(pins)), params_(std::move(params)) {
  if (name_.empty()) throw Error(Errc::EmptyName, "subcircuit name must not be empty");
  check_pins(pins_);
}

void Subcircuit::check_open() const {
  if (fixed_) throw Error(Errc::SubcircuitFrozen, "subcircuit '" + name_ + "' is fixed");
}

std::vector<Instance> Subcircuit::add(const Instance& instance) { return add(std::span<const Instance>(&instance, 1)); }

std::vector<Instance> Subcircuit::add(std::span<const Instance> instances) {
  check_open();
  return scope_.add(instances);
}

void Subcircuit::add(const Subcircuit& definition) {
  check_open();
  scope_.define(std::make_shared<const Subcircuit>(definition), false);
}

// ---------------------------------------------------------------------------
// Circuit

std::vector<Instance> Circuit::add(const Instance& instance) { return add(std::span<const Instance>(&instance, 1)); }

std::vector<Instance> Circuit::add(std::span<const Instance> instances) { return scope_.add(instances); }

void Circuit::add(Model model) {
  if (models_.contains(model.name)) {
    throw Error(Errc::DuplicateModelName, "model '" + model.name + "' is already defined");
  }
  std::string name = model.name;
  models_.set(std::move(name), std::move(model));
}

void Circuit::add(const Subcircuit& definition) { add(std::make_shared<const Subcircuit>(definition)); }

void Circuit::add(SubcircuitRef definition) { scope_.define(std::move(definition), false); }

Subcircuit Circuit::into_subckt(std::string name, std::vector<std::string> pins, Params params) const {
  Subcircuit out(std::move(name), std::move(pins), std::move(params));
  out.scope() = scope_;
  return out;
}

}  // namespace netforge
