#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "netforge/net.hpp"
#include "netforge/ordered_map.hpp"
#include "netforge/params.hpp"

namespace netforge {

using Metadata = OrderedMap<std::string>;

class Component;
class Subcircuit;
using ComponentRef = std::shared_ptr<const Component>;
using SubcircuitRef = std::shared_ptr<const Subcircuit>;

/// Reusable device template. Immutable once built; share it through
/// ComponentRef.
class Component {
 public:
  /// Throws EmptyName or EmptyPorts. Without a prefix, the first letter of
  /// `name` (uppercased) is used.
  Component(std::string name, std::vector<NetRef> ports, Params params = {},
            std::optional<std::string> prefix = std::nullopt, Metadata metadata = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<NetRef>& ports() const noexcept { return ports_; }
  const Params& params() const noexcept { return params_; }
  const std::string& prefix() const noexcept { return prefix_; }
  const Metadata& metadata() const noexcept { return metadata_; }

  friend bool operator==(const Component&, const Component&) = default;

 private:
  std::string name_;
  std::vector<NetRef> ports_;
  Params params_;
  std::string prefix_;
  Metadata metadata_;
};

ComponentRef make_component(std::string name, std::vector<NetRef> ports, Params params = {},
                            std::optional<std::string> prefix = std::nullopt, Metadata metadata = {});

std::string default_prefix(std::string_view name);

struct Model {
  Model(std::string name, std::string base_type, Params params = {});

  std::string name;
  std::string base_type;
  Params params;

  friend bool operator==(const Model&, const Model&) = default;
};

/// A placement of a Component or Subcircuit with its own nets and parameter
/// overrides. Designators are assigned when the instance enters a container.
class Instance {
 public:
  using Template = std::variant<ComponentRef, SubcircuitRef>;

  Instance(ComponentRef component);           // NOLINT(google-explicit-constructor)
  Instance(SubcircuitRef subcircuit);         // NOLINT
  Instance(const Subcircuit& subcircuit);     // NOLINT  snapshots the definition

  const Template& templ() const noexcept { return template_; }
  bool is_subcircuit() const noexcept { return std::holds_alternative<SubcircuitRef>(template_); }
  const Component* component() const noexcept;
  const Subcircuit* subcircuit() const noexcept;

  /// Component name or subcircuit name.
  const std::string& master() const noexcept;
  /// Template's default nets (component ports or subcircuit pins).
  std::vector<NetRef> default_nets() const;
  /// Designator prefix used on insertion; always "X" for subcircuits.
  std::string designator_prefix() const;
  /// Template parameters shadowed by the overrides.
  Params effective_params() const;

  const std::vector<NetRef>& nets() const noexcept { return nets_; }
  const Params& overrides() const noexcept { return overrides_; }
  const EvalContext& context() const noexcept { return context_; }
  const std::string& designator() const noexcept { return designator_; }
  std::size_t arity() const noexcept { return nets_.size(); }

  void set_net(std::size_t port, NetRef net);
  void set_nets(std::vector<NetRef> nets);
  void set_overrides(Params overrides) { overrides_ = std::move(overrides); }
  void set_context(EvalContext context) { context_ = std::move(context); }
  void set_designator(std::string designator) { designator_ = std::move(designator); }

  /// Deep equality: templates compare by value.
  friend bool operator==(const Instance& a, const Instance& b);

 private:
  Template template_;
  std::vector<NetRef> nets_;
  Params overrides_;
  EvalContext context_;
  std::string designator_;
};

/// Fresh instance with all nets replaced. Throws ArityMismatch.
Instance rebind(const Instance& source, std::vector<NetRef> nets);
/// Single-net form: binds the first Unconnected port, or port 0 if none.
Instance rebind(const Instance& source, NetRef net);
/// Fresh instance whose overrides are shadowed by `overrides`.
Instance override_params(const Instance& source, const Params& overrides);
inline Instance operator%(const Instance& source, const Params& overrides) { return override_params(source, overrides); }

/// Instances with their designator counters and the subcircuit definitions
/// they reference. Shared by Subcircuit bodies and Circuits.
class Scope {
 public:
  /// Appends instances, resolving generated nets and assigning designators.
  /// Returns the instances as stored.
  std::vector<Instance> add(std::span<const Instance> instances);

  /// Registers a definition. With `allow_identical`, re-registering an equal
  /// definition is a no-op; any other clash throws DuplicateSubcircuitName.
  void define(SubcircuitRef def, bool allow_identical);

  /// Appends without touching designators or counters.
  void insert_verbatim(Instance instance);

  const std::vector<Instance>& instances() const noexcept { return instances_; }
  std::vector<Instance>& instances() noexcept { return instances_; }
  const OrderedMap<SubcircuitRef>& subcircuits() const noexcept { return subcircuits_; }
  const std::map<std::string, std::uint64_t>& counters() const noexcept { return counters_; }
  std::uint64_t chain_counter() const noexcept { return chain_counter_; }

  void set_counters(std::map<std::string, std::uint64_t> counters) { counters_ = std::move(counters); }
  void set_chain_counter(std::uint64_t value) { chain_counter_ = value; }

  friend bool operator==(const Scope& a, const Scope& b);

 private:
  std::vector<Instance> instances_;
  OrderedMap<SubcircuitRef> subcircuits_;
  std::map<std::string, std::uint64_t> counters_;
  std::uint64_t chain_counter_ = 0;
};

/// Hierarchical block. A fixed subcircuit rejects further additions.
class Subcircuit {
 public:
  /// Throws EmptyName, DuplicatePins, InvalidNetName.
  Subcircuit(std::string name, std::vector<std::string> pins, Params params = {});

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& pins() const noexcept { return pins_; }
  const Params& params() const noexcept { return params_; }
  const std::vector<Instance>& body() const noexcept { return scope_.instances(); }
  const OrderedMap<SubcircuitRef>& nested() const noexcept { return scope_.subcircuits(); }
  const Scope& scope() const noexcept { return scope_; }
  Scope& scope() noexcept { return scope_; }
  bool fixed() const noexcept { return fixed_; }

  /// Throws SubcircuitFrozen once fixed.
  std::vector<Instance> add(const Instance& instance);
  std::vector<Instance> add(std::span<const Instance> instances);
  void add(const Subcircuit& definition);

  Subcircuit& operator+=(const Instance& instance) {
    add(instance);
    return *this;
  }
  Subcircuit& operator+=(std::span<const Instance> instances) {
    add(instances);
    return *this;
  }

  void fix() noexcept { fixed_ = true; }
  void set_fixed(bool fixed) noexcept { fixed_ = fixed; }

  friend bool operator==(const Subcircuit&, const Subcircuit&) = default;

 private:
  void check_open() const;

  std::string name_;
  std::vector<std::string> pins_;
  Params params_;
  Scope scope_;
  bool fixed_ = false;
};

/// Exportable root: instances, subcircuit definitions, models, global nets,
/// raw directive lines, and the default seed.
class Circuit {
 public:
  Circuit() = default;

  std::vector<Instance> add(const Instance& instance);
  std::vector<Instance> add(std::span<const Instance> instances);
  /// Throws DuplicateModelName.
  void add(Model model);
  /// Throws DuplicateSubcircuitName.
  void add(const Subcircuit& definition);
  void add(SubcircuitRef definition);

  Circuit& operator+=(const Instance& instance) {
    add(instance);
    return *this;
  }
  Circuit& operator+=(std::span<const Instance> instances) {
    add(instances);
    return *this;
  }
  Circuit& operator+=(Model model) {
    add(std::move(model));
    return *this;
  }
  Circuit& operator+=(const Subcircuit& definition) {
    add(definition);
    return *this;
  }

  /// Wraps this circuit's instances and definitions into a subcircuit; the
  /// circuit itself is left untouched. Throws DuplicatePins.
  Subcircuit into_subckt(std::string name, std::vector<std::string> pins, Params params = {}) const;

  const std::vector<Instance>& instances() const noexcept { return scope_.instances(); }
  const OrderedMap<SubcircuitRef>& subcircuits() const noexcept { return scope_.subcircuits(); }
  const OrderedMap<Model>& models() const noexcept { return models_; }
  const std::set<std::string>& globals() const noexcept { return globals_; }
  const std::vector<std::string>& directives() const noexcept { return directives_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Scope& scope() const noexcept { return scope_; }
  Scope& scope() noexcept { return scope_; }

  void set_globals(std::set<std::string> globals) { globals_ = std::move(globals); }
  void add_directive(std::string line) { directives_.push_back(std::move(line)); }
  void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  Scope scope_;
  OrderedMap<Model> models_;
  std::set<std::string> globals_{"0", "GND", "VDD"};
  std::vector<std::string> directives_;
  std::uint64_t seed_ = 0;
};

/// Whether `net` is one of `globals` (numbered nets compare by their text).
bool is_global(const NetRef& net, const std::set<std::string>& globals);

}  // namespace netforge
