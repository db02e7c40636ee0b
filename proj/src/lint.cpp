#include "netforge/lint.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace netforge {

bool LintReport::has_errors() const noexcept { return count(Severity::Error) != 0; }

std::size_t LintReport::count(Severity s) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [s](const Finding& f) { return f.severity == s; }));
}

std::string LintReport::to_string() const {
  std::string out;
  for (const auto& f : findings) {
    out += f.severity == Severity::Error ? "error " : "warn ";
    out += f.code;
    out += ' ';
    if (!f.scope.empty()) out += f.scope + "/";
    out += f.location;
    out += ": ";
    out += f.message;
    out += '\n';
  }
  return out;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      // Compare digit runs by value: strip leading zeros, then length, then text.
      std::size_t ia = i, jb = j;
      while (ia + 1 < ie && a[ia] == '0') ++ia;
      while (jb + 1 < je && b[jb] == '0') ++jb;
      if (ie - ia != je - jb) return ie - ia < je - jb;
      const int c = a.compare(ia, ie - ia, b, jb, je - jb);
      if (c != 0) return c < 0;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

bool is_primitive(const Component& component) {
  if (const auto* src = component.metadata().get("source"); src && *src == "verilog-a") return true;
  if (const auto* prim = component.metadata().get("primitive"); prim && *prim == "true") return true;
  const std::string& p = component.prefix();
  if (p.empty()) return false;
  static const std::string kModelFree = "RCLVIEFGHKB";
  return kModelFree.find(static_cast<char>(std::toupper(static_cast<unsigned char>(p[0])))) != std::string::npos;
}

namespace {

struct ScopeView {
  std::string name;
  const std::vector<Instance>* instances;
  const std::vector<std::string>* pins;  // null at top level
  std::vector<const OrderedMap<SubcircuitRef>*> visible;  // innermost first
};

bool defines(const std::vector<const OrderedMap<SubcircuitRef>*>& visible, const std::string& name) {
  return std::any_of(visible.begin(), visible.end(), [&](const auto* m) { return m->contains(name); });
}

void check_scope(const ScopeView& scope, const Circuit& circuit, std::vector<Finding>& out) {
  auto add = [&](Severity s, const char* code, std::string location, std::string message) {
    out.push_back({s, code, std::move(message), scope.name, std::move(location)});
  };

  std::map<std::string, std::size_t> designators;
  std::map<std::string, std::size_t> net_refs;
  std::set<std::string> used_nets;

  for (const Instance& inst : *scope.instances) {
    ++designators[inst.designator()];
    std::string open_ports;
    for (std::size_t p = 0; p < inst.arity(); ++p) {
      const NetRef& net = inst.nets()[p];
      if (net.is_unconnected()) {
        open_ports += (open_ports.empty() ? "" : ", ") + std::to_string(p);
        continue;
      }
      used_nets.insert(net.str());
      if (!is_global(net, circuit.globals())) ++net_refs[net.str()];
    }
    if (!open_ports.empty()) {
      add(Severity::Error, "UNCONNECTED", inst.designator(),
          "port " + open_ports + " of '" + inst.master() + "' is unconnected");
    }
    if (inst.is_subcircuit()) {
      if (!defines(scope.visible, inst.master())) {
        add(Severity::Error, "UNDEFINED_MASTER", inst.designator(), "subcircuit '" + inst.master() + "' is not defined");
      }
    } else if (!is_primitive(*inst.component()) && !circuit.models().contains(inst.master()) &&
               !defines(scope.visible, inst.master())) {
      add(Severity::Error, "UNDEFINED_MASTER", inst.designator(),
          "no model or subcircuit named '" + inst.master() + "'");
    }
  }

  for (const auto& [designator, n] : designators) {
    if (n > 1) {
      add(Severity::Error, "DUPLICATE_DESIGNATOR", designator,
          "designator used by " + std::to_string(n) + " instances");
    }
  }

  if (scope.pins) {
    for (const auto& pin : *scope.pins) {
      if (!used_nets.count(pin)) {
        add(Severity::Warn, "UNUSED_PIN", pin, "pin is not connected to anything in the body");
      }
      if (auto it = net_refs.find(pin); it != net_refs.end()) ++it->second;
    }
  }
  for (const auto& [net, n] : net_refs) {
    if (n == 1) add(Severity::Warn, "DANGLING", net, "net has a single connection");
  }
}

void visit_subckts(const OrderedMap<SubcircuitRef>& defs, std::vector<const OrderedMap<SubcircuitRef>*> visible,
                   std::set<std::string>& seen, const Circuit& circuit, std::vector<Finding>& out) {
  for (const auto& [name, def] : defs) {
    if (!seen.insert(name).second) continue;
    auto inner = visible;
    inner.insert(inner.begin(), &def->nested());
    visit_subckts(def->nested(), inner, seen, circuit, out);
    check_scope({name, &def->body(), &def->pins(), inner}, circuit, out);
  }
}

}  // namespace

LintReport lint(const Circuit& circuit) {
  std::vector<Finding> findings;
  check_scope({"", &circuit.instances(), nullptr, {&circuit.subcircuits()}}, circuit, findings);
  std::set<std::string> seen;
  visit_subckts(circuit.subcircuits(), {&circuit.subcircuits()}, seen, circuit, findings);

  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    if (a.scope != b.scope) return natural_less(a.scope, b.scope);
    if (a.location != b.location) return natural_less(a.location, b.location);
    return a.code < b.code;
  });
  return {std::move(findings)};
}

}  // namespace netforge
