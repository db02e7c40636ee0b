#include "netforge/exporters.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "netforge/error.hpp"

namespace netforge {

std::string format_number(double value) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  double rounded = 0.0;
  std::from_chars(buf, r.ptr, rounded);
  if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0
  r = std::to_chars(buf, buf + sizeof buf, rounded);
  return std::string(buf, r.ptr);
}

namespace {

std::string format_value(const EvaluatedValue& v) {
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

ResolvedNetlist::Assignments assignments(const EvaluatedParams& params) {
  ResolvedNetlist::Assignments out;
  out.reserve(params.size());
  for (const auto& [name, value] : params) out.emplace_back(name, format_value(value));
  return out;
}

EvalContext numeric_context(const EvaluatedParams& params) {
  EvalContext ctx;
  for (const auto& [name, value] : params) {
    if (const double* d = std::get_if<double>(&value)) ctx.set(name, *d);
  }
  return ctx;
}

ResolvedNetlist::Line resolve_instance(const Instance& inst, const EvalContext& outer, Rng& rng) {
  EvalContext ctx = outer;
  for (const auto& [name, value] : inst.context()) ctx.set(name, value);
  ResolvedNetlist::Line line;
  line.designator = inst.designator();
  for (const NetRef& net : inst.nets()) line.nets.push_back(net.str());
  line.master = inst.master();
  try {
    // Subcircuit defaults are written on the definition; instances only carry overrides.
    const Params& params = inst.is_subcircuit() ? inst.overrides() : inst.effective_params();
    line.params = assignments(eval_params(params, ctx, rng));
  } catch (const Error& e) {
    throw Error(e.code(), "instance " + inst.designator() + ": " + e.what());
  }
  return line;
}

class Resolver {
 public:
  Resolver(ResolvedNetlist& out, Rng& rng) : out_(out), rng_(rng) {}

  void define_all(const OrderedMap<SubcircuitRef>& defs) {
    for (const auto& [name, def] : defs) define(def);
  }

 private:
  void define(const SubcircuitRef& def) {
    if (auto it = seen_.find(def->name()); it != seen_.end()) {
      if (it->second != def.get() && !(*it->second == *def)) {
        throw Error(Errc::DuplicateSubcircuitName,
                    "two different subcircuits named '" + def->name() + "' in one hierarchy");
      }
      return;
    }
    seen_.emplace(def->name(), def.get());
    define_all(def->nested());

    ResolvedNetlist::Subckt sub;
    sub.name = def->name();
    sub.pins = def->pins();
    EvaluatedParams defaults;
    try {
      defaults = eval_params(def->params(), rng_);
    } catch (const Error& e) {
      throw Error(e.code(), "subcircuit " + def->name() + ": " + e.what());
    }
    sub.params = assignments(defaults);
    const EvalContext ctx = numeric_context(defaults);
    for (const Instance& inst : def->body()) sub.body.push_back(resolve_instance(inst, ctx, rng_));
    out_.subckts.push_back(std::move(sub));
  }

  ResolvedNetlist& out_;
  Rng& rng_;
  std::map<std::string, const Subcircuit*> seen_;
};

}  // namespace

ResolvedNetlist resolve(const Circuit& circuit, std::uint64_t seed) {
  Rng rng(seed);
  ResolvedNetlist out;
  for (const auto& [name, model] : circuit.models()) {
    try {
      out.models.push_back({model.name, model.base_type, assignments(eval_params(model.params, rng))});
    } catch (const Error& e) {
      throw Error(e.code(), "model " + name + ": " + e.what());
    }
  }
  Resolver(out, rng).define_all(circuit.subcircuits());
  for (const Instance& inst : circuit.instances()) out.instances.push_back(resolve_instance(inst, {}, rng));
  out.directives = circuit.directives();
  return out;
}

void Exporter::dump_to_file(const Circuit& circuit, const std::string& path, const ExportOptions& options) const {
  const std::string text = dump(circuit, options);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write '" + tmp + "'");
    out << text;
    if (!out.flush()) throw Error(Errc::Io, "failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(Errc::Io, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

namespace {

void require_clean(const Circuit& circuit) {
  LintReport report = lint(circuit);
  if (report.has_errors()) throw LintError(std::move(report));
}

void append_assignments(std::string& out, const ResolvedNetlist::Assignments& params) {
  for (const auto& [k, v] : params) {
    out += ' ';
    out += k;
    out += '=';
    out += v;
  }
}

std::string spice_line(const ResolvedNetlist::Line& line) {
  std::string out = line.designator;
  for (const auto& n : line.nets) out += ' ' + n;
  out += ' ' + line.master;
  append_assignments(out, line.params);
  return out + '\n';
}

std::string spectre_line(const ResolvedNetlist::Line& line) {
  std::string out = line.designator + " (";
  for (std::size_t i = 0; i < line.nets.size(); ++i) {
    if (i) out += ' ';
    out += line.nets[i];
  }
  out += ") " + line.master;
  append_assignments(out, line.params);
  return out + '\n';
}

}  // namespace

std::string SpiceExporter::dump(const Circuit& circuit, const ExportOptions& options) const {
  require_clean(circuit);
  const ResolvedNetlist net = resolve(circuit, options.seed.value_or(circuit.seed()));
  std::string out = "* " + options.title + '\n';
  if (options.temperature) out += ".temp " + format_number(*options.temperature) + '\n';
  for (const auto& m : net.models) {
    out += ".model " + m.name + ' ' + m.type;
    if (!m.params.empty()) {
      out += " (";
      for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ' ';
        out += m.params[i].first + '=' + m.params[i].second;
      }
      out += ')';
    }
    out += '\n';
  }
  for (const auto& s : net.subckts) {
    out += ".subckt " + s.name;
    for (const auto& p : s.pins) out += ' ' + p;
    append_assignments(out, s.params);
    out += '\n';
    for (const auto& line : s.body) out += spice_line(line);
    out += ".ends " + s.name + '\n';
  }
  for (const auto& line : net.instances) out += spice_line(line);
  for (const auto& d : net.directives) out += d + '\n';
  out += ".end\n";
  return out;
}

std::string SpectreExporter::dump(const Circuit& circuit, const ExportOptions& options) const {
  require_clean(circuit);
  const ResolvedNetlist net = resolve(circuit, options.seed.value_or(circuit.seed()));
  std::string out = "// " + options.title + '\n';
  out += "simulator lang=spectre\n";
  if (options.temperature) out += "simulatorOptions options temp=" + format_number(*options.temperature) + '\n';
  for (const auto& m : net.models) {
    out += "model " + m.name + ' ' + m.type;
    append_assignments(out, m.params);
    out += '\n';
  }
  for (const auto& s : net.subckts) {
    out += "subckt " + s.name + " (";
    for (std::size_t i = 0; i < s.pins.size(); ++i) {
      if (i) out += ' ';
      out += s.pins[i];
    }
    out += ")\n";
    if (!s.params.empty()) {
      out += "parameters";
      append_assignments(out, s.params);
      out += '\n';
    }
    for (const auto& line : s.body) out += spectre_line(line);
    out += "ends " + s.name + '\n';
  }
  for (const auto& line : net.instances) out += spectre_line(line);
  for (const auto& d : net.directives) out += d + '\n';
  return out;
}

std::string JsonIrExporter::dump(const Circuit& circuit, const ExportOptions&) const { return export_json(circuit); }

ExporterRegistry ExporterRegistry::with_builtins() {
  ExporterRegistry r;
  r.register_exporter("spice", std::make_shared<SpiceExporter>());
  r.register_exporter("spectre", std::make_shared<SpectreExporter>());
  r.register_exporter("json-ir", std::make_shared<JsonIrExporter>());
  return r;
}

void ExporterRegistry::register_exporter(const std::string& id, std::shared_ptr<const Exporter> exporter) {
  if (id.empty()) throw Error(Errc::EmptyName, "dialect id must not be empty");
  if (!exporter) throw Error(Errc::EmptyName, "null exporter for '" + id + "'");
  if (!exporters_.emplace(id, std::move(exporter)).second) {
    throw Error(Errc::DuplicateDialect, "dialect '" + id + "' is already registered");
  }
}

const Exporter& ExporterRegistry::get(std::string_view id) const {
  if (auto it = exporters_.find(std::string(id)); it != exporters_.end()) return *it->second;
  std::string known;
  for (const auto& [name, e] : exporters_) known += (known.empty() ? "" : ", ") + name;
  throw Error(Errc::UnknownDialect, "unknown dialect '" + std::string(id) + "' (registered: " + known + ")");
}

std::vector<std::string> ExporterRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : exporters_) out.push_back(name);
  return out;
}

std::string export_netlist(const Circuit& circuit, std::string_view dialect, std::uint64_t seed) {
  static const ExporterRegistry registry = ExporterRegistry::with_builtins();
  ExportOptions options;
  options.seed = seed;
  return registry.dump(circuit, dialect, options);
}

}  // namespace netforge
