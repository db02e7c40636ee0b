#include "netforge/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>

#include "netforge/build_doc.hpp"
#include "netforge/error.hpp"
#include "netforge/exporters.hpp"
#include "netforge/formula.hpp"
#include "netforge/lint.hpp"
#include "netforge/readers.hpp"

namespace netforge::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Exit {
  int code;
  std::string message;
};

std::uint64_t parse_seed(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Exit{kUsage, what + ": '" + text + "' is not a non-negative integer seed"};
  }
  return v;
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Exit{kUsage, flag + " expects name=value, got '" + text + "'"};
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double parse_value(const std::string& text, const std::string& flag) {
  auto v = parse_si_number(text);
  if (!v) throw Exit{kUsage, flag + ": '" + text + "' is not a number"};
  return *v;
}

int classify(const Error& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaError*>(&e) || e.code() == Errc::Io) {
    return kSchema;
  }
  return kBuild;
}

struct Doc {
  std::string text;
  std::string stem;
  std::string base_dir;
};

Doc load(const std::string& path) {
  Doc d;
  try {
    d.text = read_text_file(path);
  } catch (const Error& e) {
    throw Exit{kSchema, e.what()};
  }
  const fs::path p(path);
  d.stem = p.stem().string();
  d.base_dir = p.has_parent_path() ? p.parent_path().string() : ".";
  return d;
}

struct Common {
  std::string doc;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  std::string title;

  BuildOptions options(const Doc& d, const std::string& env_seed) const {
    BuildOptions o;
    o.base_dir = d.base_dir;
    if (seed) o.seed = seed;
    if (!env_seed.empty()) o.default_seed = parse_seed(env_seed, "NETFORGE_SEED");
    for (const auto& s : sets) {
      auto [k, v] = split_assignment(s, "--set");
      o.variables[k] = parse_value(v, "--set");
    }
    return o;
  }
};

BuildResult build_or_exit(const Doc& d, const BuildOptions& o) {
  try {
    return build_document(d.text, o);
  } catch (const Error& e) {
    throw Exit{classify(e), e.what()};
  }
}

void add_common(CLI::App& cmd, Common& c, bool with_seed = true) {
  cmd.add_option("doc", c.doc, "Build document (JSON)")->required();
  if (with_seed) cmd.add_option("--seed", c.seed, "Seed; overrides the document and NETFORGE_SEED");
  cmd.add_option("--set", c.sets, "Override a document variable (name=value)")->allow_extra_args(false);
}

const Exporter& exporter_or_exit(const ExporterRegistry& registry, const std::string& dialect) {
  try {
    return registry.get(dialect);
  } catch (const Error& e) {
    throw Exit{kUnknownDialect, e.what()};
  }
}

int cmd_build(const Common& c, std::ostream& out, const std::string& env_seed) {
  const Doc d = load(c.doc);
  const BuildResult r = build_or_exit(d, c.options(d, env_seed));
  try {
    resolve(r.circuit, r.seed);
  } catch (const Error& e) {
    throw Exit{kBuild, e.what()};
  }
  std::map<std::string, std::size_t> masters;
  for (const auto& inst : r.circuit.instances()) ++masters[inst.master()];
  out << "seed " << r.seed << "\n";
  out << "corner " << r.corner << "\n";
  out << "instances " << r.circuit.instances().size() << "\n";
  for (const auto& [m, n] : masters) out << "  " << m << " " << n << "\n";
  out << "subcircuits";
  for (const auto& [name, def] : r.circuit.subcircuits()) out << " " << name;
  out << "\n";
  out << "models " << r.circuit.models().size() << "\n";
  return kOk;
}

std::string dump_or_exit(const Exporter& exporter, const BuildResult& r, const std::string& title,
                         std::ostream& err) {
  ExportOptions eo;
  eo.title = title.empty() ? r.title : title;
  eo.seed = r.seed;
  try {
    return exporter.dump(r.circuit, eo);
  } catch (const LintError& e) {
    err << e.report().to_string();
    throw Exit{kLint, "netlist has lint errors"};
  } catch (const Error& e) {
    throw Exit{kBuild, e.what()};
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Exit{kUsage, "cannot write '" + tmp + "'"};
    f << content;
    if (!f.flush()) throw Exit{kUsage, "cannot write '" + tmp + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Exit{kUsage, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message()};
}

int cmd_export(const Common& c, const std::string& dialect, const std::string& out_path, std::ostream& out,
               std::ostream& err, const std::string& env_seed) {
  const ExporterRegistry registry = ExporterRegistry::with_builtins();
  const Exporter& exporter = exporter_or_exit(registry, dialect);
  const Doc d = load(c.doc);
  const BuildResult r = build_or_exit(d, c.options(d, env_seed));
  const std::string text = dump_or_exit(exporter, r, c.title, err);
  if (out_path.empty()) {
    out << text;
  } else {
    write_atomic(out_path, text);
  }
  return kOk;
}

struct Sweep {
  std::string name;
  std::vector<double> values;
};

Sweep parse_vary(const std::string& text) {
  auto [name, range] = split_assignment(text, "--vary");
  const auto c1 = range.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : range.find(':', c1 + 1);
  if (c2 == std::string::npos) throw Exit{kUsage, "--vary expects name=lo:hi:steps, got '" + text + "'"};
  const double lo = parse_value(range.substr(0, c1), "--vary");
  const double hi = parse_value(range.substr(c1 + 1, c2 - c1 - 1), "--vary");
  const double steps = parse_value(range.substr(c2 + 1), "--vary");
  if (!(steps >= 1) || steps != static_cast<double>(static_cast<std::size_t>(steps))) {
    throw Exit{kUsage, "--vary: steps must be a positive integer in '" + text + "'"};
  }
  Sweep s{name, {}};
  const auto n = static_cast<std::size_t>(steps);
  for (std::size_t k = 0; k < n; ++k) {
    s.values.push_back(n == 1 ? lo : k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  return s;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& corners, const std::vector<std::string>& varies,
              std::uint64_t n_seeds, const std::string& dialect, const std::string& out_dir, std::ostream& out,
              std::ostream& err, const std::string& env_seed) {
  const ExporterRegistry registry = ExporterRegistry::with_builtins();
  const Exporter& exporter = exporter_or_exit(registry, dialect);
  if (n_seeds == 0) throw Exit{kUsage, "--seeds must be at least 1"};
  std::vector<Sweep> sweeps;
  for (const auto& v : varies) sweeps.push_back(parse_vary(v));

  const Doc d = load(c.doc);
  const BuildOptions base = c.options(d, env_seed);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Exit{kUsage, "cannot create '" + out_dir + "': " + ec.message()};

  std::vector<std::optional<std::string>> corner_list;
  if (corners.empty()) corner_list.emplace_back();
  for (const auto& name : corners) corner_list.emplace_back(name);

  // Odometer over the swept values; the last --vary moves fastest.
  std::vector<std::vector<double>> points{{}};
  for (const auto& s : sweeps) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points) {
      for (double v : s.values) {
        next.push_back(p);
        next.back().push_back(v);
      }
    }
    points = std::move(next);
  }

  json manifest = json::object();
  manifest["version"] = 1;
  manifest["document"] = d.stem;
  manifest["dialect"] = dialect;
  manifest["variants"] = json::array();
  int status = kOk;
  std::size_t written = 0;

  for (const auto& corner : corner_list) {
    for (const auto& point : points) {
      for (std::uint64_t j = 0; j < n_seeds; ++j) {
        BuildOptions o = base;
        o.corner = corner;
        o.seed_offset = j;
        json entry = json::object();
        json vars = json::object();
        std::string var_part;
        for (std::size_t k = 0; k < sweeps.size(); ++k) {
          o.variables[sweeps[k].name] = point[k];
          vars[sweeps[k].name] = point[k];
          var_part += "__" + sweeps[k].name + "=" + format_shortest(point[k]);
        }
        entry["file"] = nullptr;
        entry["corner"] = corner ? json(*corner) : json(nullptr);
        entry["vars"] = vars;
        entry["seed_index"] = j;
        entry["seed"] = nullptr;
        try {
          const BuildResult r = build_or_exit(d, o);
          entry["corner"] = r.corner;
          entry["seed"] = r.seed;
          const std::string file =
              d.stem + "__" + r.corner + var_part + "__s" + std::to_string(r.seed) + "." + exporter.extension();
          const std::string text = dump_or_exit(exporter, r, c.title, err);
          write_atomic((fs::path(out_dir) / file).string(), text);
          entry["file"] = file;
          entry["status"] = "ok";
          ++written;
        } catch (const Exit& e) {
          err << e.message << "\n";
          entry["status"] = e.code == kLint ? "lint-errors" : e.code == kSchema ? "schema-error" : "build-error";
          entry["error"] = e.message;
          if (e.code == kLint) {
            if (status == kOk) status = kLint;
          } else if (e.code == kSchema && status != kBuild) {
            status = kSchema;
          } else {
            status = kBuild;
          }
        }
        manifest["variants"].push_back(std::move(entry));
      }
    }
  }
  write_atomic((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  out << written << " of " << manifest["variants"].size() << " variants written to " << out_dir << "\n";
  return status;
}

int cmd_lint(const Common& c, std::ostream& out, const std::string& env_seed) {
  const Doc d = load(c.doc);
  const BuildResult r = build_or_exit(d, c.options(d, env_seed));
  const LintReport report = lint(r.circuit);
  out << report.to_string();
  out << report.count(Severity::Error) << " error(s), " << report.count(Severity::Warn) << " warning(s)\n";
  return report.has_errors() ? kLint : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::string& env_seed) {
  CLI::App app{"Build, lint and export SPICE netlists from JSON build documents", "netforge"};
  app.require_subcommand(1);

  Common build_c, export_c, sweep_c, lint_c;
  std::string dialect = "spice", out_path, sweep_dialect = "spice", out_dir;
  std::vector<std::string> corners, varies;
  std::uint64_t n_seeds = 1;

  auto* build = app.add_subcommand("build", "Build a document and print a summary");
  add_common(*build, build_c);

  auto* exp = app.add_subcommand("export", "Export one netlist");
  add_common(*exp, export_c);
  exp->add_option("--dialect", dialect, "Output dialect (see 'formats')");
  exp->add_option("--out", out_path, "Output file; stdout if omitted");
  exp->add_option("--title", export_c.title, "Netlist title");

  auto* sweep = app.add_subcommand("sweep", "Export corner, value and seed variants");
  add_common(*sweep, sweep_c);
  sweep->add_option("--corner", corners, "Corner names (repeatable)")->allow_extra_args(false);
  sweep->add_option("--vary", varies, "Swept variable, name=lo:hi:steps (repeatable)")->allow_extra_args(false);
  sweep->add_option("--seeds", n_seeds, "Number of seeds per variant, counting up from the base seed");
  sweep->add_option("--dialect", sweep_dialect, "Output dialect (see 'formats')");
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--title", sweep_c.title, "Netlist title");

  auto* lint_cmd = app.add_subcommand("lint", "Print lint findings");
  add_common(*lint_cmd, lint_c, false);

  auto* formats = app.add_subcommand("formats", "List export dialects");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(build_c, out, env_seed);
    if (*exp) return cmd_export(export_c, dialect, out_path, out, err, env_seed);
    if (*sweep) return cmd_sweep(sweep_c, corners, varies, n_seeds, sweep_dialect, out_dir, out, err, env_seed);
    if (*lint_cmd) return cmd_lint(lint_c, out, env_seed);
    if (*formats) {
      for (const auto& id : ExporterRegistry::with_builtins().ids()) out << id << "\n";
      return kOk;
    }
  } catch (const Exit& e) {
    if (!e.message.empty()) err << "netforge: " << e.message << "\n";
    return e.code;
  }
  return kUsage;
}

}  // namespace netforge::cli
