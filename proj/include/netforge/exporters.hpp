#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netforge/core.hpp"
#include "netforge/lint.hpp"
#include "netforge/readers.hpp"

namespace netforge {

struct ExportOptions {
  std::string title = "netforge";
  std::optional<double> temperature;
  /// Seed for resolving formulas and random specs; defaults to the circuit's.
  std::optional<std::uint64_t> seed;
};

/// A circuit with every parameter resolved to printable text, in the order
/// a netlist is written. Dialect writers only format this.
struct ResolvedNetlist {
  using Assignments = std::vector<std::pair<std::string, std::string>>;

  struct Line {
    std::string designator;
    std::vector<std::string> nets;
    std::string master;
    Assignments params;
  };
  struct Model {
    std::string name;
    std::string type;
    Assignments params;
  };
  struct Subckt {
    std::string name;
    std::vector<std::string> pins;
    Assignments params;
    std::vector<Line> body;
  };

  std::vector<Model> models;
  std::vector<Subckt> subckts;  // definitions precede their first use
  std::vector<Line> instances;
  std::vector<std::string> directives;
};

/// Evaluates all parameters with one generator seeded by `seed`, drawing for
/// models first, then subcircuit definitions, then top-level instances.
ResolvedNetlist resolve(const Circuit& circuit, std::uint64_t seed);

/// Rounds to 12 significant digits and prints the shortest text that reads
/// back as that rounded value.
std::string format_number(double value);

class Exporter {
 public:
  virtual ~Exporter() = default;

  virtual std::string dump(const Circuit& circuit, const ExportOptions& options) const = 0;
  virtual std::string extension() const = 0;

  /// Writes through a temporary file and renames it into place.
  void dump_to_file(const Circuit& circuit, const std::string& path, const ExportOptions& options) const;
};

/// NGSpice-compatible SPICE text. Refuses circuits with lint errors.
class SpiceExporter final : public Exporter {
 public:
  std::string dump(const Circuit& circuit, const ExportOptions& options) const override;
  std::string extension() const override { return "sp"; }
};

/// Spectre native syntax. Refuses circuits with lint errors.
class SpectreExporter final : public Exporter {
 public:
  std::string dump(const Circuit& circuit, const ExportOptions& options) const override;
  std::string extension() const override { return "scs"; }
};

/// Lossless JSON intermediate representation; formulas and random specs are
/// kept unresolved.
class JsonIrExporter final : public Exporter {
 public:
  std::string dump(const Circuit& circuit, const ExportOptions& options) const override;
  std::string extension() const override { return "json"; }
};

class ExporterRegistry {
 public:
  /// Registry holding "spice", "spectre" and "json-ir".
  static ExporterRegistry with_builtins();

  /// Throws DuplicateDialect.
  void register_exporter(const std::string& id, std::shared_ptr<const Exporter> exporter);
  /// Throws UnknownDialect listing the registered ids.
  const Exporter& get(std::string_view id) const;
  bool contains(std::string_view id) const { return exporters_.count(std::string(id)) != 0; }
  std::vector<std::string> ids() const;

  std::string dump(const Circuit& circuit, std::string_view id, const ExportOptions& options = {}) const {
    return get(id).dump(circuit, options);
  }

 private:
  std::map<std::string, std::shared_ptr<const Exporter>> exporters_;
};

/// Export through the built-in dialects with an explicit seed.
std::string export_netlist(const Circuit& circuit, std::string_view dialect, std::uint64_t seed);

std::string export_json(const Circuit& circuit);
/// Throws ParseError, SchemaError, or Error(VersionMismatch).
Circuit import_json(std::string_view text);

/// Canonical JSON for a parameter file; read_param_file() reads it back.
std::string write_param_file(const ParamFile& file);

inline constexpr int kJsonIrVersion = 1;

}  // namespace netforge
