#pragma once

#include <string>
#include <vector>

#include "netforge/core.hpp"
#include "netforge/error.hpp"

namespace netforge {

enum class Severity { Warn, Error };

struct Finding {
  Severity severity;
  std::string code;
  std::string message;
  /// Subcircuit name, empty for the top level.
  std::string scope;
  /// Designator, net, or pin the finding is about.
  std::string location;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct LintReport {
  std::vector<Finding> findings;

  bool has_errors() const noexcept;
  std::size_t count(Severity s) const noexcept;
  /// One line per finding: `<severity> <CODE> <scope/location>: <message>`.
  std::string to_string() const;
};

/// Structural checks over the top level and every reachable subcircuit:
///
///   UNCONNECTED           error  instance has an Unconnected port
///   DANGLING              warn   non-global net referenced exactly once
///   DUPLICATE_DESIGNATOR  error  designator used more than once in a scope
///   UNDEFINED_MASTER      error  no model, subcircuit, or primitive matches
///   UNUSED_PIN            warn   subcircuit pin not used by its body
///
/// Findings are ordered by scope, then location (natural order), then code.
LintReport lint(const Circuit& circuit);

/// Whether a component needs no model: R, C, L, V, I, E, F, G, H, K, B
/// prefixes, Verilog-A sources, or metadata `primitive = true`.
bool is_primitive(const Component& component);

class LintError : public Error {
 public:
  explicit LintError(LintReport report)
      : Error(Errc::LintErrors, "netlist has lint errors\n" + report.to_string()), report_(std::move(report)) {}

  const LintReport& report() const noexcept { return report_; }

 private:
  LintReport report_;
};

/// Compares strings treating digit runs as numbers, so R2 < R10.
bool natural_less(const std::string& a, const std::string& b);

}  // namespace netforge
