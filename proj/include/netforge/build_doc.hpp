#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "netforge/core.hpp"

namespace netforge {

/// Knobs applied on top of a build document.
struct BuildOptions {
  /// Overrides the document seed.
  std::optional<std::uint64_t> seed;
  /// Used when neither `seed` nor the document gives one.
  std::uint64_t default_seed = 0;
  /// Added to whichever seed applies (sweeps use it for per-variant seeds).
  std::uint64_t seed_offset = 0;
  /// Overrides or adds document variables.
  std::map<std::string, double> variables;
  /// Overrides the document's active corner.
  std::optional<std::string> corner;
  /// Directory relative paths in the document are resolved against.
  std::string base_dir = ".";
};

struct BuildResult {
  Circuit circuit;
  std::uint64_t seed = 0;
  std::string corner;
  /// Netlist title from the document, "netforge" if absent.
  std::string title = "netforge";
};

/// Builds a circuit from a version-1 build document (JSON). See
/// docs/build-doc.md for the schema.
///
/// Structural problems throw ParseError or SchemaError; failures while
/// constructing the circuit (unknown corner, arity mismatch, ...) throw the
/// underlying Error.
BuildResult build_document(std::string_view json_text, const BuildOptions& options = {});

inline constexpr int kBuildDocVersion = 1;

}  // namespace netforge
