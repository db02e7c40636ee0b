#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "netforge/core.hpp"
#include "netforge/params.hpp"

namespace netforge {

/// device -> corner -> parameters
using ParamFile = OrderedMap<ParamSet>;

/// Reads the JSON parameter file format:
///
///     { "<device>": { "<corner>": { "<param>": <value> } } }
///
/// where a value is a number, a string (SI-suffixed numbers become numbers,
/// anything else stays text), or one directive object: `{"$formula": "..."}`,
/// `{"$gauss": [mean, std]}`, `{"$uniform": [lo, hi]}`,
/// `{"$lognormal": [mu, sigma]}`, `{"$text": "..."}`.
///
/// Throws ParseError (malformed JSON) or SchemaError with the offending path
/// (codes SchemaError, UnknownDirective, InvalidSpec, SyntaxError).
ParamFile read_param_file(std::string_view json_text);
ParamFile read_param_file(std::istream& in);
ParamFile read_param_file_path(const std::string& path);

/// Parses `.model NAME TYPE (k=v ...)` cards. Other cards are skipped; `*`
/// starts a comment line, `;` an inline comment, `+` continues the previous
/// card. Bare flags become text "1". Throws ParseError with a line number.
std::vector<Model> parse_spice_models(std::string_view text);

/// Extracts the interface of a single Verilog-A module: name, ports in
/// declaration order (all Unconnected), and `parameter` defaults. The body is
/// not interpreted. The component gets designator prefix "N" and metadata
/// `source = verilog-a`.
///
/// Throws Error with NoModule, MultipleModules, NoPorts, or ParseError.
Component parse_veriloga(std::string_view text);

std::string read_text_file(const std::string& path);

}  // namespace netforge
