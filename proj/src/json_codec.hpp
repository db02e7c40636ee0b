#pragma once

// Private JSON helpers shared by the parameter-file reader, the JSON IR, and
// the build-document loader.

#include <json.hpp>
#include <string>

#include "netforge/params.hpp"

namespace netforge::detail {

using json = nlohmann::ordered_json;

ParamValue param_value_from_json(const json& j, const std::string& path);
json param_value_to_json(const ParamValue& value);

Params params_from_json(const json& j, const std::string& path);
json params_to_json(const Params& params);

/// Parses text into JSON; throws ParseError with the line of the failure.
json parse_json(std::string_view text);

std::string pointer_escape(const std::string& key);

}  // namespace netforge::detail
