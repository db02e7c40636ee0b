#include "netforge/error.hpp"

namespace netforge {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyName: return "EmptyName";
    case Errc::EmptyPorts: return "EmptyPorts";
    case Errc::InvalidNetName: return "InvalidNetName";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::DuplicateModelName: return "DuplicateModelName";
    case Errc::DuplicateSubcircuitName: return "DuplicateSubcircuitName";
    case Errc::DuplicatePins: return "DuplicatePins";
    case Errc::SubcircuitFrozen: return "SubcircuitFrozen";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownFunction: return "UnknownFunction";
    case Errc::CyclicDependency: return "CyclicDependency";
    case Errc::UnresolvedIdentifier: return "UnresolvedIdentifier";
    case Errc::NonNumericReference: return "NonNumericReference";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NonFiniteResult: return "NonFiniteResult";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::UnknownCorner: return "UnknownCorner";
    case Errc::InvalidNumber: return "InvalidNumber";
    case Errc::PortOutOfRange: return "PortOutOfRange";
    case Errc::SamePort: return "SamePort";
    case Errc::ZeroLength: return "ZeroLength";
    case Errc::EmptyOutName: return "EmptyOutName";
    case Errc::InvalidShape: return "InvalidShape";
    case Errc::PortFnArity: return "PortFnArity";
    case Errc::InvalidProbability: return "InvalidProbability";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::UnknownDirective: return "UnknownDirective";
    case Errc::NoModule: return "NoModule";
    case Errc::MultipleModules: return "MultipleModules";
    case Errc::NoPorts: return "NoPorts";
    case Errc::LintErrors: return "LintErrors";
    case Errc::UnknownDialect: return "UnknownDialect";
    case Errc::DuplicateDialect: return "DuplicateDialect";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {
std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}
}  // namespace

CycleError::CycleError(std::vector<std::string> cycle)
    : Error(Errc::CyclicDependency, "parameters depend on each other: " + join(cycle, " -> ")), cycle_(std::move(cycle)) {}

UnknownCornerError::UnknownCornerError(const std::string& requested, std::vector<std::string> available)
    : Error(Errc::UnknownCorner, "no corner '" + requested + "' (available: " + join(available, ", ") + ")"),
      available_(std::move(available)) {}

}  // namespace netforge
