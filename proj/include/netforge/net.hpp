#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace netforge {

/// A terminal connection: a symbolic name, an auto-numbered node, or the
/// Unconnected marker. Digit-only names normalize to numbered nets, so
/// `NetRef("1") == NetRef(1)`.
///
/// Generated nets are placeholders produced by combinators such as chain();
/// a container turns them into symbolic names (`<prefix>net_<k>_<i>`) when
/// the instances are added, k being the container's chain counter.
class NetRef {
 public:
  enum class Kind { Unconnected, Named, Numbered, Generated };

  NetRef() = default;
  NetRef(std::string_view text);  // NOLINT(google-explicit-constructor)
  NetRef(const char* text) : NetRef(std::string_view(text)) {}          // NOLINT
  NetRef(const std::string& text) : NetRef(std::string_view(text)) {}   // NOLINT
  NetRef(int number);                                                    // NOLINT
  NetRef(std::uint64_t number) : kind_(Kind::Numbered), number_(number) {}  // NOLINT

  static NetRef unconnected() { return {}; }
  static NetRef generated(std::string prefix, std::uint64_t group, std::uint64_t link);

  Kind kind() const noexcept { return kind_; }
  bool is_unconnected() const noexcept { return kind_ == Kind::Unconnected; }
  bool is_generated() const noexcept { return kind_ == Kind::Generated; }

  /// Symbolic name, or the prefix of a generated net.
  const std::string& name() const noexcept { return name_; }
  /// Node number, or the group of a generated net.
  std::uint64_t number() const noexcept { return number_; }
  std::uint64_t link() const noexcept { return link_; }

  /// Text as emitted in a netlist. Unconnected is "", generated placeholders
  /// render as `<prefix>net_?<group>_<link>`.
  std::string str() const;

  friend bool operator==(const NetRef&, const NetRef&) = default;
  friend auto operator<=>(const NetRef&, const NetRef&) = default;

 private:
  Kind kind_ = Kind::Unconnected;
  std::string name_;
  std::uint64_t number_ = 0;
  std::uint64_t link_ = 0;
};

/// `[A-Za-z_][A-Za-z0-9_.]*`
bool is_valid_net_name(std::string_view name) noexcept;

}  // namespace netforge
