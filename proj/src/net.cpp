#include "netforge/net.hpp"

#include <algorithm>
#include <charconv>

#include "netforge/error.hpp"

namespace netforge {

namespace {
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
}  // namespace

bool is_valid_net_name(std::string_view name) noexcept {
  if (name.empty() || !is_start(name.front())) return false;
  return std::all_of(name.begin(), name.end(), [](char c) { return is_start(c) || is_digit(c) || c == '.'; });
}

NetRef::NetRef(std::string_view text) {
  if (text.empty()) return;
  if (std::all_of(text.begin(), text.end(), is_digit)) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), number_);
    if (ec != std::errc()) throw Error(Errc::InvalidNetName, "net number out of range: " + std::string(text));
    kind_ = Kind::Numbered;
    return;
  }
  if (!is_valid_net_name(text)) throw Error(Errc::InvalidNetName, "invalid net name '" + std::string(text) + "'");
  kind_ = Kind::Named;
  name_ = std::string(text);
}

NetRef::NetRef(int number) {
  if (number < 0) throw Error(Errc::InvalidNetName, "net numbers must be >= 0, got " + std::to_string(number));
  kind_ = Kind::Numbered;
  number_ = static_cast<std::uint64_t>(number);
}

NetRef NetRef::generated(std::string prefix, std::uint64_t group, std::uint64_t link) {
  if (!prefix.empty() && !is_valid_net_name(prefix)) {
    throw Error(Errc::InvalidNetName, "invalid generated-net prefix '" + prefix + "'");
  }
  NetRef n;
  n.kind_ = Kind::Generated;
  n.name_ = std::move(prefix);
  n.number_ = group;
  n.link_ = link;
  return n;
}

std::string NetRef::str() const {
  switch (kind_) {
    case Kind::Unconnected: return {};
    case Kind::Named: return name_;
    case Kind::Numbered: return std::to_string(number_);
    case Kind::Generated: return name_ + "net_?" + std::to_string(number_) + "_" + std::to_string(link_);
  }
  return {};
}

}  // namespace netforge
