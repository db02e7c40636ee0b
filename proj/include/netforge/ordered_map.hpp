#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace netforge {

/// Insertion-ordered string-keyed map. Netlists are small enough per scope
/// that linear lookup wins over hashing, and export order must follow
/// insertion order.
template <typename V>
class OrderedMap {
 public:
  using value_type = std::pair<std::string, V>;
  using container = std::vector<value_type>;
  using iterator = typename container::iterator;
  using const_iterator = typename container::const_iterator;

  OrderedMap() = default;
  OrderedMap(std::initializer_list<value_type> init) {
    for (const auto& kv : init) set(kv.first, kv.second);
  }

  /// Inserts or replaces; a replaced key keeps its original position.
  void set(std::string key, V value) {
    if (auto it = find(key); it != entries_.end()) {
      it->second = std::move(value);
    } else {
      entries_.emplace_back(std::move(key), std::move(value));
    }
  }

  /// Inserts only when absent. Returns false if the key already existed.
  bool insert(std::string key, V value) {
    if (contains(key)) return false;
    entries_.emplace_back(std::move(key), std::move(value));
    return true;
  }

  bool erase(std::string_view key) {
    auto it = find(key);
    if (it == entries_.end()) return false;
    entries_.erase(it);
    return true;
  }

  iterator find(std::string_view key) {
    return std::find_if(entries_.begin(), entries_.end(), [&](const auto& kv) { return kv.first == key; });
  }
  const_iterator find(std::string_view key) const {
    return std::find_if(entries_.begin(), entries_.end(), [&](const auto& kv) { return kv.first == key; });
  }

  bool contains(std::string_view key) const { return find(key) != entries_.end(); }

  const V* get(std::string_view key) const {
    auto it = find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }
  V* get(std::string_view key) {
    auto it = find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& kv : entries_) out.push_back(kv.first);
    return out;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  iterator begin() noexcept { return entries_.begin(); }
  iterator end() noexcept { return entries_.end(); }
  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }

  /// Order-sensitive equality.
  friend bool operator==(const OrderedMap& a, const OrderedMap& b) { return a.entries_ == b.entries_; }

 private:
  container entries_;
};

}  // namespace netforge
