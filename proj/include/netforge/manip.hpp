#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netforge/core.hpp"
#include "netforge/random.hpp"

namespace netforge {

/// Ordered batch of instances produced by a combinator. Children can be
/// read and edited in place before the batch is added to a container.
class Manipulation {
 public:
  Manipulation() = default;
  explicit Manipulation(std::vector<Instance> children, std::uint64_t group_count = 0)
      : children_(std::move(children)), group_count_(group_count) {}

  std::size_t size() const noexcept { return children_.size(); }
  bool empty() const noexcept { return children_.empty(); }

  Instance& operator[](std::size_t i) { return children_[i]; }
  const Instance& operator[](std::size_t i) const { return children_[i]; }

  auto begin() noexcept { return children_.begin(); }
  auto end() noexcept { return children_.end(); }
  auto begin() const noexcept { return children_.begin(); }
  auto end() const noexcept { return children_.end(); }

  const std::vector<Instance>& children() const noexcept { return children_; }
  std::vector<Instance>& children() noexcept { return children_; }

  /// Number of generated-net groups in use; concat() offsets by this.
  std::uint64_t group_count() const noexcept { return group_count_; }

  operator std::span<const Instance>() const noexcept { return children_; }  // NOLINT

  friend bool operator==(const Manipulation&, const Manipulation&) = default;

 private:
  std::vector<Instance> children_;
  std::uint64_t group_count_ = 0;
};

/// `n` copies of `source` on its own nets.
Manipulation parallel(const Instance& source, std::size_t n);

struct ChainOptions {
  std::size_t in_port = 0;
  /// Defaults to the last port.
  std::optional<std::size_t> out_port;
  /// Prepended to generated net names.
  std::string net_prefix;
};

/// Daisy chain: instance i's in_port shares a generated net with instance
/// i-1's out_port. The first in_port and last out_port keep the template's
/// nets. Throws ZeroLength, SamePort, PortOutOfRange.
Manipulation chain(const Instance& source, std::size_t n, const ChainOptions& options = {});

/// chain() whose final out_port net is renamed to `out_name`.
/// Throws EmptyOutName in addition to chain()'s errors.
Manipulation named_chain(const Instance& source, std::size_t n, const std::string& out_name,
                         const ChainOptions& options = {});

struct ArrayShape {
  std::size_t rows = 1;
  std::size_t cols = 1;
  bool two_d = false;

  static ArrayShape line(std::size_t length) { return {length, 1, false}; }
  static ArrayShape grid(std::size_t rows, std::size_t cols) { return {rows, cols, true}; }
  std::size_t count() const noexcept { return rows * cols; }
};

/// Position of one array element; `y` is 0 for 1-D arrays.
struct ArrayCoord {
  std::size_t x = 0;
  std::size_t y = 0;
};

using PortFn = std::function<std::vector<NetRef>(const ArrayCoord&)>;

/// Row-major array. `port_fn` may return fewer nets than ports; the rest keep
/// their template nets. Coordinates become formula context `_x`, `_y` (2-D)
/// or `_i` (1-D). Throws InvalidShape, PortFnArity.
Manipulation array(const ArrayShape& shape, const Instance& source, const PortFn& port_fn);

/// Resistor on (Unconnected, GND) with R = 10k.
ComponentRef default_defect();

/// For each child, with probability `p` emits a defect wired from the
/// child's last net to GND right before the child. Throws InvalidProbability.
Manipulation inject(const Manipulation& children, double p, Rng& rng, const std::optional<Instance>& defect = std::nullopt);

Manipulation concat(std::span<const Manipulation> parts);

}  // namespace netforge
