#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace netforge {

/// xoshiro256** seeded through splitmix64. The algorithm is fixed so that a
/// seed reproduces the same netlist on every platform and in every port of
/// this library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept;

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller. Consumes exactly two words per call and
  /// discards the sine branch so each call has a fixed stream cost.
  double standard_normal() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

enum class Distribution { Gauss, Uniform, Lognormal };

std::string_view to_string(Distribution d) noexcept;

/// Distribution descriptor sampled afresh at every evaluation.
/// Gauss(mean, std), Uniform(lo, hi), Lognormal(mu, sigma).
struct RandomSpec {
  Distribution distribution = Distribution::Gauss;
  double a = 0.0;
  double b = 0.0;

  static RandomSpec gauss(double mean, double std) { return {Distribution::Gauss, mean, std}; }
  static RandomSpec uniform(double lo, double hi) { return {Distribution::Uniform, lo, hi}; }
  static RandomSpec lognormal(double mu, double sigma) { return {Distribution::Lognormal, mu, sigma}; }

  /// Throws Error(InvalidSpec) on negative spread, lo > hi, or non-finite arguments.
  void validate() const;

  friend bool operator==(const RandomSpec&, const RandomSpec&) = default;
};

double sample(const RandomSpec& spec, Rng& rng);

}  // namespace netforge
