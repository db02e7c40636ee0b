#include "netforge/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "netforge/error.hpp"

namespace netforge {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
}  // namespace

void Rng::reseed(std::uint64_t seed) noexcept {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

Rng::result_type Rng::next() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::standard_normal() noexcept {
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::Gauss: return "gauss";
    case Distribution::Uniform: return "uniform";
    case Distribution::Lognormal: return "lognormal";
  }
  return "?";
}

void RandomSpec::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(Errc::InvalidSpec, std::string(to_string(distribution)) + " arguments must be finite");
  }
  switch (distribution) {
    case Distribution::Gauss:
      if (b < 0) throw Error(Errc::InvalidSpec, "gauss std must be >= 0");
      break;
    case Distribution::Uniform:
      if (a > b) throw Error(Errc::InvalidSpec, "uniform requires lo <= hi");
      break;
    case Distribution::Lognormal:
      if (b < 0) throw Error(Errc::InvalidSpec, "lognormal sigma must be >= 0");
      break;
  }
}

double sample(const RandomSpec& spec, Rng& rng) {
  spec.validate();
  switch (spec.distribution) {
    case Distribution::Gauss:
      return spec.a + spec.b * rng.standard_normal();
    case Distribution::Uniform: {
      const double u = rng.uniform();
      return spec.a + (spec.b - spec.a) * u;
    }
    case Distribution::Lognormal:
      return std::exp(spec.a + spec.b * rng.standard_normal());
  }
  return 0.0;
}

}  // namespace netforge
