#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "radbound/errors.hpp"

namespace radbound {

// Which symmetrization distribution multiplies the data: independent uniform
// signs, or independent standard normals.
enum class Variant { rademacher, gaussian };

[[nodiscard]] inline const char* variant_name(Variant v) {
  return v == Variant::gaussian ? "gaussian" : "rademacher";
}

[[nodiscard]] inline Variant variant_from_name(const std::string& s) {
  if (s == "rademacher") return Variant::rademacher;
  if (s == "gaussian") return Variant::gaussian;
  throw invalid_input("unknown variant: " + s);
}

namespace detail {

// splitmix64 step (Steele et al.), used here as a stateless mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

// Counter-based generator: every draw is a pure function of
// (seed, stream, position). Streams index Monte Carlo trials, so trials can
// be evaluated in any order, in parallel, or re-evaluated in isolation
// without changing a single draw.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(detail::splitmix64(detail::splitmix64(seed) ^ stream)) {}

  std::uint64_t bits(std::uint64_t position) const {
    return detail::splitmix64(detail::splitmix64(base_ ^ (position * 0xD2B74407B1CE6E93ull)));
  }

  // Uniform on [0, 1).
  double uniform(std::uint64_t position) const {
    return static_cast<double>(bits(position) >> 11) * 0x1.0p-53;
  }

  // +1 or -1 with equal probability.
  double sign(std::uint64_t position) const {
    return (bits(position) >> 63) ? 1.0 : -1.0;
  }

  // Standard normal via the Box-Muller transform; consumes the uniform
  // positions (2p, 2p+1), so normal and uniform draws never overlap when a
  // caller sticks to one kind per stream.
  double normal(std::uint64_t position) const {
    const double u1 =
        static_cast<double>((bits(2 * position) >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform(2 * position + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  void fill_signs(std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sign(i);
  }

  void fill_normals(std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = normal(i);
  }

  void fill_uniforms(std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = uniform(i);
  }

 private:
  std::uint64_t base_;
};

// The draws a trial-indexed consumer sees: stream = trial index.
[[nodiscard]] inline std::vector<double> sample_signs(std::size_t count, std::uint64_t seed) {
  std::vector<double> out(count);
  CounterRng(seed, 0).fill_signs(out);
  return out;
}

[[nodiscard]] inline std::vector<double> sample_normals(std::size_t count, std::uint64_t seed) {
  std::vector<double> out(count);
  CounterRng(seed, 0).fill_normals(out);
  return out;
}

}  // namespace radbound
