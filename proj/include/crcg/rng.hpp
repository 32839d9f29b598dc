#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace crcg {

// Deterministic splitmix64 stream. Substreams are derived by mixing a label
// into the parent state, so every consumer of randomness can be given its own
// named stream and results stay reproducible regardless of call order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive bounds
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; draws two uniforms per sample so the stream advance is fixed.
  double gauss() {
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  double gauss(double mean, double stddev) { return mean + stddev * gauss(); }

  Rng substream(std::string_view label) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return Rng(mix(state_, h));
  }

  Rng substream(std::uint64_t index) const {
    return Rng(mix(state_, 0x9e3779b97f4a7c15ull + index));
  }

private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    Rng t(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
    t.next_u64();
    return t.next_u64();
  }

  std::uint64_t state_;
};

}  // namespace crcg
