#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "aerogen/geom.hpp"

namespace aerogen {

// Deterministic random stream. mt19937_64 supplies the raw bits (its sequence
// is pinned by the standard); all distributions are derived here explicitly so
// results are identical across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static uint64_t mix(uint64_t a, uint64_t b) {
    uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static uint64_t hash_name(std::string_view name) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : name) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  // Derive an independent child stream; used for per-stage / per-rule seeds.
  static Rng stream(uint64_t root, std::string_view name, uint64_t index = 0) {
    return Rng(mix(mix(root, hash_name(name)), index));
  }

  uint64_t next_u64() { return eng_(); }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  uint64_t uniform_index(uint64_t n) {  // [0, n)
    if (n == 0) return 0;
    return static_cast<uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  int uniform_int(int a, int b) {  // inclusive
    return a + static_cast<int>(uniform_index(static_cast<uint64_t>(b - a + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    // Box-Muller, cosine branch only; two uniforms per draw keeps the stream
    // position independent of how many normals were consumed before.
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  Vec3 in_unit_ball() {
    for (;;) {
      Vec3 v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      if (v.norm2() <= 1.0) return v;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace aerogen
