#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mctk {

// Deterministic randomness utilities.
//
// std::mt19937_64's output sequence is pinned by the standard, but the
// std::*_distribution adaptors are implementation-defined, so every transform
// used here is hand-rolled. Given the same root seed, all platforms draw the
// same numbers — report bytes stay reproducible.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a root seed and a task counter.
// Every sampling task inside a command gets its own counter, so adding or
// reordering tasks elsewhere does not perturb unrelated draws.
inline std::uint64_t split_seed(std::uint64_t root, std::uint64_t task) {
  return splitmix64(root ^ splitmix64(task + 0x9E3779B97F4A7C15ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection keeps the draw exactly uniform and deterministic.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller (uses two uniforms per pair, caches one).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * u01() - 1.0;
      v = 2.0 * u01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    have_spare_ = true;
    return u * factor;
  }

  // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = u01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = u01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Symmetric Dirichlet(concentration) over n coordinates.
  std::vector<double> dirichlet(std::size_t n, double concentration) {
    std::vector<double> w(n);
    for (;;) {
      double total = 0.0;
      for (auto& v : w) {
        v = gamma(concentration);
        total += v;
      }
      if (total > 0.0 && std::isfinite(total)) {
        for (auto& v : w) v /= total;
        return w;
      }
      // All draws underflowed (tiny concentration); try again.
    }
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mctk
