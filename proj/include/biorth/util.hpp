#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace biorth {

// Deterministic RNG.  The gaussian is hand-rolled (polar Box-Muller) so
// streams are reproducible bit-for-bit independent of the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return (eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  std::uint64_t raw() { return eng_(); }

  // Decorrelated child stream (for per-branch RNGs in multistart searches).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t branch) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (branch + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic parallel map: results are collected by index, so the output
// does not depend on scheduling.
template <class Fn>
auto parallel_map(int n, Fn&& fn) -> std::vector<decltype(fn(0))> {
  using R = decltype(fn(0));
  std::vector<R> out(static_cast<std::size_t>(n));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (hw == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::future<void>> futs;
  const int chunk = (n + static_cast<int>(hw) - 1) / static_cast<int>(hw);
  for (unsigned w = 0; w < hw; ++w) {
    const int lo = static_cast<int>(w) * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    futs.push_back(std::async(std::launch::async, [lo, hi, &out, &fn] {
      for (int i = lo; i < hi; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    }));
  }
  for (auto& f : futs) f.get();
  return out;
}

}  // namespace biorth
