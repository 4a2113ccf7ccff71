#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace scorenet {

/// Seedable 64-bit generator used by every stochastic operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard library distributions are implementation-defined, so
/// all derived variates (uniform, normal, gamma, ...) are computed here from
/// raw engine output. Results are therefore bitwise reproducible across
/// platforms and standard libraries for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, bound). Lemire-style rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (no cached second variate).
  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);

  std::vector<double> dirichlet(std::span<const double> alpha);

  /// Index drawn from a probability vector (need not be exactly normalized).
  std::size_t categorical(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
};

/// Mix a base seed with stream identifiers (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace scorenet
