#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace mmn {

/// Counter-based generator: the n-th output of stream s under seed k is a pure
/// function of (k, s, n), so results never depend on which worker ran a stream.
/// Satisfies UniformRandomBitGenerator.
class StreamRng {
public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + kGolden * ++counter_); }

  /// Uniform double in (0, 1).
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Settings shared by every Monte Carlo routine. Work is split into a fixed
/// number of logical streams; stream i always uses StreamRng(seed, i).
struct MonteCarloSettings {
  /// Sample count. For truncated-simplex volume estimates this counts
  /// proposals; for expectations over a truncated prior it counts accepted draws.
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 0x5EED;
  int streams = 64;
  int threads = 0;
  /// Largest acceptable standard error; +inf disables the check.
  double max_std_error = std::numeric_limits<double>::infinity();
  /// Rejection samplers give up below this acceptance rate.
  double min_acceptance = 1e-6;
};

/// Draws theta ~ Dirichlet(alphas) into out.
void sample_dirichlet(StreamRng& rng, std::span<const double> alphas, std::span<double> out);

}  // namespace mmn
