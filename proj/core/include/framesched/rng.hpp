#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace framesched {

/// Deterministic random stream derived from (master seed, stream name).
///
/// A simulation owns one master seed and splits it into named substreams
/// ("arrivals", "channel", "thinning") so that swapping the scheduler does not
/// perturb the traffic realization of a comparison run. Sampling avoids
/// std::*_distribution on purpose: their output is implementation defined,
/// and we promise bit-identical runs for identical (config, seed).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string_view name);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// True with probability p (p <= 0 never, p >= 1 always).
  bool bernoulli(double p);

  /// Index drawn from the distribution whose cumulative sums are `cdf`
  /// (last entry treated as the total mass).
  int sample_cdf(const double* cdf, int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace framesched
