#pragma once

#include <vector>

#include "framesched/rng.hpp"
#include "framesched/types.hpp"

namespace framesched {

/// Finite distribution over non-negative integers, used for both arrival
/// counts and known-channel rates.
class DiscreteDistribution {
 public:
  /// Support values must be distinct non-negative integers; probabilities
  /// non-negative and summing to 1 within 1e-9 (renormalized exactly).
  DiscreteDistribution(std::vector<int> values, std::vector<double> probs);

  /// {0: 1-mean, 1: mean}; mean must lie in [0, 1].
  static DiscreteDistribution bernoulli(double mean);

  /// Point mass at `value`.
  static DiscreteDistribution constant(int value);

  int sample(RngStream& rng) const;

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  int max_value() const { return values_.back(); }
  double prob_of(int value) const;

  const std::vector<int>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<int> values_;   // ascending
  std::vector<double> probs_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

}  // namespace framesched
