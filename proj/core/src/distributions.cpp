#include "framesched/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace framesched {

DiscreteDistribution::DiscreteDistribution(std::vector<int> values,
                                           std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  if (values_.empty() || values_.size() != probs_.size()) {
    throw InputError("distribution needs matching, non-empty values/probs");
  }
  std::vector<std::size_t> order(values_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  std::vector<int> v(values_.size());
  std::vector<double> p(values_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    v[i] = values_[order[i]];
    p[i] = probs_[order[i]];
  }
  values_ = std::move(v);
  probs_ = std::move(p);

  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0) throw InputError("distribution support must be >= 0");
    if (i > 0 && values_[i] == values_[i - 1]) {
      throw InputError("distribution support values must be distinct");
    }
    if (probs_[i] < 0.0) throw InputError("distribution probabilities must be >= 0");
    total += probs_[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError("distribution probabilities must sum to 1");
  }
  cdf_.resize(probs_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    probs_[i] /= total;
    run += probs_[i];
    cdf_[i] = run;
  }
  cdf_.back() = 1.0;

  for (std::size_t i = 0; i < values_.size(); ++i) mean_ += probs_[i] * values_[i];
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double dev = values_[i] - mean_;
    variance_ += probs_[i] * dev * dev;
  }
}

DiscreteDistribution DiscreteDistribution::bernoulli(double mean) {
  if (mean < 0.0 || mean > 1.0) {
    throw InputError("bernoulli mean must lie in [0, 1]");
  }
  if (mean <= 0.0) return constant(0);
  if (mean >= 1.0) return constant(1);
  return DiscreteDistribution({0, 1}, {1.0 - mean, mean});
}

DiscreteDistribution DiscreteDistribution::constant(int value) {
  return DiscreteDistribution({value}, {1.0});
}

int DiscreteDistribution::sample(RngStream& rng) const {
  return values_[rng.sample_cdf(cdf_.data(), static_cast<int>(cdf_.size()))];
}

double DiscreteDistribution::prob_of(int value) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value) return 0.0;
  return probs_[static_cast<std::size_t>(it - values_.begin())];
}

}  // namespace framesched
