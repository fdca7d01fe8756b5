#include "framesched/rng.hpp"

namespace framesched {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string_view name) {
  const std::uint64_t tag = fnv1a(name);
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(tag),
      static_cast<std::uint32_t>(tag >> 32),
  };
  engine_.seed(seq);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() < p;
}

int RngStream::sample_cdf(const double* cdf, int n) {
  const double u = uniform() * cdf[n - 1];
  for (int i = 0; i < n - 1; ++i) {
    if (u < cdf[i]) return i;
  }
  return n - 1;
}

}  // namespace framesched
