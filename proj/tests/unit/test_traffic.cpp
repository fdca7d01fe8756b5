#include <cmath>
#include <vector>

#include "doctest.h"
#include "framesched/distributions.hpp"
#include "framesched/rng.hpp"
#include "framesched/traffic.hpp"
#include "framesched/types.hpp"

using framesched::ArrivalModel;
using framesched::DiscreteDistribution;
using framesched::FrameArrivals;
using framesched::InputError;
using framesched::RngStream;
using framesched::WindowSpec;
using framesched::generate_frame;
using framesched::thin;

namespace {

ArrivalModel bernoulli_frame_start(int links, int frame_length, double mean) {
  return ArrivalModel::frame_start(
      frame_length,
      std::vector<DiscreteDistribution>(static_cast<std::size_t>(links),
                                        DiscreteDistribution::bernoulli(mean)));
}

}  // namespace

TEST_CASE("frame-start model covers the whole frame with one window") {
  auto model = bernoulli_frame_start(2, 3, 0.6);
  CHECK(model.frame_length() == 3);
  CHECK(model.link_count() == 2);
  REQUIRE(model.windows(1).size() == 1);
  const auto& w = model.windows(1)[0];
  CHECK(w.slot == 1);
  CHECK(w.deadline == 3);
  CHECK(w.count.mean() == doctest::Approx(0.6));
  CHECK(model.mean(1) == doctest::Approx(0.6));
  CHECK(model.variance(1) == doctest::Approx(0.24));
  CHECK(model.frame_start_binary());
}

TEST_CASE("multi-window means add up") {
  std::vector<std::vector<WindowSpec>> windows(1);
  windows[0].push_back({1, DiscreteDistribution::bernoulli(0.5), 2});
  windows[0].push_back({3, DiscreteDistribution::constant(2), 4});
  ArrivalModel model(4, windows);
  CHECK(model.mean(1) == doctest::Approx(2.5));
  CHECK(model.variance(1) == doctest::Approx(0.25));
  CHECK_FALSE(model.frame_start_binary());
}

TEST_CASE("window validation: bounds, order, disjointness") {
  auto window = [](int slot, int deadline) {
    return WindowSpec{slot, DiscreteDistribution::constant(1), deadline};
  };
  using Windows = std::vector<std::vector<WindowSpec>>;
  CHECK_THROWS_AS(ArrivalModel(0, Windows{{}}), InputError);
  CHECK_THROWS_AS(ArrivalModel(3, Windows{}), InputError);
  CHECK_THROWS_AS(ArrivalModel(3, Windows{{window(0, 2)}}), InputError);
  CHECK_THROWS_AS(ArrivalModel(3, Windows{{window(2, 4)}}), InputError);
  CHECK_THROWS_AS(ArrivalModel(3, Windows{{window(2, 1)}}), InputError);
  // Overlapping and out-of-order pairs.
  CHECK_THROWS_AS(ArrivalModel(4, Windows{{window(1, 2), window(2, 4)}}), InputError);
  CHECK_THROWS_AS(ArrivalModel(4, Windows{{window(3, 4), window(1, 2)}}), InputError);
  // Disjoint and sorted is fine; queries are range-checked.
  ArrivalModel ok(4, Windows{{window(1, 2), window(3, 4)}});
  CHECK_THROWS_AS(ok.windows(0), InputError);
  CHECK_THROWS_AS(ok.windows(2), InputError);
}

TEST_CASE("realized frames keep only positive counts inside sorted windows") {
  auto model = bernoulli_frame_start(3, 3, 0.6);
  RngStream rng(17, "arrivals");
  int with_packet = 0;
  const int frames = 50'000;
  for (int k = 0; k < frames; ++k) {
    auto frame = generate_frame(model, rng);
    REQUIRE(frame.frame_length == 3);
    REQUIRE(frame.link_count() == 3);
    for (int l = 1; l <= 3; ++l) {
      for (const auto& w : frame.windows[static_cast<std::size_t>(l - 1)]) {
        REQUIRE(w.count > 0);
        REQUIRE(w.slot >= 1);
        REQUIRE(w.deadline <= 3);
      }
      int total = frame.total(l);
      REQUIRE((total == 0 || total == 1));
      with_packet += total;
    }
  }
  // Sample mean of Bernoulli(0.6) over frames*links draws, 5 sigma.
  double n = 3.0 * frames;
  double mean = with_packet / n;
  CHECK(std::abs(mean - 0.6) < 5 * std::sqrt(0.24 / n));
}

TEST_CASE("zero-count draws leave no window behind") {
  ArrivalModel model(2, {{WindowSpec{1, DiscreteDistribution::constant(0), 2}}});
  RngStream rng(1, "arrivals");
  auto frame = generate_frame(model, rng);
  CHECK(frame.windows[0].empty());
  CHECK(frame.total(1) == 0);
  CHECK(frame.window_at(1, 1) == nullptr);
}

TEST_CASE("window_at and count_at resolve slots to their batch") {
  FrameArrivals frame;
  frame.frame_length = 4;
  frame.windows = {{{1, 1, 2}, {4, 2, 4}}};
  CHECK(frame.total(1) == 3);
  REQUIRE(frame.window_at(1, 2) != nullptr);
  CHECK(frame.window_at(1, 2)->slot == 1);
  CHECK(frame.window_at(1, 3) == nullptr);
  REQUIRE(frame.window_at(1, 4) != nullptr);
  CHECK(frame.window_at(1, 4)->count == 2);
  CHECK(frame.count_at(1, 1) == 1);
  CHECK(frame.count_at(1, 2) == 0);
  CHECK(frame.count_at(1, 4) == 2);
}

TEST_CASE("thinning keeps all at p=0 and none at p=1") {
  RngStream rng(23, "thinning");
  CHECK(thin(5, 0.0, rng) == 5);
  CHECK(thin(5, 1.0, rng) == 0);
  CHECK(thin(0, 0.5, rng) == 0);
}

TEST_CASE("thinning mean matches (1-p) per packet") {
  RngStream rng(29, "thinning");
  const int n = 1'000'000;
  long long kept = 0;
  for (int i = 0; i < n; ++i) kept += thin(4, 0.1, rng);
  CHECK(std::abs(kept / static_cast<double>(n) - 3.6) < 0.01);
}

TEST_CASE("thinning consumes one draw per packet") {
  RngStream a(31, "thinning");
  RngStream b(31, "thinning");
  (void)thin(3, 0.5, a);
  for (int i = 0; i < 3; ++i) (void)b.uniform();
  CHECK(a.next_u64() == b.next_u64());
  CHECK_THROWS_AS(thin(-1, 0.5, a), InputError);
  CHECK_THROWS_AS(thin(1, 1.5, a), InputError);
}

TEST_CASE("assumption warnings single out always-empty and never-empty links") {
  auto quiet = bernoulli_frame_start(2, 3, 0.6);
  CHECK(quiet.assumption_warnings().empty());

  ArrivalModel saturated = ArrivalModel::frame_start(
      3, {DiscreteDistribution::constant(1), DiscreteDistribution::bernoulli(0.5)});
  auto warnings = saturated.assumption_warnings();
  CHECK(warnings.size() == 1);

  ArrivalModel silent = ArrivalModel::frame_start(
      3, {DiscreteDistribution::constant(0), DiscreteDistribution::bernoulli(0.5)});
  CHECK(silent.assumption_warnings().size() == 1);
}
