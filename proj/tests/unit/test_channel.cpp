#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "framesched/channel.hpp"
#include "framesched/distributions.hpp"
#include "framesched/rng.hpp"
#include "framesched/types.hpp"

using framesched::ChannelKind;
using framesched::ChannelModel;
using framesched::ChannelRealization;
using framesched::ChannelView;
using framesched::DiscreteDistribution;
using framesched::InputError;
using framesched::RngStream;
using framesched::VisibilityError;
using framesched::sample_channel;
using framesched::visible_information;

TEST_CASE("known rates sample their distribution") {
  ChannelModel model = ChannelModel::known({DiscreteDistribution({0, 2}, {0.2, 0.8})});
  CHECK(model.kind() == ChannelKind::kKnown);
  CHECK(model.mean_rates() == std::vector<double>{1.6});
  RngStream rng(41, "channel");
  const int frames = 100'000;
  double sum = 0.0;
  for (int k = 0; k < frames; ++k) {
    auto c = sample_channel(model, 3, rng);
    REQUIRE((c.frame_rate(1) == 0 || c.frame_rate(1) == 2));
    sum += c.frame_rate(1);
  }
  CHECK(std::abs(sum / frames - 1.6) < 0.02);
}

TEST_CASE("per-frame channel with mean one is always on") {
  ChannelModel model = ChannelModel::unknown_per_frame({1.0});
  RngStream rng(43, "channel");
  for (int k = 0; k < 200; ++k) {
    auto c = sample_channel(model, 2, rng);
    REQUIRE(c.frame_rate(1) == 1);
  }
}

TEST_CASE("per-slot outcome frequency matches the mean") {
  ChannelModel model = ChannelModel::unknown_per_slot({0.96});
  RngStream rng(47, "channel");
  const int frames = 100'000;
  const int T = 3;
  long long on = 0;
  for (int k = 0; k < frames; ++k) {
    auto c = sample_channel(model, T, rng);
    for (int t = 1; t <= T; ++t) on += c.slot_outcome(1, t);
  }
  CHECK(std::abs(on / static_cast<double>(frames * T) - 0.96) < 0.005);
}

TEST_CASE("per-slot outcomes carry no slot-to-slot correlation") {
  ChannelModel model = ChannelModel::unknown_per_slot({0.5});
  RngStream rng(53, "channel");
  const int frames = 100'000;
  const int T = 4;
  // Lag-1 autocorrelation across the concatenated outcome stream.
  std::vector<int> stream;
  stream.reserve(static_cast<std::size_t>(frames) * T);
  for (int k = 0; k < frames; ++k) {
    auto c = sample_channel(model, T, rng);
    for (int t = 1; t <= T; ++t) stream.push_back(c.slot_outcome(1, t));
  }
  double n = static_cast<double>(stream.size());
  double mean = 0.0;
  for (int x : stream) mean += x;
  mean /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    var += (stream[i] - mean) * (stream[i] - mean);
    if (i + 1 < stream.size()) cov += (stream[i] - mean) * (stream[i + 1] - mean);
  }
  CHECK(std::abs(cov / var) < 0.01);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ChannelModel::known({}), InputError);
  CHECK_THROWS_AS(ChannelModel::unknown_per_frame({1.2}), InputError);
  CHECK_THROWS_AS(ChannelModel::unknown_per_slot({-0.1}), InputError);
  ChannelModel on_off = ChannelModel::unknown_per_frame({0.5});
  CHECK_THROWS_AS(on_off.rate_distributions(), InputError);
  RngStream rng(1, "channel");
  CHECK_THROWS_AS(sample_channel(on_off, 0, rng), InputError);
}

TEST_CASE("visibility: known rates are readable from slot one") {
  ChannelModel model = ChannelModel::known({DiscreteDistribution::constant(2)});
  RngStream rng(59, "channel");
  auto c = sample_channel(model, 3, rng);
  ChannelView view = visible_information(c, 1);
  CHECK(view.frame_rate(1) == 2);
  CHECK_THROWS_AS(view.slot_outcome(1, 1), VisibilityError);
}

TEST_CASE("visibility: per-frame state hides until the frame ends") {
  ChannelModel model = ChannelModel::unknown_per_frame({0.7});
  RngStream rng(61, "channel");
  auto c = sample_channel(model, 3, rng);
  for (int slot = 1; slot <= 3; ++slot) {
    ChannelView during = visible_information(c, slot);
    CHECK_THROWS_AS(during.frame_rate(1), VisibilityError);
  }
  ChannelView after(c, 3);
  int rate = after.frame_rate(1);
  CHECK((rate == 0 || rate == 1));
}

TEST_CASE("visibility: per-slot feedback unlocks slot by slot") {
  ChannelModel model = ChannelModel::unknown_per_slot({0.5});
  RngStream rng(67, "channel");
  auto c = sample_channel(model, 3, rng);
  ChannelView view = visible_information(c, 2);  // deciding slot 2
  CHECK(view.slots_revealed() == 1);
  CHECK_NOTHROW(view.slot_outcome(1, 1));
  CHECK_THROWS_AS(view.slot_outcome(1, 2), VisibilityError);
  CHECK_THROWS_AS(view.frame_rate(1), VisibilityError);
  view.advance(2);
  CHECK_NOTHROW(view.slot_outcome(1, 2));
  CHECK_THROWS_AS(view.advance(1), InputError);  // cursor cannot move back
  CHECK_THROWS_AS(view.slot_outcome(1, 4), InputError);
  CHECK_THROWS_AS(view.slot_outcome(2, 1), InputError);
}

TEST_CASE("channel kinds have stable display names") {
  CHECK(std::string(to_string(ChannelKind::kKnown)) == "known");
  CHECK(std::string(to_string(ChannelKind::kUnknownPerFrame)) == "per_frame");
  CHECK(std::string(to_string(ChannelKind::kUnknownPerSlot)) == "per_slot");
}
