#include "framesched/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace framesched {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) fail(where, "unknown key \"" + item.key() + "\"");
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

long long as_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long long>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

/// Scalar broadcast or per-link array.
std::vector<double> per_link_numbers(const json& v, int links, const std::string& where) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(static_cast<std::size_t>(links), v.get<double>());
    return out;
  }
  if (!v.is_array()) fail(where, "expected a number or an array of numbers");
  if (static_cast<int>(v.size()) != links) {
    fail(where, "expected " + std::to_string(links) + " entries, got " +
                    std::to_string(v.size()));
  }
  for (const json& e : v) out.push_back(as_number(e, where));
  return out;
}

DiscreteDistribution parse_count_distribution(const json& v, const std::string& where) {
  // A bare integer is shorthand for a deterministic count.
  if (v.is_number_integer()) {
    try {
      return DiscreteDistribution::constant(static_cast<int>(as_integer(v, where)));
    } catch (const InputError& e) {
      fail(where, e.what());
    }
  }
  if (!v.is_object()) fail(where, "expected a distribution object or an integer");
  const std::string type = v.contains("type") ? as_string(v["type"], where + ".type")
                                              : std::string();
  try {
    if (type == "bernoulli") {
      check_keys(v, where, {"type", "mean"});
      if (!v.contains("mean")) fail(where, "bernoulli needs \"mean\"");
      return DiscreteDistribution::bernoulli(as_number(v["mean"], where + ".mean"));
    }
    if (type == "constant") {
      check_keys(v, where, {"type", "value"});
      if (!v.contains("value")) fail(where, "constant needs \"value\"");
      return DiscreteDistribution::constant(
          static_cast<int>(as_integer(v["value"], where + ".value")));
    }
    if (type == "pmf") {
      check_keys(v, where, {"type", "support", "probs"});
      if (!v.contains("support") || !v.contains("probs")) {
        fail(where, "pmf needs \"support\" and \"probs\"");
      }
      std::vector<int> values;
      for (const json& e : v["support"]) {
        values.push_back(static_cast<int>(as_integer(e, where + ".support")));
      }
      std::vector<double> probs;
      for (const json& e : v["probs"]) probs.push_back(as_number(e, where + ".probs"));
      return DiscreteDistribution(std::move(values), std::move(probs));
    }
  } catch (const InputError& e) {
    fail(where, e.what());
  }
  fail(where, "type must be \"bernoulli\", \"constant\" or \"pmf\"");
}

std::vector<WindowSpec> parse_link_arrivals(const json& v, int frame_length,
                                            const std::string& where) {
  if (!v.is_object()) fail(where, "expected an arrival object");
  if (v.contains("type") && as_string(v["type"], where + ".type") == "windows") {
    check_keys(v, where, {"type", "windows"});
    if (!v.contains("windows") || !v["windows"].is_array()) {
      fail(where, "windows needs a \"windows\" array");
    }
    std::vector<WindowSpec> specs;
    int index = 0;
    for (const json& wj : v["windows"]) {
      const std::string wwhere = where + ".windows[" + std::to_string(index++) + "]";
      if (!wj.is_object()) fail(wwhere, "expected a window object");
      check_keys(wj, wwhere, {"slot", "deadline", "count"});
      if (!wj.contains("slot") || !wj.contains("count")) {
        fail(wwhere, "a window needs \"slot\" and \"count\"");
      }
      WindowSpec spec;
      spec.slot = static_cast<int>(as_integer(wj["slot"], wwhere + ".slot"));
      spec.deadline = wj.contains("deadline")
                          ? static_cast<int>(as_integer(wj["deadline"], wwhere + ".deadline"))
                          : frame_length;
      spec.count = parse_count_distribution(wj["count"], wwhere + ".count");
      specs.push_back(std::move(spec));
    }
    return specs;
  }
  // Any plain count distribution means one frame-start window with the
  // frame-end deadline.
  return {WindowSpec{1, parse_count_distribution(v, where), frame_length}};
}

ArrivalModel parse_arrivals(const json& root, int links, int frame_length) {
  if (root.contains("arrival") == root.contains("arrivals")) {
    fail("arrival", "give exactly one of \"arrival\" (shared) or \"arrivals\" (per link)");
  }
  std::vector<std::vector<WindowSpec>> windows;
  windows.reserve(static_cast<std::size_t>(links));
  if (root.contains("arrival")) {
    const std::vector<WindowSpec> shared =
        parse_link_arrivals(root["arrival"], frame_length, "arrival");
    for (int i = 0; i < links; ++i) windows.push_back(shared);
  } else {
    const json& arr = root["arrivals"];
    if (!arr.is_array() || static_cast<int>(arr.size()) != links) {
      fail("arrivals", "expected an array with one entry per link");
    }
    for (int i = 0; i < links; ++i) {
      windows.push_back(parse_link_arrivals(
          arr[static_cast<std::size_t>(i)], frame_length,
          "arrivals[" + std::to_string(i) + "]"));
    }
  }
  try {
    return ArrivalModel(frame_length, std::move(windows));
  } catch (const InputError& e) {
    fail("arrival", e.what());
  }
}

ChannelModel parse_channel(const json& root, int links) {
  if (!root.contains("channel") || !root["channel"].is_object()) {
    fail("channel", "required object is missing");
  }
  const json& ch = root["channel"];
  if (!ch.contains("kind")) fail("channel", "needs \"kind\"");
  const std::string kind = as_string(ch["kind"], "channel.kind");
  try {
    if (kind == "known") {
      check_keys(ch, "channel", {"kind", "rates"});
      if (!ch.contains("rates")) fail("channel", "known kind needs \"rates\"");
      const json& rates = ch["rates"];
      std::vector<DiscreteDistribution> dists;
      if (rates.is_array()) {
        if (static_cast<int>(rates.size()) != links) {
          fail("channel.rates", "expected one distribution per link");
        }
        for (int i = 0; i < links; ++i) {
          dists.push_back(parse_count_distribution(
              rates[static_cast<std::size_t>(i)],
              "channel.rates[" + std::to_string(i) + "]"));
        }
      } else {
        const DiscreteDistribution shared = parse_count_distribution(rates, "channel.rates");
        dists.assign(static_cast<std::size_t>(links), shared);
      }
      return ChannelModel::known(std::move(dists));
    }
    if (kind == "per_frame" || kind == "per_slot") {
      check_keys(ch, "channel", {"kind", "mean"});
      if (!ch.contains("mean")) fail("channel", kind + " kind needs \"mean\"");
      std::vector<double> means = per_link_numbers(ch["mean"], links, "channel.mean");
      return kind == "per_frame" ? ChannelModel::unknown_per_frame(std::move(means))
                                 : ChannelModel::unknown_per_slot(std::move(means));
    }
  } catch (const InputError& e) {
    fail("channel", e.what());
  }
  fail("channel.kind", "must be \"known\", \"per_frame\" or \"per_slot\"");
}

InterferenceGraph parse_graph(const json& root) {
  const bool named = root.contains("topology");
  const bool colocated = root.contains("colocated");
  const bool explicit_links = root.contains("links");
  if (named + colocated + explicit_links != 1) {
    fail("topology", "give exactly one of \"topology\", \"colocated\" or \"links\"");
  }
  const int enumeration_limit =
      root.contains("enumeration_limit")
          ? static_cast<int>(as_integer(root["enumeration_limit"], "enumeration_limit"))
          : InterferenceGraph::kDefaultEnumerationLimit;
  try {
    if (named) {
      const std::string name = as_string(root["topology"], "topology");
      if (name == "ten_link_demo") return ten_link_demo_graph();
      fail("topology", "unknown name \"" + name + "\" (known: \"ten_link_demo\")");
    }
    if (colocated) {
      return InterferenceGraph::colocated(
          static_cast<int>(as_integer(root["colocated"], "colocated")));
    }
    const int links = static_cast<int>(as_integer(root["links"], "links"));
    std::vector<std::pair<LinkId, LinkId>> conflicts;
    if (root.contains("conflicts")) {
      if (!root["conflicts"].is_array()) fail("conflicts", "expected an array of pairs");
      for (const json& e : root["conflicts"]) {
        if (!e.is_array() || e.size() != 2) fail("conflicts", "each entry must be a pair");
        conflicts.emplace_back(static_cast<int>(as_integer(e[0], "conflicts")),
                               static_cast<int>(as_integer(e[1], "conflicts")));
      }
    }
    return InterferenceGraph(links, conflicts, enumeration_limit);
  } catch (const InputError& e) {
    fail("topology", e.what());
  }
}

SchedulerKind parse_scheduler_kind(const std::string& name) {
  if (name == "max_weight") return SchedulerKind::kMaxWeight;
  if (name == "per_slot_dp") return SchedulerKind::kPerSlotDp;
  if (name == "greedy_colocated") return SchedulerKind::kGreedyColocated;
  fail("scheduler", "must be \"max_weight\", \"per_slot_dp\" or \"greedy_colocated\"");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(root, "top level",
             {"topology", "colocated", "links", "conflicts", "enumeration_limit",
              "frame_length", "arrival", "arrivals", "loss_tolerance", "channel", "w",
              "epsilon", "scheduler", "frames", "seed", "search_node_limit",
              "dp_state_limit", "perframe_deficit", "trajectory_samples",
              "static_support_limit", "static_iterations"});

  InterferenceGraph graph = parse_graph(root);
  const int links = graph.link_count();
  if (!root.contains("frame_length")) fail("frame_length", "required");
  const int frame_length =
      static_cast<int>(as_integer(root["frame_length"], "frame_length"));
  if (frame_length < 1) fail("frame_length", "must be >= 1");

  ArrivalModel arrivals = parse_arrivals(root, links, frame_length);
  ChannelModel channel = parse_channel(root, links);

  ExperimentConfig config(std::move(graph), std::move(arrivals), std::move(channel));
  config.sched.w = root.contains("w") ? per_link_numbers(root["w"], links, "w")
                                      : std::vector<double>(links, 1.0);
  if (root.contains("epsilon")) config.sched.epsilon = as_number(root["epsilon"], "epsilon");
  config.sched.p = root.contains("loss_tolerance")
                       ? per_link_numbers(root["loss_tolerance"], links, "loss_tolerance")
                       : std::vector<double>(links, 0.0);
  if (root.contains("scheduler")) {
    config.scheduler = parse_scheduler_kind(as_string(root["scheduler"], "scheduler"));
  } else {
    config.scheduler = config.channel.kind() == ChannelKind::kUnknownPerSlot
                           ? SchedulerKind::kPerSlotDp
                           : SchedulerKind::kMaxWeight;
  }
  if (root.contains("frames")) config.frames = as_integer(root["frames"], "frames");
  if (root.contains("seed")) {
    const long long seed = as_integer(root["seed"], "seed");
    if (seed < 0) fail("seed", "must be >= 0");
    config.seed = static_cast<std::uint64_t>(seed);
  }
  if (root.contains("search_node_limit")) {
    config.sched.search_node_limit = as_integer(root["search_node_limit"], "search_node_limit");
  }
  if (root.contains("dp_state_limit")) {
    config.sched.dp_state_limit = as_integer(root["dp_state_limit"], "dp_state_limit");
  }
  if (root.contains("perframe_deficit")) {
    const std::string mode = as_string(root["perframe_deficit"], "perframe_deficit");
    if (mode == "attempts") {
      config.sched.perframe_deficit = PerFrameDeficitMode::kAttempts;
    } else if (mode == "successes") {
      config.sched.perframe_deficit = PerFrameDeficitMode::kSuccesses;
    } else {
      fail("perframe_deficit", "must be \"attempts\" or \"successes\"");
    }
  }
  if (root.contains("trajectory_samples")) {
    config.trajectory_samples = as_integer(root["trajectory_samples"], "trajectory_samples");
  }
  if (root.contains("static_support_limit")) {
    config.static_support_limit =
        as_integer(root["static_support_limit"], "static_support_limit");
  }
  if (root.contains("static_iterations")) {
    config.static_iterations = as_integer(root["static_iterations"], "static_iterations");
  }

  try {
    config.validate();
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment_config(text.str());
}

}  // namespace framesched
