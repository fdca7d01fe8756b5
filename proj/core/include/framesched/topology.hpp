#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "framesched/types.hpp"

namespace framesched {

/// One interference-free set of links, i.e. links that may transmit in the
/// same slot. `links` is sorted ascending.
struct Activation {
  std::vector<LinkId> links;
  std::uint64_t mask = 0;  // bit (l-1) set iff link l is in the set
};

/// Conflict graph over links: an edge {a, b} means a and b may not transmit
/// in the same slot. Immutable after construction and safe to share between
/// threads.
///
/// Maximal activations are precomputed at construction when
/// link_count <= enumeration_limit; beyond that the graph is still usable for
/// conflict queries but enumerate_activations() raises CapacityError.
class InterferenceGraph {
 public:
  static constexpr int kDefaultEnumerationLimit = 20;
  static constexpr int kHardEnumerationCap = 24;
  static constexpr int kMaxLinks = 64;

  InterferenceGraph(int link_count,
                    const std::vector<std::pair<LinkId, LinkId>>& conflicts,
                    int enumeration_limit = kDefaultEnumerationLimit);

  /// Complete conflict graph: exactly one link can transmit per slot.
  static InterferenceGraph colocated(int link_count);

  int link_count() const { return link_count_; }
  bool conflict(LinkId a, LinkId b) const;

  /// Bitmask of links that conflict with l (bit l-1 convention).
  std::uint64_t conflict_mask(LinkId l) const;

  bool activations_enumerated() const { return enumerated_; }

  /// All maximal activations as bitmasks, ordered lexicographically by the
  /// sorted member list. Throws CapacityError when the graph was built above
  /// its enumeration limit.
  const std::vector<std::uint64_t>& maximal_activation_masks() const;

 private:
  void check_link(LinkId l) const;

  int link_count_ = 0;
  bool enumerated_ = false;
  std::vector<std::uint64_t> conflict_masks_;
  std::vector<std::uint64_t> maximal_;
};

/// True iff no two links in the set conflict. Repeated indices are allowed
/// and count once.
bool is_independent(const std::vector<LinkId>& links, const InterferenceGraph& g);

/// True iff every pair of links conflicts, i.e. at most one link can
/// transmit per slot.
bool is_colocated(const InterferenceGraph& g);

/// All maximal activations in deterministic order (lexicographic by sorted
/// member list).
std::vector<Activation> enumerate_activations(const InterferenceGraph& g);

/// The 10-link demo topology used by the bundled experiment configs: a
/// 3-regular graph where link 1 conflicts with exactly links 2, 4 and 7.
InterferenceGraph ten_link_demo_graph();

}  // namespace framesched
