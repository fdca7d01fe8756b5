#include "framesched/topology.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace framesched {

namespace {

// Lexicographic order on sorted member lists == order by the lowest link in
// which two distinct masks differ.
bool mask_lex_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  return (a >> std::countr_zero(diff)) & 1u;
}

}  // namespace

InterferenceGraph::InterferenceGraph(
    int link_count, const std::vector<std::pair<LinkId, LinkId>>& conflicts,
    int enumeration_limit)
    : link_count_(link_count) {
  if (link_count < 1 || link_count > kMaxLinks) {
    throw InputError("link_count must lie in 1.." + std::to_string(kMaxLinks));
  }
  if (enumeration_limit < 0 || enumeration_limit > kHardEnumerationCap) {
    throw InputError("enumeration_limit must lie in 0.." +
                     std::to_string(kHardEnumerationCap));
  }
  conflict_masks_.assign(static_cast<std::size_t>(link_count), 0);
  for (const auto& [a, b] : conflicts) {
    check_link(a);
    check_link(b);
    if (a == b) throw InputError("self-conflict on link " + std::to_string(a));
    conflict_masks_[a - 1] |= 1ull << (b - 1);
    conflict_masks_[b - 1] |= 1ull << (a - 1);
  }

  if (link_count > enumeration_limit) return;

  const std::uint64_t full = (link_count == 64)
                                 ? ~0ull
                                 : ((1ull << link_count) - 1);
  for (std::uint64_t m = 1; m <= full; ++m) {
    bool independent = true;
    for (std::uint64_t rest = m; rest && independent;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      if (conflict_masks_[l] & m) independent = false;
    }
    if (!independent) continue;
    bool maximal = true;
    for (std::uint64_t cand = full & ~m; cand && maximal;) {
      const int v = std::countr_zero(cand);
      cand &= cand - 1;
      if ((conflict_masks_[v] & m) == 0) maximal = false;
    }
    if (maximal) maximal_.push_back(m);
  }
  std::sort(maximal_.begin(), maximal_.end(), mask_lex_less);
  enumerated_ = true;
}

InterferenceGraph InterferenceGraph::colocated(int link_count) {
  std::vector<std::pair<LinkId, LinkId>> edges;
  for (LinkId a = 1; a <= link_count; ++a) {
    for (LinkId b = a + 1; b <= link_count; ++b) edges.emplace_back(a, b);
  }
  return InterferenceGraph(link_count, edges);
}

bool InterferenceGraph::conflict(LinkId a, LinkId b) const {
  check_link(a);
  check_link(b);
  return (conflict_masks_[a - 1] >> (b - 1)) & 1u;
}

std::uint64_t InterferenceGraph::conflict_mask(LinkId l) const {
  check_link(l);
  return conflict_masks_[l - 1];
}

const std::vector<std::uint64_t>& InterferenceGraph::maximal_activation_masks()
    const {
  if (!enumerated_) {
    throw CapacityError(
        "interference graph exceeds its activation enumeration limit; "
        "exact scheduling is unavailable at this size");
  }
  return maximal_;
}

void InterferenceGraph::check_link(LinkId l) const {
  if (l < 1 || l > link_count_) {
    throw InputError("link index " + std::to_string(l) + " out of range 1.." +
                     std::to_string(link_count_));
  }
}

bool is_independent(const std::vector<LinkId>& links, const InterferenceGraph& g) {
  std::uint64_t mask = 0;
  for (LinkId l : links) {
    g.conflict_mask(l);  // range check
    mask |= 1ull << (l - 1);
  }
  for (LinkId l : links) {
    if (g.conflict_mask(l) & mask) return false;
  }
  return true;
}

bool is_colocated(const InterferenceGraph& g) {
  for (LinkId a = 1; a <= g.link_count(); ++a) {
    for (LinkId b = a + 1; b <= g.link_count(); ++b) {
      if (!g.conflict(a, b)) return false;
    }
  }
  return true;
}

std::vector<Activation> enumerate_activations(const InterferenceGraph& g) {
  std::vector<Activation> out;
  for (std::uint64_t m : g.maximal_activation_masks()) {
    Activation act;
    act.mask = m;
    for (std::uint64_t rest = m; rest;) {
      const int l = std::countr_zero(rest);
      rest &= rest - 1;
      act.links.push_back(l + 1);
    }
    out.push_back(std::move(act));
  }
  return out;
}

InterferenceGraph ten_link_demo_graph() {
  // 3-regular on 10 links; link 1's neighborhood is exactly {2, 4, 7}.
  const std::vector<std::pair<LinkId, LinkId>> edges = {
      {1, 2}, {1, 4}, {1, 7}, {2, 3}, {2, 5},
      {3, 4}, {3, 6}, {4, 8}, {5, 6}, {5, 9},
      {6, 10}, {7, 8}, {7, 10}, {8, 9}, {9, 10},
  };
  return InterferenceGraph(10, edges);
}

}  // namespace framesched
