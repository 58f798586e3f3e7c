#include "leosim/routing.hpp"

#include <cmath>
#include <limits>
#include <tuple>

#include "leosim/error.hpp"

namespace leosim {

namespace {

int ring_steps(int from, int to, int step, int m) noexcept {
  // Steps needed to go from `from` to `to` moving by `step` (+1 or -1) round a ring of m.
  const int diff = step > 0 ? to - from : from - to;
  return ((diff % m) + m) % m;
}

struct VerticalLeg {
  int hops = 0;
  VerticalHeading first = VerticalHeading::None;
  bool crosses_pole = false;
};

// Walks `steps` slots from `from` in direction `step` and reports whether a
// polar slot is visited, ignoring `skip_first` / `skip_last` slots at the ends.
bool walk_touches_polar(const Constellation& c, int from, int step, int steps, int skip_first,
                        int skip_last) {
  const int m = c.sats_per_plane();
  for (int k = skip_first; k <= steps - skip_last; ++k) {
    const int slot = ((from + step * k) % m + m) % m;
    if (c.slot_is_polar(slot)) return true;
  }
  return false;
}

VerticalHeading heading_of(int step) noexcept {
  return step > 0 ? VerticalHeading::North : VerticalHeading::South;
}

// Candidate ordering: fewer hops, then avoid the polar region, then North.
bool better(const VerticalLeg& a, const VerticalLeg& b) {
  auto key = [](const VerticalLeg& l) {
    return std::make_tuple(l.hops, l.crosses_pole ? 1 : 0,
                           l.first == VerticalHeading::South ? 1 : 0);
  };
  return key(a) < key(b);
}

VerticalLeg best_vertical_leg(const Constellation& c, int s_src, int s_dst, bool needs_crossing) {
  const int m = c.sats_per_plane();
  VerticalLeg best{std::numeric_limits<int>::max() / 2, VerticalHeading::None, true};

  if (!needs_crossing) {
    if (s_src == s_dst) return VerticalLeg{};
    for (int step : {+1, -1}) {
      const int hops = ring_steps(s_src, s_dst, step, m);
      VerticalLeg leg{hops, heading_of(step), walk_touches_polar(c, s_src, step, hops, 1, 1)};
      if (better(leg, best)) best = leg;
    }
    return best;
  }

  // Horizontal hops can only be taken on a non-polar row: visit some non-polar
  // slot `via` (one leg there, one leg on to the destination row).
  for (int via = 0; via < m; ++via) {
    if (c.slot_is_polar(via)) continue;
    for (int step_out : {+1, -1}) {
      const int out_hops = ring_steps(s_src, via, step_out, m);
      if (out_hops == 0 && step_out < 0) continue;
      for (int step_back : {+1, -1}) {
        const int back_hops = ring_steps(via, s_dst, step_back, m);
        if (back_hops == 0 && step_back < 0) continue;
        VerticalLeg leg;
        leg.hops = out_hops + back_hops;
        if (out_hops > 0) {
          leg.first = heading_of(step_out);
        } else if (back_hops > 0) {
          leg.first = heading_of(step_back);
        }
        // Interior slots of the whole walk: the out leg (minus src) and the
        // back leg (minus dst); `via` itself is non-polar.
        leg.crosses_pole = (out_hops > 0 && walk_touches_polar(c, s_src, step_out, out_hops, 1, 1)) ||
                           (back_hops > 0 && walk_touches_polar(c, via, step_back, back_hops, 1, 1));
        if (better(leg, best)) best = leg;
      }
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(HorizontalHeading h) noexcept {
  switch (h) {
    case HorizontalHeading::East:
      return "east";
    case HorizontalHeading::West:
      return "west";
    case HorizontalHeading::None:
      break;
  }
  return "none";
}

std::string_view to_string(VerticalHeading v) noexcept {
  switch (v) {
    case VerticalHeading::North:
      return "north";
    case VerticalHeading::South:
      return "south";
    case VerticalHeading::None:
      break;
  }
  return "none";
}

std::optional<Direction> to_direction(HorizontalHeading h) noexcept {
  switch (h) {
    case HorizontalHeading::East:
      return Direction::Right;
    case HorizontalHeading::West:
      return Direction::Left;
    case HorizontalHeading::None:
      break;
  }
  return std::nullopt;
}

std::optional<Direction> to_direction(VerticalHeading v) noexcept {
  switch (v) {
    case VerticalHeading::North:
      return Direction::Up;
    case VerticalHeading::South:
      return Direction::Down;
    case VerticalHeading::None:
      break;
  }
  return std::nullopt;
}

PathSpec estimate_direction(const Constellation& c, NodeId src, NodeId dst) {
  c.require_valid(src);
  c.require_valid(dst);
  if (src == dst) {
    throw Error(ErrorCode::DegeneratePath, "source and destination are both " + to_string(src));
  }

  PathSpec spec;
  // The seam rules out wrapping round the plane ring, so the horizontal
  // heading is fixed by the sign of the plane difference.
  const int dp = dst.plane - src.plane;
  spec.n_h = std::abs(dp);
  if (dp > 0) spec.d_h = HorizontalHeading::East;
  if (dp < 0) spec.d_h = HorizontalHeading::West;

  const VerticalLeg leg = best_vertical_leg(c, src.slot, dst.slot, spec.n_h > 0);
  spec.n_v = leg.hops;
  spec.d_v = leg.first;
  spec.crosses_pole = leg.crosses_pole;
  return spec;
}

int hop_distance(const Constellation& c, NodeId src, NodeId dst) {
  if (src == dst) {
    c.require_valid(src);
    return 0;
  }
  return estimate_direction(c, src, dst).total_hops();
}

HopChoice enhance_direction(const Topology& topology, NodeId current, NodeId dst,
                            const PathSpec& spec) {
  const Constellation& c = topology.constellation();
  if (current == dst) {
    throw Error(ErrorCode::DegeneratePath, "packet already at " + to_string(dst));
  }
  const int remaining = spec.total_hops();

  auto progresses = [&](Direction d) {
    const auto next = topology.link(current, d);
    return next && hop_distance(c, *next, dst) == remaining - 1;
  };

  std::optional<Direction> horizontal;
  if (auto d = to_direction(spec.d_h); d && progresses(*d)) horizontal = d;

  std::optional<Direction> vertical;
  const auto preferred = to_direction(spec.d_v);
  if (preferred && progresses(*preferred)) {
    vertical = preferred;
  } else {
    // Ties round the ring or a region edge can leave only the other way open.
    for (Direction d : {Direction::Up, Direction::Down}) {
      if (progresses(d)) {
        vertical = d;
        break;
      }
    }
  }

  if (!horizontal && !vertical) {
    throw Error(ErrorCode::DeadEnd, "no live link from " + to_string(current) + " makes progress to " +
                                        to_string(dst));
  }
  if (!horizontal) return HopChoice{*vertical, std::nullopt};
  if (!vertical) return HopChoice{*horizontal, std::nullopt};

  // Both dimensions remain. Moving poleward first puts the horizontal hops on
  // a higher-latitude row where inter-plane links are shorter; moving
  // equatorward, spend the horizontal hops first.
  const double here = std::abs(c.slot_latitude_deg(current.slot));
  const double there = std::abs(c.slot_latitude_deg(c.neighbor(current, *vertical)->slot));
  if (there > here) return HopChoice{*vertical, horizontal};
  return HopChoice{*horizontal, vertical};
}

HopChoice route_hop(const Topology& topology, NodeId current, NodeId dst) {
  return enhance_direction(topology, current, dst,
                           estimate_direction(topology.constellation(), current, dst));
}

}  // namespace leosim
