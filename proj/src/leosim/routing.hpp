#pragma once

#include <optional>
#include <string>

#include "leosim/constellation.hpp"

namespace leosim {

// East = increasing plane index (Right), North = increasing slot index (Up).
enum class HorizontalHeading { None, East, West };
enum class VerticalHeading { None, North, South };

std::string_view to_string(HorizontalHeading h) noexcept;
std::string_view to_string(VerticalHeading v) noexcept;

// Hop-minimal path shape between two nodes. d_v is the heading of the first
// vertical hop; a path that must step off a polar row and come back has a
// vertical leg that turns around once.
struct PathSpec {
  int n_h = 0;
  int n_v = 0;
  HorizontalHeading d_h = HorizontalHeading::None;
  VerticalHeading d_v = VerticalHeading::None;
  bool crosses_pole = false;

  int total_hops() const noexcept { return n_h + n_v; }
  friend bool operator==(const PathSpec&, const PathSpec&) = default;
};

struct HopChoice {
  Direction primary = Direction::Up;
  std::optional<Direction> secondary;

  friend bool operator==(const HopChoice&, const HopChoice&) = default;
};

// Direction estimation: the minimum-hop path shape over the full constellation
// topology, considering both ways round each plane ring.
PathSpec estimate_direction(const Constellation& constellation, NodeId src, NodeId dst);

// Hop count of estimate_direction, 0 when src == dst.
int hop_distance(const Constellation& constellation, NodeId src, NodeId dst);

// Direction enhancement: label the next-hop directions that keep the packet
// on a minimum-hop path as primary / secondary. Links missing from the
// topology (seam, polar shutdown, region edge) are never offered.
HopChoice enhance_direction(const Topology& topology, NodeId current, NodeId dst,
                            const PathSpec& spec);

// Per-hop recomputation used by the simulator: estimate, then enhance.
HopChoice route_hop(const Topology& topology, NodeId current, NodeId dst);

std::optional<Direction> to_direction(HorizontalHeading h) noexcept;
std::optional<Direction> to_direction(VerticalHeading v) noexcept;

}  // namespace leosim
