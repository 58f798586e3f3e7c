#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace leosim {

// Walker-star shell of polar orbits. Defaults describe the 12 x 24 shell at
// 600 km used in the experiments.
struct ConstellationParams {
  int n_planes = 12;
  int sats_per_plane = 24;
  double altitude_km = 600.0;
  double inclination_deg = 90.0;
  double polar_threshold_deg = 75.0;
  double earth_radius_km = 6371.0;
  double light_speed_km_s = 299792.458;

  void validate() const;
};

// Virtual-node address: plane p and slot s within the plane.
struct NodeId {
  int plane = 0;
  int slot = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

std::string to_string(NodeId node);

enum class Direction : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr std::array<Direction, 4> kDirections = {Direction::Up, Direction::Down,
                                                         Direction::Left, Direction::Right};

constexpr std::size_t index(Direction d) noexcept { return static_cast<std::size_t>(d); }

constexpr Direction opposite(Direction d) noexcept {
  switch (d) {
    case Direction::Up:
      return Direction::Down;
    case Direction::Down:
      return Direction::Up;
    case Direction::Left:
      return Direction::Right;
    case Direction::Right:
      return Direction::Left;
  }
  return d;
}

// Left/Right links are inter-plane; Up/Down stay within a plane.
constexpr bool is_horizontal(Direction d) noexcept {
  return d == Direction::Left || d == Direction::Right;
}

std::string_view to_string(Direction d) noexcept;

struct GeoPosition {
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
};

using NeighborSet = std::array<std::optional<NodeId>, 4>;

// Static geometry of the virtual-node grid. Immutable after construction, so a
// single instance can be shared by any number of readers.
class Constellation {
 public:
  Constellation() : Constellation(ConstellationParams{}) {}
  explicit Constellation(const ConstellationParams& params);

  const ConstellationParams& params() const noexcept { return params_; }
  int n_planes() const noexcept { return params_.n_planes; }
  int sats_per_plane() const noexcept { return params_.sats_per_plane; }
  int node_count() const noexcept { return params_.n_planes * params_.sats_per_plane; }

  bool valid(NodeId node) const noexcept;
  void require_valid(NodeId node) const;

  // Slot phase measured from the ascending equator crossing, in [0, 360).
  double slot_phase_deg(int slot) const noexcept;
  // Latitude of every node in a slot; all planes share it.
  double slot_latitude_deg(int slot) const noexcept;
  bool slot_is_polar(int slot) const noexcept;

  GeoPosition position(NodeId node) const;
  bool is_polar(NodeId node) const;

  std::optional<NodeId> neighbor(NodeId node, Direction d) const;
  NeighborSet neighbors(NodeId node) const;
  // Direction from a to b when they share an ISL.
  std::optional<Direction> direction_between(NodeId a, NodeId b) const;

  double intra_plane_length_km() const noexcept;
  double inter_plane_length_km(double latitude_deg) const noexcept;
  double isl_length_km(NodeId a, NodeId b) const;
  double prop_delay_s(NodeId a, NodeId b) const;

 private:
  ConstellationParams params_;
};

// Inclusive plane x slot rectangle of simulated nodes.
struct Region {
  NodeId first;
  NodeId last;

  bool contains(NodeId node) const noexcept {
    return node.plane >= first.plane && node.plane <= last.plane && node.slot >= first.slot &&
           node.slot <= last.slot;
  }
  int node_count() const noexcept {
    return (last.plane - first.plane + 1) * (last.slot - first.slot + 1);
  }
};

// Constellation links restricted to an optional region. Links that leave the
// region do not exist.
class Topology {
 public:
  explicit Topology(Constellation constellation, std::optional<Region> region = std::nullopt);

  const Constellation& constellation() const noexcept { return constellation_; }
  const std::optional<Region>& region() const noexcept { return region_; }

  bool contains(NodeId node) const noexcept;
  std::optional<NodeId> link(NodeId node, Direction d) const;
  std::array<bool, 4> live_links(NodeId node) const;

 private:
  Constellation constellation_;
  std::optional<Region> region_;
};

}  // namespace leosim
