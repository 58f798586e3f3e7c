#include "leosim/constellation.hpp"

#include <cmath>
#include <numbers>

#include "leosim/error.hpp"

namespace leosim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

int wrap(int value, int modulus) noexcept {
  const int r = value % modulus;
  return r < 0 ? r + modulus : r;
}

}  // namespace

void ConstellationParams::validate() const {
  if (n_planes < 2) throw Error(ErrorCode::InvalidArgument, "n_planes must be >= 2");
  if (sats_per_plane < 3) throw Error(ErrorCode::InvalidArgument, "sats_per_plane must be >= 3");
  if (!(altitude_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "altitude_km must be > 0");
  if (!(inclination_deg > 0.0 && inclination_deg <= 90.0))
    throw Error(ErrorCode::InvalidArgument, "inclination_deg must be in (0, 90]");
  if (!(polar_threshold_deg > 0.0 && polar_threshold_deg < 90.0))
    throw Error(ErrorCode::InvalidArgument, "polar_threshold_deg must be in (0, 90)");
  if (!(earth_radius_km > 0.0)) throw Error(ErrorCode::InvalidArgument, "earth_radius_km must be > 0");
  if (!(light_speed_km_s > 0.0))
    throw Error(ErrorCode::InvalidArgument, "light_speed_km_s must be > 0");
}

std::string to_string(NodeId node) {
  return "(" + std::to_string(node.plane) + "," + std::to_string(node.slot) + ")";
}

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::Up:
      return "up";
    case Direction::Down:
      return "down";
    case Direction::Left:
      return "left";
    case Direction::Right:
      return "right";
  }
  return "?";
}

Constellation::Constellation(const ConstellationParams& params) : params_(params) {
  params_.validate();
}

bool Constellation::valid(NodeId node) const noexcept {
  return node.plane >= 0 && node.plane < params_.n_planes && node.slot >= 0 &&
         node.slot < params_.sats_per_plane;
}

void Constellation::require_valid(NodeId node) const {
  if (!valid(node)) {
    throw Error(ErrorCode::InvalidNode, "node " + to_string(node) + " outside " +
                                            std::to_string(params_.n_planes) + "x" +
                                            std::to_string(params_.sats_per_plane) + " grid");
  }
}

double Constellation::slot_phase_deg(int slot) const noexcept {
  // Integer product first so that phases of "round" slots come out exact.
  return 360.0 * static_cast<double>(slot) / static_cast<double>(params_.sats_per_plane);
}

double Constellation::slot_latitude_deg(int slot) const noexcept {
  const double alpha = slot_phase_deg(slot);
  if (params_.inclination_deg == 90.0) {
    // arcsin(sin(alpha)) evaluated piecewise, which keeps threshold comparisons exact.
    if (alpha <= 90.0) return alpha;
    if (alpha <= 270.0) return 180.0 - alpha;
    return alpha - 360.0;
  }
  return std::asin(std::sin(params_.inclination_deg * kDegToRad) * std::sin(alpha * kDegToRad)) /
         kDegToRad;
}

bool Constellation::slot_is_polar(int slot) const noexcept {
  return std::abs(slot_latitude_deg(slot)) > params_.polar_threshold_deg;
}

GeoPosition Constellation::position(NodeId node) const {
  require_valid(node);
  const double alpha = slot_phase_deg(node.slot);
  const bool ascending = alpha <= 90.0 || alpha >= 270.0;
  double lon = node.plane * (180.0 / params_.n_planes);
  if (!ascending) lon -= 180.0;
  if (lon >= 180.0) lon -= 360.0;
  return GeoPosition{slot_latitude_deg(node.slot), lon};
}

bool Constellation::is_polar(NodeId node) const {
  require_valid(node);
  return slot_is_polar(node.slot);
}

std::optional<NodeId> Constellation::neighbor(NodeId node, Direction d) const {
  require_valid(node);
  const int m = params_.sats_per_plane;
  switch (d) {
    case Direction::Up:
      return NodeId{node.plane, wrap(node.slot + 1, m)};
    case Direction::Down:
      return NodeId{node.plane, wrap(node.slot - 1, m)};
    case Direction::Left:
    case Direction::Right: {
      // Same slot on both ends, so one polar test covers the link.
      if (slot_is_polar(node.slot)) return std::nullopt;
      const int p = node.plane + (d == Direction::Right ? 1 : -1);
      // No wrap: planes 0 and N-1 face each other across the counter-rotating seam.
      if (p < 0 || p >= params_.n_planes) return std::nullopt;
      return NodeId{p, node.slot};
    }
  }
  return std::nullopt;
}

NeighborSet Constellation::neighbors(NodeId node) const {
  NeighborSet out;
  for (Direction d : kDirections) out[index(d)] = neighbor(node, d);
  return out;
}

std::optional<Direction> Constellation::direction_between(NodeId a, NodeId b) const {
  require_valid(b);
  for (Direction d : kDirections) {
    if (neighbor(a, d) == b) return d;
  }
  return std::nullopt;
}

double Constellation::intra_plane_length_km() const noexcept {
  const double r = params_.earth_radius_km + params_.altitude_km;
  return 2.0 * r * std::sin(std::numbers::pi / params_.sats_per_plane);
}

double Constellation::inter_plane_length_km(double latitude_deg) const noexcept {
  const double r = params_.earth_radius_km + params_.altitude_km;
  return 2.0 * r * std::sin(std::numbers::pi / (2.0 * params_.n_planes)) *
         std::cos(latitude_deg * kDegToRad);
}

double Constellation::isl_length_km(NodeId a, NodeId b) const {
  const auto d = direction_between(a, b);
  if (!d) {
    throw Error(ErrorCode::Topology,
                "no inter-satellite link between " + to_string(a) + " and " + to_string(b));
  }
  if (is_horizontal(*d)) return inter_plane_length_km(slot_latitude_deg(a.slot));
  return intra_plane_length_km();
}

double Constellation::prop_delay_s(NodeId a, NodeId b) const {
  return isl_length_km(a, b) / params_.light_speed_km_s;
}

Topology::Topology(Constellation constellation, std::optional<Region> region)
    : constellation_(std::move(constellation)), region_(region) {
  if (region_) {
    constellation_.require_valid(region_->first);
    constellation_.require_valid(region_->last);
    if (region_->first.plane > region_->last.plane || region_->first.slot > region_->last.slot) {
      throw Error(ErrorCode::InvalidArgument, "region corners " + to_string(region_->first) +
                                                  " and " + to_string(region_->last) +
                                                  " do not span a rectangle");
    }
  }
}

bool Topology::contains(NodeId node) const noexcept {
  if (!constellation_.valid(node)) return false;
  return !region_ || region_->contains(node);
}

std::optional<NodeId> Topology::link(NodeId node, Direction d) const {
  auto next = constellation_.neighbor(node, d);
  if (next && !contains(*next)) return std::nullopt;
  return next;
}

std::array<bool, 4> Topology::live_links(NodeId node) const {
  std::array<bool, 4> live{};
  for (Direction d : kDirections) live[index(d)] = link(node, d).has_value();
  return live;
}

}  // namespace leosim
