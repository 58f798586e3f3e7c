#pragma once

#include <array>
#include <string_view>

#include "leosim/constellation.hpp"
#include "leosim/routing.hpp"

namespace leosim {

enum class PolicyKind { DraThreshold, Probabilistic };

std::string_view to_string(PolicyKind kind) noexcept;
PolicyKind parse_policy_kind(std::string_view text);

struct PolicyParams {
  PolicyKind kind = PolicyKind::Probabilistic;
  int n_threshold = 150;
  int n_buffer = 200;
  double p_pref = 0.9;
  double w_ngbr = 0.25;
  double w_buffer = 0.8;

  void validate() const;
};

// What a node knows about its four links: the occupancy of its own output
// buffers and the latest traffic metric heard from each neighbour.
struct NeighborView {
  std::array<int, 4> queue_len{};
  std::array<double, 4> last_metric{};
  std::array<bool, 4> live{true, true, true, true};
};

// Traffic metric piggybacked on a packet sent towards `dest_neighbor`: the
// mean over the other live links of w_ngbr * m_i + (1 - w_ngbr) * N_i.
double outgoing_metric(const NeighborView& view, Direction dest_neighbor, double w_ngbr);

// Blend of own buffer and neighbour metric, c_i = w_buffer * N_i + (1 - w_buffer) * m_i.
double congestion_level(int queue_len, double last_metric, double w_buffer);

// P(choose primary) = (c_s + 1) p / (c_p + 1 + (c_s - c_p) p).
double primary_probability(double c_primary, double c_secondary, double p_pref);

// DRA rule: primary under threshold, else secondary under threshold, else primary.
Direction choose_dra(const NeighborView& view, const HopChoice& choice, const PolicyParams& params);

// Probabilistic rule. `draw` is a uniform [0, 1) variate supplied by the caller.
Direction choose_probabilistic(const NeighborView& view, const HopChoice& choice,
                               const PolicyParams& params, double draw);

Direction choose_direction(const NeighborView& view, const HopChoice& choice,
                           const PolicyParams& params, double draw);

}  // namespace leosim
