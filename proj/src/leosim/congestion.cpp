#include "leosim/congestion.hpp"

#include <string>

#include "leosim/error.hpp"

namespace leosim {

std::string_view to_string(PolicyKind kind) noexcept {
  return kind == PolicyKind::DraThreshold ? "dra" : "probabilistic";
}

PolicyKind parse_policy_kind(std::string_view text) {
  if (text == "dra" || text == "dra_threshold") return PolicyKind::DraThreshold;
  if (text == "probabilistic" || text == "prob") return PolicyKind::Probabilistic;
  throw Error(ErrorCode::InvalidArgument,
              "unknown policy '" + std::string(text) + "' (expected dra or probabilistic)");
}

void PolicyParams::validate() const {
  if (n_threshold <= 0 || n_threshold > n_buffer) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < n_threshold <= n_buffer, got " +
                                                std::to_string(n_threshold) + " and " +
                                                std::to_string(n_buffer));
  }
  auto unit = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!unit(p_pref)) throw Error(ErrorCode::InvalidArgument, "p_pref must be in [0, 1]");
  if (!unit(w_ngbr)) throw Error(ErrorCode::InvalidArgument, "w_ngbr must be in [0, 1]");
  if (!unit(w_buffer)) throw Error(ErrorCode::InvalidArgument, "w_buffer must be in [0, 1]");
}

double outgoing_metric(const NeighborView& view, Direction dest_neighbor, double w_ngbr) {
  double sum = 0.0;
  int live = 0;
  for (Direction d : kDirections) {
    if (d == dest_neighbor || !view.live[index(d)]) continue;
    sum += w_ngbr * view.last_metric[index(d)] + (1.0 - w_ngbr) * view.queue_len[index(d)];
    ++live;
  }
  return live == 0 ? 0.0 : sum / live;
}

double congestion_level(int queue_len, double last_metric, double w_buffer) {
  return w_buffer * queue_len + (1.0 - w_buffer) * last_metric;
}

double primary_probability(double c_primary, double c_secondary, double p_pref) {
  // (c + 1) p / (c + 1) does not always round back to p.
  if (c_primary == c_secondary) return p_pref;
  // Denominator is (1 - p)(c_p + 1) + p (c_s + 1) >= 1 for non-negative levels.
  return (c_secondary + 1.0) * p_pref /
         (c_primary + 1.0 + (c_secondary - c_primary) * p_pref);
}

Direction choose_dra(const NeighborView& view, const HopChoice& choice, const PolicyParams& params) {
  if (view.queue_len[index(choice.primary)] < params.n_threshold) return choice.primary;
  if (choice.secondary && view.queue_len[index(*choice.secondary)] < params.n_threshold) {
    return *choice.secondary;
  }
  return choice.primary;
}

Direction choose_probabilistic(const NeighborView& view, const HopChoice& choice,
                               const PolicyParams& params, double draw) {
  const auto level = [&](Direction d) {
    return congestion_level(view.queue_len[index(d)], view.last_metric[index(d)], params.w_buffer);
  };
  const double c_p = level(choice.primary);
  if (c_p < params.n_threshold || !choice.secondary) return choice.primary;
  const double c_s = level(*choice.secondary);
  return draw < primary_probability(c_p, c_s, params.p_pref) ? choice.primary : *choice.secondary;
}

Direction choose_direction(const NeighborView& view, const HopChoice& choice,
                           const PolicyParams& params, double draw) {
  if (params.kind == PolicyKind::DraThreshold) return choose_dra(view, choice, params);
  return choose_probabilistic(view, choice, params, draw);
}

}  // namespace leosim
