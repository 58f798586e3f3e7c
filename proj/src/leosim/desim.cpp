#include "leosim/desim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "leosim/error.hpp"

namespace leosim {

namespace {

constexpr std::uint64_t kTrafficStream = 0x74726166;
constexpr std::uint64_t kDecisionStream = 0x64656369;

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, message);
}

}  // namespace

void SimConfig::validate() const {
  constellation.validate();
  policy.validate();
  require(region.first.plane <= region.last.plane && region.first.slot <= region.last.slot,
          "region corners must satisfy first <= last in both coordinates");
  require(region.first.plane >= 0 && region.first.slot >= 0 &&
              region.last.plane < constellation.n_planes &&
              region.last.slot < constellation.sats_per_plane,
          "region must lie inside the constellation");
  require(region.node_count() >= 2, "region must contain at least two nodes");
  require(lambda_in >= 0.0, "lambda_in must be >= 0");
  require(t_step > 0.0, "t_step must be > 0");
  require(n_pairs >= 0, "n_pairs must be >= 0");
  require(n_packets >= 0, "n_packets must be >= 0");
  require(packet_size_bits > 0, "packet_size_bits must be > 0");
  require(link_rate_bps > 0.0, "link_rate_bps must be > 0");
  require(generation_duration >= 0.0, "generation_duration must be >= 0");
  require(replications >= 1, "replications must be >= 1");
  require(hop_limit >= 0, "hop_limit must be >= 0");
}

Engine::Engine(const SimConfig& config)
    : config_((config.validate(), config)),
      topology_(Constellation(config.constellation), config.region),
      t_tx_(config.transmission_time_s()),
      hop_limit_(config.effective_hop_limit()),
      traffic_rng_(make_stream(config.seed, kTrafficStream)),
      decision_rng_(make_stream(config.seed, kDecisionStream)) {
  const Region& r = config_.region;
  for (int p = r.first.plane; p <= r.last.plane; ++p) {
    for (int s = r.first.slot; s <= r.last.slot; ++s) nodes_.push_back(NodeId{p, s});
  }
  state_.resize(nodes_.size());
  prop_delay_.resize(nodes_.size());
  const Constellation& c = topology_.constellation();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    state_[i].view.live = topology_.live_links(nodes_[i]);
    for (Direction d : kDirections) {
      if (auto next = topology_.link(nodes_[i], d)) {
        prop_delay_[i][index(d)] = c.prop_delay_s(nodes_[i], *next);
      }
    }
  }
  build_route_table();
}

void Engine::build_route_table() {
  const std::size_t n = nodes_.size();
  route_table_.assign(n * n, HopChoice{});
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      try {
        route_table_[u * n + v] = route_hop(topology_, nodes_[u], nodes_[v]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DeadEnd) throw;
        throw Error(ErrorCode::Unreachable, "destination " + to_string(nodes_[v]) +
                                                " unreachable inside region from " +
                                                to_string(nodes_[u]) + ": " + e.what());
      }
    }
  }
}

int Engine::node_index(NodeId node) const {
  const Region& r = config_.region;
  if (!topology_.contains(node)) {
    throw Error(ErrorCode::InvalidNode, "node " + to_string(node) + " is outside the simulated region");
  }
  return (node.plane - r.first.plane) * (r.last.slot - r.first.slot + 1) + (node.slot - r.first.slot);
}

const HopChoice& Engine::hop_choice(int node, int dst) const {
  return route_table_[static_cast<std::size_t>(node) * nodes_.size() + static_cast<std::size_t>(dst)];
}

const NeighborView& Engine::view(NodeId node) const {
  return state_[static_cast<std::size_t>(node_index(node))].view;
}

void Engine::push(double time, EventKind kind, int node, int dir, std::uint32_t slot) {
  events_.push(Event{time, seq_++, kind, node, static_cast<std::int8_t>(dir), slot});
}

std::uint32_t Engine::store(Packet packet) {
  if (!free_slots_.empty()) {
    const std::uint32_t slot = free_slots_.back();
    free_slots_.pop_back();
    pool_[slot] = packet;
    return slot;
  }
  pool_.push_back(packet);
  return static_cast<std::uint32_t>(pool_.size() - 1);
}

void Engine::release(std::uint32_t slot) { free_slots_.push_back(slot); }

void Engine::schedule_packet(NodeId src, NodeId dst, double at) {
  const int s = node_index(src);
  const int d = node_index(dst);
  push(at, EventKind::Create, s, 0, static_cast<std::uint32_t>(d));
}

void Engine::schedule_generation(double at) { push(at, EventKind::Generate, -1, 0, 0); }

bool Engine::step() {
  if (events_.empty()) return false;
  const Event ev = events_.top();
  events_.pop();
  if (ev.time < now_) audit_.time_monotonic = false;
  now_ = ev.time;
  ++audit_.events;

  switch (ev.kind) {
    case EventKind::Create: {
      Packet p;
      p.id = next_packet_id_++;
      p.src = nodes_[static_cast<std::size_t>(ev.node)];
      p.dst = nodes_[ev.slot];
      p.created_at = now_;
      p.size_bits = config_.packet_size_bits;
      ++generated_;
      on_arrival(p.src, p, std::nullopt);
      break;
    }
    case EventKind::Arrive: {
      const Packet p = pool_[ev.slot];
      release(ev.slot);
      on_arrival(nodes_[static_cast<std::size_t>(ev.node)], p, static_cast<Direction>(ev.dir));
      break;
    }
    case EventKind::TransmitDone:
      on_transmit_complete(nodes_[static_cast<std::size_t>(ev.node)], static_cast<Direction>(ev.dir));
      break;
    case EventKind::Generate:
      generate_traffic();
      break;
  }
  return true;
}

void Engine::run_until_idle() {
  while (step()) {
  }
}

void Engine::on_arrival(NodeId node, Packet packet, std::optional<Direction> from) {
  const int idx = node_index(node);
  NodeState& st = state_[static_cast<std::size_t>(idx)];
  if (from) st.view.last_metric[index(*from)] = packet.header_metric;

  if (node == packet.dst) {
    deliver(packet);
    return;
  }
  if (packet.hop_count >= hop_limit_) {
    ++dropped_loop_;
    return;
  }

  const HopChoice& choice = hop_choice(idx, node_index(packet.dst));
  // One draw per decision whatever the policy, so both policies see the same
  // decision stream for the same seed.
  const double draw = std::uniform_real_distribution<double>(0.0, 1.0)(decision_rng_);
  const Direction out = choose_direction(st.view, choice, config_.policy, draw);

  auto& queue = st.queue[index(out)];
  if (st.view.queue_len[index(out)] >= config_.policy.n_buffer) {
    ++dropped_buffer_;
    return;
  }
  packet.header_metric = outgoing_metric(st.view, out, config_.policy.w_ngbr);
  packet.enqueued_at = now_;
  packet.queue_seq = st.next_seq[index(out)]++;
  queue.push_back(store(packet));
  const int len = ++st.view.queue_len[index(out)];
  max_queue_ = std::max(max_queue_, len);
  if (len == 1) start_transmission(idx, out);
}

void Engine::start_transmission(int node, Direction d) {
  state_[static_cast<std::size_t>(node)].tx_started[index(d)] = now_;
  push(now_ + t_tx_, EventKind::TransmitDone, node, static_cast<int>(index(d)), 0);
}

void Engine::on_transmit_complete(NodeId node, Direction d) {
  const int idx = node_index(node);
  NodeState& st = state_[static_cast<std::size_t>(idx)];
  auto& queue = st.queue[index(d)];
  if (queue.empty()) return;  // server was idle

  const std::uint32_t slot = queue.front();
  queue.pop_front();
  --st.view.queue_len[index(d)];

  Packet& p = pool_[slot];
  if (p.queue_seq != st.last_served_seq[index(d)]) audit_.fifo = false;
  st.last_served_seq[index(d)] = p.queue_seq + 1;
  p.queue_wait_accum += st.tx_started[index(d)] - p.enqueued_at;
  ++p.hop_count;
  const double prop = prop_delay_[static_cast<std::size_t>(idx)][index(d)];
  p.prop_accum += prop;

  const NodeId next = *topology_.link(node, d);
  push(now_ + prop, EventKind::Arrive, node_index(next), static_cast<int>(index(opposite(d))), slot);

  if (!queue.empty()) start_transmission(idx, d);
}

void Engine::generate_traffic() {
  if (config_.lambda_in <= 0.0 || config_.n_pairs == 0 || config_.n_packets == 0) return;
  const auto n = static_cast<std::uint64_t>(nodes_.size());
  const std::uint64_t ordered_pairs = n * (n - 1);
  const auto wanted = std::min<std::uint64_t>(static_cast<std::uint64_t>(config_.n_pairs), ordered_pairs);

  std::uniform_int_distribution<std::uint64_t> pick(0, ordered_pairs - 1);
  std::exponential_distribution<double> gap(config_.lambda_in);
  std::unordered_set<std::uint64_t> taken;
  while (taken.size() < wanted) {
    const std::uint64_t k = pick(traffic_rng_);
    if (!taken.insert(k).second) continue;
    const auto src = static_cast<int>(k / (n - 1));
    auto dst = static_cast<int>(k % (n - 1));
    if (dst >= src) ++dst;
    double t = now_;
    for (int i = 0; i < config_.n_packets; ++i) {
      t += gap(traffic_rng_);
      push(t, EventKind::Create, src, 0, static_cast<std::uint32_t>(dst));
    }
  }
}

void Engine::deliver(const Packet& packet) {
  const double delay = now_ - packet.created_at;
  ++delivered_;
  sum_delay_ += delay;
  sum_prop_ += packet.prop_accum;
  sum_wait_ += packet.queue_wait_accum;
  sum_hops_ += packet.hop_count;
  const double rebuilt = packet.queue_wait_accum + packet.hop_count * t_tx_ + packet.prop_accum;
  audit_.max_decomposition_error_s = std::max(audit_.max_decomposition_error_s, std::abs(delay - rebuilt));
  auto& flow = flows_[{packet.src, packet.dst}];
  flow.first += delay;
  ++flow.second;
  if (on_deliver_) on_deliver_(packet, now_);
}

SimStats Engine::stats() const {
  SimStats s;
  s.generated = generated_;
  s.delivered = delivered_;
  s.dropped_buffer = dropped_buffer_;
  s.dropped_loop = dropped_loop_;
  s.dropped = dropped_buffer_ + dropped_loop_;
  if (delivered_ > 0) {
    const auto n = static_cast<double>(delivered_);
    s.avg_e2e_delay_s = sum_delay_ / n;
    s.avg_prop_delay_s = sum_prop_ / n;
    s.avg_queueing_delay_s = sum_wait_ / n;
    s.avg_hops = sum_hops_ / n;
  }
  s.max_queue_observed = max_queue_;
  s.end_time_s = now_;
  for (const auto& [key, acc] : flows_) {
    s.per_flow[key] = FlowDelay{acc.first / static_cast<double>(acc.second), acc.second};
  }
  s.audit = audit_;
  return s;
}

SimStats run(const SimConfig& config) {
  Engine engine(config);
  for (int k = 0;; ++k) {
    const double t = k * config.t_step;
    if (!(t < config.generation_duration)) break;
    engine.schedule_generation(t);
  }
  engine.run_until_idle();
  return engine.stats();
}

}  // namespace leosim
