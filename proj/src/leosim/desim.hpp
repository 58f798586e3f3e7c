#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include "leosim/congestion.hpp"
#include "leosim/constellation.hpp"
#include "leosim/routing.hpp"

namespace leosim {

struct SimConfig {
  ConstellationParams constellation;
  Region region{{2, 3}, {7, 9}};
  double lambda_in = 1.5e4;  // packets/s within one flow
  double t_step = 0.1;
  int n_pairs = 10;
  int n_packets = 100;
  int packet_size_bits = 8192;
  double link_rate_bps = 2.5e7;
  PolicyParams policy;
  double generation_duration = 1.0;
  std::uint64_t seed = 1;
  int replications = 20;
  int hop_limit = 0;  // 0 selects 4 * (N + M)

  void validate() const;
  double transmission_time_s() const { return packet_size_bits / link_rate_bps; }
  int effective_hop_limit() const {
    return hop_limit > 0 ? hop_limit : 4 * (constellation.n_planes + constellation.sats_per_plane);
  }
};

struct Packet {
  std::uint64_t id = 0;
  NodeId src;
  NodeId dst;
  double created_at = 0.0;
  double header_metric = 0.0;
  int size_bits = 0;
  int hop_count = 0;
  double queue_wait_accum = 0.0;
  double prop_accum = 0.0;
  // Bookkeeping for the hop in progress.
  double enqueued_at = 0.0;
  std::uint64_t queue_seq = 0;
};

struct FlowDelay {
  double mean_delay_s = 0.0;
  std::uint64_t delivered = 0;
};

// Invariant checks collected while the event loop runs.
struct SimAudit {
  bool time_monotonic = true;
  bool fifo = true;
  double max_decomposition_error_s = 0.0;
  std::uint64_t events = 0;
};

struct SimStats {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t dropped_buffer = 0;
  std::uint64_t dropped_loop = 0;
  double avg_e2e_delay_s = 0.0;
  double avg_prop_delay_s = 0.0;
  double avg_queueing_delay_s = 0.0;
  double avg_hops = 0.0;
  int max_queue_observed = 0;
  double end_time_s = 0.0;
  std::map<std::pair<NodeId, NodeId>, FlowDelay> per_flow;
  SimAudit audit;

  double drop_rate() const {
    return generated == 0 ? 0.0 : static_cast<double>(dropped) / static_cast<double>(generated);
  }
};

// Packet-level engine for one region of the constellation. Each node owns
// four FIFO output buffers served independently at the link rate; packets
// carry the sender's traffic metric to the next node.
class Engine {
 public:
  explicit Engine(const SimConfig& config);

  const SimConfig& config() const noexcept { return config_; }
  const Topology& topology() const noexcept { return topology_; }
  double now() const noexcept { return now_; }

  // Schedules creation of one packet at `src` at absolute time `at`.
  void schedule_packet(NodeId src, NodeId dst, double at);
  // Schedules a traffic-generation window at absolute time `at`.
  void schedule_generation(double at);

  bool step();
  void run_until_idle();

  // Event handlers. `from` is the direction, seen from `node`, of the
  // neighbour that transmitted the packet (absent for freshly created ones).
  void on_arrival(NodeId node, Packet packet, std::optional<Direction> from);
  void on_transmit_complete(NodeId node, Direction d);
  void generate_traffic();

  const NeighborView& view(NodeId node) const;
  SimStats stats() const;
  bool idle() const noexcept { return events_.empty(); }

  void set_delivery_observer(std::function<void(const Packet&, double)> observer) {
    on_deliver_ = std::move(observer);
  }

  // Region nodes in row-major (plane, slot) order.
  const std::vector<NodeId>& region_nodes() const noexcept { return nodes_; }

 private:
  enum class EventKind : std::uint8_t { Create, Arrive, TransmitDone, Generate };

  struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    int node;
    std::int8_t dir;
    std::uint32_t slot;  // packet pool index (Arrive) or pair index (Create)

    bool operator>(const Event& other) const {
      return time != other.time ? time > other.time : seq > other.seq;
    }
  };

  struct NodeState {
    NeighborView view;
    std::array<std::deque<std::uint32_t>, 4> queue;
    std::array<std::uint64_t, 4> next_seq{};
    std::array<std::uint64_t, 4> last_served_seq{};
    std::array<double, 4> tx_started{};
  };

  int node_index(NodeId node) const;
  void push(double time, EventKind kind, int node, int dir, std::uint32_t slot);
  std::uint32_t store(Packet packet);
  void release(std::uint32_t slot);
  void start_transmission(int node, Direction d);
  void deliver(const Packet& packet);
  const HopChoice& hop_choice(int node, int dst) const;
  void build_route_table();

  SimConfig config_;
  Topology topology_;
  std::vector<NodeId> nodes_;
  std::vector<NodeState> state_;
  std::vector<HopChoice> route_table_;  // [node * n + dst]
  std::vector<std::array<double, 4>> prop_delay_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  double t_tx_ = 0.0;
  int hop_limit_ = 0;

  std::vector<Packet> pool_;
  std::vector<std::uint32_t> free_slots_;
  std::vector<std::pair<int, int>> pending_pairs_;
  std::uint64_t next_packet_id_ = 0;

  std::mt19937_64 traffic_rng_;
  std::mt19937_64 decision_rng_;

  std::uint64_t generated_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_buffer_ = 0;
  std::uint64_t dropped_loop_ = 0;
  double sum_delay_ = 0.0;
  double sum_prop_ = 0.0;
  double sum_wait_ = 0.0;
  double sum_hops_ = 0.0;
  int max_queue_ = 0;
  std::map<std::pair<NodeId, NodeId>, std::pair<double, std::uint64_t>> flows_;
  SimAudit audit_;
  std::function<void(const Packet&, double)> on_deliver_;
};

// Runs one replication: generation windows every t_step while
// t < generation_duration, then drains every queue.
SimStats run(const SimConfig& config);

}  // namespace leosim
