#include "leosim/meshmodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "leosim/congestion.hpp"
#include "leosim/error.hpp"

namespace leosim {

namespace {

constexpr double kDamping = 0.5;
constexpr double kExactSeed = 1e-6;

double occupancy(double rho) { return rho / (1.0 - rho); }

}  // namespace

std::string_view to_string(MeshVariant v) noexcept {
  return v == MeshVariant::ExactFp ? "exact" : "paper";
}

MeshVariant parse_mesh_variant(std::string_view text) {
  if (text == "exact" || text == "exact_fp") return MeshVariant::ExactFp;
  if (text == "paper" || text == "paper_simplified") return MeshVariant::PaperSimplified;
  throw Error(ErrorCode::InvalidArgument,
              "unknown mesh variant '" + std::string(text) + "' (expected exact or paper)");
}

void MeshParams::validate() const {
  if (!(p_h >= 0.0 && p_h <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p_h must be in [0, 1]");
  if (!(p_pref >= 0.0 && p_pref <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "p_pref must be in [0, 1]");
  if (!(lambda >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be > 0");
}

double mesh_p_right(double n_h, double n_v, const MeshParams& params) {
  const double p = params.p_pref;
  const double ph = params.p_h;
  if (params.variant == MeshVariant::PaperSimplified) {
    if (n_h == 0.0 && n_v == 0.0) {
      throw Error(ErrorCode::IndeterminateInput,
                  "simplified routing probability is 0/0 at N_h = N_v = 0");
    }
    const double numer = n_v + 2.0 * n_h;
    return 0.5 * p * ph * numer / (n_h * (1.0 + p) + n_v * (2.0 - p)) +
           0.5 * (1.0 - ph) * (1.0 - p) * numer / (n_v * (1.0 + p) + n_h * (2.0 - p));
  }
  // Expected metrics heard from a horizontal and a vertical neighbour: each
  // averages the three queues of that neighbour not pointing back at us.
  const double m_h = (n_h + 2.0 * n_v) / 3.0;
  const double m_v = (n_v + 2.0 * n_h) / 3.0;
  return 0.5 * ph * primary_probability(m_h, m_v, p) +
         0.5 * (1.0 - ph) * (1.0 - primary_probability(m_v, m_h, p));
}

double mesh_p_up(double n_h, double n_v, const MeshParams& params) {
  MeshParams mirrored = params;
  mirrored.p_h = 1.0 - params.p_h;
  return mesh_p_right(n_v, n_h, mirrored);
}

MeshSolution solve_fixed_point(const MeshParams& params, double tol, int max_iter) {
  params.validate();
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  const double load = params.lambda / params.mu;

  MeshSolution sol;
  if (load == 0.0) {
    // Empty system. The simplified law only depends on N_h / N_v, so report
    // its value on the symmetric ray.
    sol.p_right = mesh_p_right(1.0, 1.0, params);
    sol.p_up = mesh_p_up(1.0, 1.0, params);
    sol.stable = true;
    return sol;
  }

  double n_h = kExactSeed;
  double n_v = kExactSeed;
  if (params.variant == MeshVariant::PaperSimplified) {
    const double rho0 = load / 4.0;
    n_h = n_v = rho0 < 1.0 ? occupancy(rho0) : 1.0;
  }

  for (int it = 1; it <= max_iter; ++it) {
    sol.p_right = mesh_p_right(n_h, n_v, params);
    sol.p_up = mesh_p_up(n_h, n_v, params);
    sol.rho_h = load * sol.p_right;
    sol.rho_v = load * sol.p_up;
    sol.n_h = n_h;
    sol.n_v = n_v;
    sol.iterations = it;
    if (sol.rho_h >= 1.0 || sol.rho_v >= 1.0) return sol;  // unstable

    const double target_h = occupancy(sol.rho_h);
    const double target_v = occupancy(sol.rho_v);
    if (std::abs(target_h - n_h) < tol * std::max(1.0, n_h) &&
        std::abs(target_v - n_v) < tol * std::max(1.0, n_v)) {
      sol.stable = true;
      return sol;
    }
    n_h = (1.0 - kDamping) * n_h + kDamping * target_h;
    n_v = (1.0 - kDamping) * n_v + kDamping * target_v;
  }
  return sol;
}

double expected_path_delay(const MeshSolution& solution, int hops_h, int hops_v) {
  if (!solution.stable) {
    throw Error(ErrorCode::UndefinedDelay, "expected delay undefined: mesh load is unstable");
  }
  return hops_h * solution.n_h + hops_v * solution.n_v;
}

namespace {

struct MeshEvent {
  double time;
  std::uint64_t seq;
  int node;  // -1 for the external arrival stream
  int dir;

  bool operator>(const MeshEvent& other) const {
    return time != other.time ? time > other.time : seq > other.seq;
  }
};

class TorusOracle {
 public:
  TorusOracle(const MeshParams& params, int size, std::uint64_t seed)
      : params_(params), size_(size), rng_(seed), queues_(static_cast<std::size_t>(size * size)),
        metrics_(static_cast<std::size_t>(size * size)) {
    policy_.kind = PolicyKind::Probabilistic;
    policy_.n_threshold = 0;
    policy_.n_buffer = std::numeric_limits<int>::max();
    policy_.p_pref = params.p_pref;
    policy_.w_ngbr = 0.0;
    policy_.w_buffer = 0.0;
  }

  MicroSimResult run(std::int64_t sim_packets) {
    MicroSimResult result;
    const int n = size_ * size_;
    const double arrival_rate = params_.lambda * n;
    const std::int64_t warmup = sim_packets / 10;
    const std::int64_t measured = sim_packets - warmup;
    constexpr int kSegments = 4;
    std::array<double, kSegments> seg_area{};
    std::array<double, kSegments> seg_time{};
    const double per_queue = 2.0 * n;  // queues per orientation
    constexpr double kRunawayOccupancy = 1e4;

    std::exponential_distribution<double> next_arrival(arrival_rate);
    push(next_arrival(rng_), -1, 0);

    std::int64_t arrivals = 0;
    double now = 0.0;
    double area_h = 0.0;
    double area_v = 0.0;
    double measure_start = -1.0;

    while (!events_.empty()) {
      const MeshEvent ev = events_.top();
      events_.pop();
      const double dt = ev.time - now;
      if (measure_start >= 0.0) {
        area_h += total_h_ * dt;
        area_v += total_v_ * dt;
        const auto seg = static_cast<std::size_t>(
            std::min<std::int64_t>(kSegments - 1, (arrivals - warmup) * kSegments / measured));
        seg_area[seg] += (total_h_ + total_v_) * dt;
        seg_time[seg] += dt;
      }
      now = ev.time;

      if (ev.node < 0) {
        if (arrivals == sim_packets) break;
        ++arrivals;
        if (arrivals == warmup + 1) measure_start = now;
        arrive(uniform_node(n), now);
        push(now + next_arrival(rng_), -1, 0);
        if ((total_h_ + total_v_) / (2.0 * per_queue) > kRunawayOccupancy) {
          result.diverging = true;
          break;
        }
      } else {
        complete(ev.node, static_cast<Direction>(ev.dir), now);
      }
    }

    result.packets = arrivals;
    result.measured_time = measure_start >= 0.0 ? now - measure_start : 0.0;
    if (result.measured_time > 0.0) {
      result.n_h = area_h / (result.measured_time * per_queue);
      result.n_v = area_v / (result.measured_time * per_queue);
    }
    // Sustained growth between the second and last quarter of the window.
    if (seg_time[1] > 0.0 && seg_time[kSegments - 1] > 0.0) {
      const double early = seg_area[1] / seg_time[1] / (2.0 * per_queue);
      const double late = seg_area[kSegments - 1] / seg_time[kSegments - 1] / (2.0 * per_queue);
      if (late > 1.5 * early && late > 10.0) result.diverging = true;
    }
    return result;
  }

 private:
  void push(double time, int node, int dir) { events_.push(MeshEvent{time, seq_++, node, dir}); }

  int uniform_node(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  int shift(int node, Direction d) const {
    int x = node % size_;
    int y = node / size_;
    switch (d) {
      case Direction::Right:
        x = (x + 1) % size_;
        break;
      case Direction::Left:
        x = (x + size_ - 1) % size_;
        break;
      case Direction::Up:
        y = (y + 1) % size_;
        break;
      case Direction::Down:
        y = (y + size_ - 1) % size_;
        break;
    }
    return y * size_ + x;
  }

  void arrive(int node, double now) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    HopChoice choice;
    const bool horizontal_primary = u(rng_) < params_.p_h;
    const bool flip_primary = u(rng_) < 0.5;
    const bool flip_secondary = u(rng_) < 0.5;
    if (horizontal_primary) {
      choice.primary = flip_primary ? Direction::Left : Direction::Right;
      choice.secondary = flip_secondary ? Direction::Down : Direction::Up;
    } else {
      choice.primary = flip_primary ? Direction::Down : Direction::Up;
      choice.secondary = flip_secondary ? Direction::Left : Direction::Right;
    }

    NeighborView view;
    auto& qs = queues_[static_cast<std::size_t>(node)];
    for (Direction d : kDirections) view.queue_len[index(d)] = static_cast<int>(qs[index(d)].size());
    view.last_metric = metrics_[static_cast<std::size_t>(node)];

    const Direction out = choose_probabilistic(view, choice, policy_, u(rng_));
    auto& q = qs[index(out)];
    q.push_back(outgoing_metric(view, out, policy_.w_ngbr));
    (is_horizontal(out) ? total_h_ : total_v_) += 1.0;
    if (q.size() == 1) start_service(node, out, now);
  }

  void start_service(int node, Direction d, double now) {
    std::exponential_distribution<double> service(params_.mu);
    push(now + service(rng_), node, static_cast<int>(index(d)));
  }

  void complete(int node, Direction d, double now) {
    auto& q = queues_[static_cast<std::size_t>(node)][index(d)];
    const double header = q.front();
    q.pop_front();
    (is_horizontal(d) ? total_h_ : total_v_) -= 1.0;
    metrics_[static_cast<std::size_t>(shift(node, d))][index(opposite(d))] = header;
    if (!q.empty()) start_service(node, d, now);
  }

  MeshParams params_;
  PolicyParams policy_;
  int size_;
  std::mt19937_64 rng_;
  std::vector<std::array<std::deque<double>, 4>> queues_;
  std::vector<std::array<double, 4>> metrics_;
  std::priority_queue<MeshEvent, std::vector<MeshEvent>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  double total_h_ = 0.0;
  double total_v_ = 0.0;
};

}  // namespace

MicroSimResult mesh_micro_sim(const MeshParams& params, int torus_size, std::int64_t sim_packets,
                              std::uint64_t seed) {
  params.validate();
  if (torus_size < 4) throw Error(ErrorCode::InvalidArgument, "torus_size must be >= 4");
  if (sim_packets <= 0) throw Error(ErrorCode::InvalidArgument, "sim_packets must be > 0");
  if (params.lambda == 0.0) return MicroSimResult{};
  return TorusOracle(params, torus_size, seed).run(sim_packets);
}

}  // namespace leosim
