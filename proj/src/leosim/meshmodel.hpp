#pragma once

#include <cstdint>
#include <string_view>

namespace leosim {

// PaperSimplified drops the "+1" terms of the primary-selection law (the
// closed form used in the published analysis); ExactFp keeps them.
enum class MeshVariant { PaperSimplified, ExactFp };

std::string_view to_string(MeshVariant v) noexcept;
MeshVariant parse_mesh_variant(std::string_view text);

// Uniform infinite mesh with per-node Poisson input rate `lambda` and
// exponential per-link service rate `mu`. p_h is the probability that the
// primary direction of a packet is horizontal.
struct MeshParams {
  double p_h = 0.5;
  double p_pref = 0.9;
  double lambda = 1.0;
  double mu = 1.0;
  MeshVariant variant = MeshVariant::ExactFp;

  void validate() const;
};

struct MeshSolution {
  double n_h = 0.0;
  double n_v = 0.0;
  double rho_h = 0.0;
  double rho_v = 0.0;
  double p_right = 0.25;
  double p_up = 0.25;
  bool stable = false;
  int iterations = 0;
};

// Probability that a packet at a node leaves to the right given mean queue
// lengths N_h, N_v. Throws IndeterminateInput for N_h = N_v = 0 under
// PaperSimplified.
double mesh_p_right(double n_h, double n_v, const MeshParams& params);
double mesh_p_up(double n_h, double n_v, const MeshParams& params);

// Damped fixed-point iteration of N = rho / (1 - rho) in both orientations.
MeshSolution solve_fixed_point(const MeshParams& params, double tol = 1e-12, int max_iter = 200000);

// Expected queueing delay of a path in units of the packet transmission time.
double expected_path_delay(const MeshSolution& solution, int hops_h, int hops_v);

struct MicroSimResult {
  double n_h = 0.0;
  double n_v = 0.0;
  bool diverging = false;
  std::int64_t packets = 0;
  double measured_time = 0.0;
};

// Event-driven oracle on a torus_size x torus_size wrap-around mesh: every
// packet is served by exactly one queue and then leaves, carrying its
// sender's traffic metric to the receiving neighbour. Returns time-averaged
// occupancy of horizontal and vertical queues.
MicroSimResult mesh_micro_sim(const MeshParams& params, int torus_size, std::int64_t sim_packets,
                              std::uint64_t seed);

}  // namespace leosim
