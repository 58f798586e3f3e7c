#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "leosim/congestion.hpp"
#include "leosim/desim.hpp"
#include "leosim/meshmodel.hpp"

namespace leosim {

// Experiment files are flat JSON objects whose keys mirror SimConfig field
// names; `region` is [[p0, s0], [p1, s1]]. Errors carry the source line.
SimConfig parse_config(std::string_view json_text, const std::string& source_name = "<config>");
SimConfig load_config(const std::filesystem::path& path);

// Numeric fields by configuration key; the region corners are addressed as
// region_first_plane, region_first_slot, region_last_plane, region_last_slot.
// The setter does not re-validate; call SimConfig::validate() afterwards.
void set_config_number(SimConfig& config, std::string_view key, double value);
double get_config_number(const SimConfig& config, std::string_view key);

struct Replication {
  std::uint64_t seed = 0;
  SimStats stats;
};

// Replication k runs with seed = config.seed + k.
std::vector<Replication> run_replications(const SimConfig& config, int threads = 1);

struct Aggregate {
  int replications = 0;
  double mean_e2e_delay_s = 0.0;
  double ci95_halfwidth_s = 0.0;  // Student-t, NaN for a single replication
  double mean_prop_delay_s = 0.0;
  double mean_queueing_delay_s = 0.0;
  double mean_hops = 0.0;
  double mean_generated = 0.0;
  double mean_delivered = 0.0;
  double mean_dropped = 0.0;
  double mean_dropped_buffer = 0.0;
  double mean_dropped_loop = 0.0;
  double mean_drop_rate = 0.0;
  double mean_max_queue = 0.0;
};

Aggregate aggregate(const std::vector<Replication>& reps);

// Half-width of the two-sided 95% Student-t interval of the sample mean.
double ci95_halfwidth(const std::vector<double>& samples);

void write_simulate_csv(std::ostream& out, const SimConfig& config, const std::vector<Replication>& reps);
void write_simulate_csv(const std::filesystem::path& path, const SimConfig& config,
                        const std::vector<Replication>& reps);

enum class SweepVariable { LambdaIn, NBuffer };

std::string_view to_string(SweepVariable v) noexcept;
SweepVariable parse_sweep_variable(std::string_view text);

struct SweepSpec {
  SweepVariable variable = SweepVariable::LambdaIn;
  std::vector<double> values;
  double threshold_ratio = 0.75;
  std::vector<PolicyKind> policies{PolicyKind::DraThreshold, PolicyKind::Probabilistic};
  int replications = 20;

  void validate() const;
};

struct SweepRow {
  SweepVariable variable = SweepVariable::LambdaIn;
  double value = 0.0;
  PolicyKind policy = PolicyKind::DraThreshold;
  SimConfig config;
  std::vector<Replication> reps;
  Aggregate agg;
};

// Applies one sweep point to a base configuration. For NBuffer the threshold
// becomes round(threshold_ratio * N_buffer).
SimConfig sweep_point(const SimConfig& base, const SweepSpec& spec, double value, PolicyKind policy);

std::vector<SweepRow> run_sweep(const SimConfig& base, const SweepSpec& spec, int threads = 1);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

struct MeshGrid {
  std::vector<double> lambda_over_mu;
  std::vector<double> p_h{0.5};
  std::vector<double> p_pref{0.9};
  std::vector<MeshVariant> variants{MeshVariant::ExactFp};
  int hops_h = 3;
  int hops_v = 3;
  double tol = 1e-10;
  int max_iter = 200000;
};

struct MeshRow {
  double lambda_over_mu = 0.0;
  double p_h = 0.0;
  double p_pref = 0.0;
  MeshVariant variant = MeshVariant::ExactFp;
  MeshSolution solution;
  double normalized_delay = 0.0;  // NaN when unstable
};

// Grid files are JSON: lambda_over_mu is a list or {"start", "stop", "count"};
// p_h, p_pref and variant accept a scalar or a list.
MeshGrid parse_mesh_grid(std::string_view json_text, const std::string& source_name = "<grid>");
MeshGrid load_mesh_grid(const std::filesystem::path& path);
std::vector<MeshRow> solve_mesh_grid(const MeshGrid& grid);
void write_mesh_csv(std::ostream& out, const std::vector<MeshRow>& rows);
void write_mesh_csv(const std::filesystem::path& path, const std::vector<MeshRow>& rows);

// Shortest round-trip decimal form, so reruns produce identical bytes.
std::string format_number(double value);

}  // namespace leosim
