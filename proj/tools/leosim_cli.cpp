// Command-line front end. Uses only the C API of libleosim.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leosim/leosim.h"

namespace {

enum class Verbosity { Quiet, Info, Debug };

Verbosity verbosity() {
  const char* env = std::getenv("LEOSIM_LOG");
  if (env == nullptr) return Verbosity::Info;
  const std::string v(env);
  if (v == "quiet" || v == "error") return Verbosity::Quiet;
  if (v == "debug") return Verbosity::Debug;
  return Verbosity::Info;
}

// 2: bad input (config, node, arguments); 3: region cannot route a pair.
int exit_code(leo_status status) {
  switch (status) {
    case LEO_OK:
      return 0;
    case LEO_E_CONFIG:
    case LEO_E_INVALID_ARGUMENT:
    case LEO_E_INVALID_NODE:
    case LEO_E_DEGENERATE_PATH:
      return 2;
    case LEO_E_UNREACHABLE:
      return 3;
    default:
      return 1;
  }
}

int fail(leo_status status) {
  std::cerr << "leosim: " << leo_status_name(status) << ": " << leo_last_error() << '\n';
  return exit_code(status);
}

struct ConfigDeleter {
  void operator()(leo_config* c) const { leo_config_destroy(c); }
};
struct ConstellationDeleter {
  void operator()(leo_constellation* c) const { leo_constellation_destroy(c); }
};
using ConfigPtr = std::unique_ptr<leo_config, ConfigDeleter>;
using ConstellationPtr = std::unique_ptr<leo_constellation, ConstellationDeleter>;

leo_status load(const std::string& path, ConfigPtr& out) {
  leo_config* raw = nullptr;
  const leo_status st = path.empty() ? leo_config_create_default(&raw) : leo_config_load(path.c_str(), &raw);
  out.reset(raw);
  return st;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

bool parse_node(const std::string& text, leo_node& out) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) return false;
  try {
    std::size_t a = 0;
    std::size_t b = 0;
    out.plane = std::stoi(parts[0], &a);
    out.slot = std::stoi(parts[1], &b);
    return a == parts[0].size() && b == parts[1].size();
  } catch (const std::exception&) {
    return false;
  }
}

const char* direction_name(leo_direction d) {
  switch (d) {
    case LEO_DIR_UP:
      return "up";
    case LEO_DIR_DOWN:
      return "down";
    case LEO_DIR_LEFT:
      return "left";
    case LEO_DIR_RIGHT:
      return "right";
    case LEO_DIR_NONE:
      break;
  }
  return "-";
}

int cmd_simulate(const std::string& config_path, const std::string& out_path, int threads) {
  ConfigPtr cfg;
  if (leo_status st = load(config_path, cfg); st != LEO_OK) return fail(st);
  leo_run_summary summary{};
  if (leo_status st = leo_simulate(cfg.get(), out_path.c_str(), threads, &summary); st != LEO_OK) return fail(st);
  if (verbosity() != Verbosity::Quiet) {
    std::cout << "replications=" << summary.replications << " generated=" << summary.mean_generated
              << " delivered=" << summary.mean_delivered << " dropped=" << summary.mean_dropped
              << " mean_e2e_delay_s=" << summary.mean_e2e_delay_s << " ci95_s=" << summary.ci95_halfwidth_s
              << " -> " << out_path << '\n';
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& variable, const std::string& values_text,
              const std::string& policies_text, double threshold_ratio, int replications, int threads,
              const std::string& out_path) {
  ConfigPtr cfg;
  if (leo_status st = load(config_path, cfg); st != LEO_OK) return fail(st);

  std::vector<double> values;
  for (const auto& v : split(values_text, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(v, &used));
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      std::cerr << "leosim: --values: cannot parse '" << v << "'\n";
      return 2;
    }
  }
  std::vector<leo_policy> policies;
  for (const auto& p : split(policies_text, ',')) {
    if (p == "dra") {
      policies.push_back(LEO_POLICY_DRA);
    } else if (p == "probabilistic") {
      policies.push_back(LEO_POLICY_PROBABILISTIC);
    } else {
      std::cerr << "leosim: --policies: unknown policy '" << p << "'\n";
      return 2;
    }
  }

  leo_sweep_spec spec{};
  spec.variable = variable == "n_buffer" ? LEO_SWEEP_N_BUFFER : LEO_SWEEP_LAMBDA_IN;
  spec.values = values.data();
  spec.n_values = values.size();
  spec.threshold_ratio = threshold_ratio;
  spec.policies = policies.data();
  spec.n_policies = policies.size();
  spec.replications = replications;
  spec.threads = threads;
  std::size_t rows = 0;
  if (leo_status st = leo_sweep(cfg.get(), &spec, out_path.c_str(), &rows); st != LEO_OK) return fail(st);
  if (verbosity() != Verbosity::Quiet) std::cout << "sweep rows=" << rows << " -> " << out_path << '\n';
  return 0;
}

int cmd_mesh_solve(const std::string& grid_path, const std::string& out_path) {
  std::size_t rows = 0;
  std::size_t unstable = 0;
  if (leo_status st = leo_mesh_solve_grid(grid_path.c_str(), out_path.c_str(), &rows, &unstable); st != LEO_OK) {
    return fail(st);
  }
  if (verbosity() != Verbosity::Quiet) {
    std::cout << "mesh rows=" << rows << " unstable=" << unstable << " -> " << out_path << '\n';
  }
  return 0;
}

int cmd_route(const std::string& config_path, const std::string& src_text, const std::string& dst_text) {
  leo_node src{};
  leo_node dst{};
  if (!parse_node(src_text, src) || !parse_node(dst_text, dst)) {
    std::cerr << "leosim: nodes must be given as P,S\n";
    return 2;
  }
  ConfigPtr cfg;
  if (leo_status st = load(config_path, cfg); st != LEO_OK) return fail(st);
  leo_constellation* raw = nullptr;
  if (leo_status st = leo_constellation_create(cfg.get(), &raw); st != LEO_OK) return fail(st);
  ConstellationPtr constellation(raw);

  leo_path_spec spec{};
  if (leo_status st = leo_estimate_direction(constellation.get(), src, dst, &spec); st != LEO_OK) return fail(st);
  const char* dh = spec.d_h > 0 ? "east" : spec.d_h < 0 ? "west" : "none";
  const char* dv = spec.d_v > 0 ? "north" : spec.d_v < 0 ? "south" : "none";
  std::cout << "path (" << src.plane << ',' << src.slot << ") -> (" << dst.plane << ',' << dst.slot
            << "): n_h=" << spec.n_h << " n_v=" << spec.n_v << " d_h=" << dh << " d_v=" << dv
            << " crosses_pole=" << (spec.crosses_pole ? "yes" : "no") << '\n';

  double bits = 0.0;
  double rate = 1.0;
  leo_config_get_number(cfg.get(), "packet_size_bits", &bits);
  leo_config_get_number(cfg.get(), "link_rate_bps", &rate);

  std::cout << "hop node      lat_deg  primary secondary\n";
  leo_node cur = src;
  double prop = 0.0;
  int hops = 0;
  const int limit = spec.n_h + spec.n_v;
  while ((cur.plane != dst.plane || cur.slot != dst.slot) && hops < limit) {
    leo_hop_choice choice{};
    if (leo_status st = leo_enhance_direction(constellation.get(), cur, dst, &choice); st != LEO_OK) return fail(st);
    double lat = 0.0;
    leo_node_position(constellation.get(), cur, &lat, nullptr);
    std::ostringstream node;
    node << '(' << cur.plane << ',' << cur.slot << ')';
    std::cout << std::setw(3) << hops + 1 << ' ' << std::left << std::setw(9) << node.str() << std::right
              << std::setw(8) << std::fixed << std::setprecision(2) << lat << std::defaultfloat << "  "
              << std::left << std::setw(8) << direction_name(choice.primary) << direction_name(choice.secondary)
              << std::right << '\n';
    leo_node next{};
    int present = 0;
    if (leo_status st = leo_neighbor(constellation.get(), cur, choice.primary, &next, &present); st != LEO_OK) {
      return fail(st);
    }
    double d = 0.0;
    leo_prop_delay_s(constellation.get(), cur, next, &d);
    prop += d;
    cur = next;
    ++hops;
  }
  if (cur.plane != dst.plane || cur.slot != dst.slot) {
    std::cerr << "leosim: trace did not reach the destination within " << limit << " hops\n";
    return 1;
  }
  std::cout << "arrived after " << hops << " hops: propagation_s=" << std::setprecision(9) << prop
            << " zero_load_delay_s=" << prop + hops * bits / rate << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Datagram routing and congestion-control simulator for polar LEO constellations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int threads = 1;

  auto* simulate = app.add_subcommand("simulate", "Run one experiment configuration");
  simulate->add_option("--config", config_path, "Experiment JSON file")->required();
  simulate->add_option("--out", out_path, "Output CSV")->required();
  simulate->add_option("--threads", threads, "Parallel replications")->check(CLI::PositiveNumber);

  std::string variable;
  std::string values;
  std::string policies = "dra,probabilistic";
  double threshold_ratio = 0.75;
  int replications = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep lambda_in or n_buffer across both policies");
  sweep->add_option("--config", config_path, "Experiment JSON file")->required();
  sweep->add_option("--variable", variable, "Swept variable")
      ->required()
      ->check(CLI::IsMember({"lambda_in", "n_buffer"}));
  sweep->add_option("--values", values, "Comma-separated increasing values")->required();
  sweep->add_option("--out", out_path, "Output CSV")->required();
  sweep->add_option("--policies", policies, "Comma-separated policies");
  sweep->add_option("--threshold-ratio", threshold_ratio, "N_threshold / N_buffer for n_buffer sweeps");
  sweep->add_option("--replications", replications, "Override the configured replication count");
  sweep->add_option("--threads", threads, "Parallel replications")->check(CLI::PositiveNumber);

  std::string grid_path;
  auto* mesh = app.add_subcommand("mesh-solve", "Solve the mesh queueing model over a grid");
  mesh->add_option("--grid", grid_path, "Grid JSON file")->required();
  mesh->add_option("--out", out_path, "Output CSV")->required();

  std::string src;
  std::string dst;
  auto* route = app.add_subcommand("route", "Print the path shape and hop-by-hop choices");
  route->add_option("--src", src, "Source node P,S")->required();
  route->add_option("--dst", dst, "Destination node P,S")->required();
  route->add_option("--config", config_path, "Experiment JSON file for constellation parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*simulate) return cmd_simulate(config_path, out_path, threads);
  if (*sweep) {
    return cmd_sweep(config_path, variable, values, policies, threshold_ratio, replications, threads, out_path);
  }
  if (*mesh) return cmd_mesh_solve(grid_path, out_path);
  if (*route) return cmd_route(config_path, src, dst);
  return 2;
}
