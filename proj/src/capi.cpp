#include "leosim/leosim.h"

#include <exception>
#include <new>
#include <string>
#include <vector>

#include "leosim/congestion.hpp"
#include "leosim/constellation.hpp"
#include "leosim/error.hpp"
#include "leosim/experiment.hpp"
#include "leosim/meshmodel.hpp"
#include "leosim/routing.hpp"

struct leo_config {
  leosim::SimConfig value;
};

struct leo_constellation {
  leosim::Constellation value;
};

namespace {

thread_local std::string g_last_error;

leo_status to_status(leosim::ErrorCode code) {
  using leosim::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument:
      return LEO_E_INVALID_ARGUMENT;
    case ErrorCode::InvalidNode:
      return LEO_E_INVALID_NODE;
    case ErrorCode::Topology:
      return LEO_E_TOPOLOGY;
    case ErrorCode::DegeneratePath:
      return LEO_E_DEGENERATE_PATH;
    case ErrorCode::DeadEnd:
      return LEO_E_DEAD_END;
    case ErrorCode::IndeterminateInput:
      return LEO_E_INDETERMINATE;
    case ErrorCode::UndefinedDelay:
      return LEO_E_UNDEFINED_DELAY;
    case ErrorCode::Config:
      return LEO_E_CONFIG;
    case ErrorCode::Unreachable:
      return LEO_E_UNREACHABLE;
    case ErrorCode::Io:
      return LEO_E_IO;
  }
  return LEO_E_INTERNAL;
}

template <typename F>
leo_status guarded(F&& body) noexcept {
  try {
    body();
    return LEO_OK;
  } catch (const leosim::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return LEO_E_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw leosim::Error(leosim::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

leosim::NodeId node_of(leo_node n) { return leosim::NodeId{n.plane, n.slot}; }
leo_node node_of(leosim::NodeId n) { return leo_node{n.plane, n.slot}; }

leosim::Direction direction_of(leo_direction d) {
  if (d < LEO_DIR_UP || d > LEO_DIR_RIGHT) {
    throw leosim::Error(leosim::ErrorCode::InvalidArgument, "direction out of range");
  }
  return static_cast<leosim::Direction>(d);
}

leo_direction direction_of(std::optional<leosim::Direction> d) {
  return d ? static_cast<leo_direction>(leosim::index(*d)) : LEO_DIR_NONE;
}

leosim::PolicyKind policy_of(leo_policy p) {
  switch (p) {
    case LEO_POLICY_DRA:
      return leosim::PolicyKind::DraThreshold;
    case LEO_POLICY_PROBABILISTIC:
      return leosim::PolicyKind::Probabilistic;
  }
  throw leosim::Error(leosim::ErrorCode::InvalidArgument, "policy out of range");
}

leosim::MeshParams mesh_params_of(const leo_mesh_params& p) {
  leosim::MeshParams out{p.p_h, p.p_pref, p.lambda, p.mu, leosim::MeshVariant::ExactFp};
  if (p.variant == LEO_MESH_PAPER_SIMPLIFIED) {
    out.variant = leosim::MeshVariant::PaperSimplified;
  } else if (p.variant != LEO_MESH_EXACT_FP) {
    throw leosim::Error(leosim::ErrorCode::InvalidArgument, "mesh variant out of range");
  }
  return out;
}

}  // namespace

extern "C" {

LEOSIM_API const char* leo_last_error(void) { return g_last_error.c_str(); }

LEOSIM_API const char* leo_status_name(leo_status status) {
  switch (status) {
    case LEO_OK:
      return "ok";
    case LEO_E_INVALID_ARGUMENT:
      return "invalid argument";
    case LEO_E_CONFIG:
      return "configuration error";
    case LEO_E_INVALID_NODE:
      return "invalid node";
    case LEO_E_TOPOLOGY:
      return "topology error";
    case LEO_E_DEGENERATE_PATH:
      return "degenerate path";
    case LEO_E_DEAD_END:
      return "routing dead end";
    case LEO_E_UNREACHABLE:
      return "unreachable destination";
    case LEO_E_INDETERMINATE:
      return "indeterminate input";
    case LEO_E_UNDEFINED_DELAY:
      return "undefined delay";
    case LEO_E_IO:
      return "i/o error";
    case LEO_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

LEOSIM_API leo_status leo_config_create_default(leo_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new leo_config{};
  });
}

LEOSIM_API leo_status leo_config_load(const char* path, leo_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new leo_config{leosim::load_config(path)};
  });
}

LEOSIM_API leo_status leo_config_parse(const char* json_text, leo_config** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new leo_config{leosim::parse_config(json_text)};
  });
}

LEOSIM_API void leo_config_destroy(leo_config* config) { delete config; }

LEOSIM_API leo_status leo_config_set_number(leo_config* config, const char* key, double value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    leosim::SimConfig updated = config->value;
    leosim::set_config_number(updated, key, value);
    updated.validate();
    config->value = updated;
  });
}

LEOSIM_API leo_status leo_config_get_number(const leo_config* config, const char* key, double* out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    *out = leosim::get_config_number(config->value, key);
  });
}

LEOSIM_API leo_status leo_config_set_policy(leo_config* config, leo_policy policy) {
  return guarded([&] {
    require(config, "config");
    config->value.policy.kind = policy_of(policy);
  });
}

LEOSIM_API leo_status leo_constellation_create(const leo_config* config, leo_constellation** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new leo_constellation{leosim::Constellation(config->value.constellation)};
  });
}

LEOSIM_API void leo_constellation_destroy(leo_constellation* constellation) { delete constellation; }

LEOSIM_API leo_status leo_node_position(const leo_constellation* c, leo_node node, double* latitude_deg,
                                        double* longitude_deg) {
  return guarded([&] {
    require(c, "constellation");
    const auto pos = c->value.position(node_of(node));
    if (latitude_deg) *latitude_deg = pos.latitude_deg;
    if (longitude_deg) *longitude_deg = pos.longitude_deg;
  });
}

LEOSIM_API leo_status leo_node_is_polar(const leo_constellation* c, leo_node node, int* polar) {
  return guarded([&] {
    require(c, "constellation");
    require(polar, "polar");
    *polar = c->value.is_polar(node_of(node)) ? 1 : 0;
  });
}

LEOSIM_API leo_status leo_neighbor(const leo_constellation* c, leo_node node, leo_direction direction,
                                   leo_node* out, int* present) {
  return guarded([&] {
    require(c, "constellation");
    require(present, "present");
    const auto next = c->value.neighbor(node_of(node), direction_of(direction));
    *present = next ? 1 : 0;
    if (next && out) *out = node_of(*next);
  });
}

LEOSIM_API leo_status leo_isl_length_km(const leo_constellation* c, leo_node a, leo_node b, double* km) {
  return guarded([&] {
    require(c, "constellation");
    require(km, "km");
    *km = c->value.isl_length_km(node_of(a), node_of(b));
  });
}

LEOSIM_API leo_status leo_prop_delay_s(const leo_constellation* c, leo_node a, leo_node b, double* seconds) {
  return guarded([&] {
    require(c, "constellation");
    require(seconds, "seconds");
    *seconds = c->value.prop_delay_s(node_of(a), node_of(b));
  });
}

LEOSIM_API leo_status leo_estimate_direction(const leo_constellation* c, leo_node src, leo_node dst,
                                             leo_path_spec* out) {
  return guarded([&] {
    require(c, "constellation");
    require(out, "out");
    const auto spec = leosim::estimate_direction(c->value, node_of(src), node_of(dst));
    out->n_h = spec.n_h;
    out->n_v = spec.n_v;
    out->d_h = spec.d_h == leosim::HorizontalHeading::East ? 1 : spec.d_h == leosim::HorizontalHeading::West ? -1 : 0;
    out->d_v = spec.d_v == leosim::VerticalHeading::North ? 1 : spec.d_v == leosim::VerticalHeading::South ? -1 : 0;
    out->crosses_pole = spec.crosses_pole ? 1 : 0;
  });
}

LEOSIM_API leo_status leo_enhance_direction(const leo_constellation* c, leo_node current, leo_node dst,
                                            leo_hop_choice* out) {
  return guarded([&] {
    require(c, "constellation");
    require(out, "out");
    const leosim::Topology topology(c->value);
    const auto choice = leosim::route_hop(topology, node_of(current), node_of(dst));
    out->primary = direction_of(choice.primary);
    out->secondary = direction_of(choice.secondary);
  });
}

LEOSIM_API double leo_primary_probability(double c_primary, double c_secondary, double p_pref) {
  return leosim::primary_probability(c_primary, c_secondary, p_pref);
}

LEOSIM_API leo_status leo_simulate(const leo_config* config, const char* csv_path, int threads,
                                   leo_run_summary* out) {
  return guarded([&] {
    require(config, "config");
    const auto reps = leosim::run_replications(config->value, threads);
    if (csv_path) leosim::write_simulate_csv(csv_path, config->value, reps);
    if (out) {
      const auto a = leosim::aggregate(reps);
      *out = leo_run_summary{a.replications,     a.mean_e2e_delay_s, a.ci95_halfwidth_s,
                             a.mean_prop_delay_s, a.mean_queueing_delay_s, a.mean_generated,
                             a.mean_delivered,   a.mean_dropped,     a.mean_drop_rate};
    }
  });
}

LEOSIM_API leo_status leo_sweep(const leo_config* config, const leo_sweep_spec* spec, const char* csv_path,
                                size_t* rows_written) {
  return guarded([&] {
    require(config, "config");
    require(spec, "spec");
    require(csv_path, "csv_path");
    leosim::SweepSpec s;
    if (spec->variable == LEO_SWEEP_LAMBDA_IN) {
      s.variable = leosim::SweepVariable::LambdaIn;
    } else if (spec->variable == LEO_SWEEP_N_BUFFER) {
      s.variable = leosim::SweepVariable::NBuffer;
    } else {
      throw leosim::Error(leosim::ErrorCode::InvalidArgument, "sweep variable out of range");
    }
    if (spec->n_values > 0) require(spec->values, "values");
    s.values.assign(spec->values, spec->values + spec->n_values);
    s.threshold_ratio = spec->threshold_ratio;
    if (spec->n_policies > 0) {
      require(spec->policies, "policies");
      s.policies.clear();
      for (size_t i = 0; i < spec->n_policies; ++i) s.policies.push_back(policy_of(spec->policies[i]));
    }
    s.replications = spec->replications > 0 ? spec->replications : config->value.replications;
    const auto rows = leosim::run_sweep(config->value, s, spec->threads);
    leosim::write_sweep_csv(csv_path, rows);
    if (rows_written) *rows_written = rows.size();
  });
}

LEOSIM_API leo_status leo_mesh_solve(const leo_mesh_params* params, double tol, int max_iter,
                                     leo_mesh_solution* out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    if (max_iter < 1) throw leosim::Error(leosim::ErrorCode::InvalidArgument, "max_iter must be >= 1");
    const auto s = leosim::solve_fixed_point(mesh_params_of(*params), tol, max_iter);
    *out = leo_mesh_solution{s.n_h, s.n_v, s.rho_h, s.rho_v, s.p_right, s.p_up, s.stable ? 1 : 0, s.iterations};
  });
}

LEOSIM_API leo_status leo_mesh_solve_grid(const char* grid_path, const char* csv_path, size_t* rows_written,
                                          size_t* unstable_rows) {
  return guarded([&] {
    require(grid_path, "grid_path");
    require(csv_path, "csv_path");
    const auto rows = leosim::solve_mesh_grid(leosim::load_mesh_grid(grid_path));
    leosim::write_mesh_csv(csv_path, rows);
    if (rows_written) *rows_written = rows.size();
    if (unstable_rows) {
      size_t n = 0;
      for (const auto& r : rows) n += r.solution.stable ? 0 : 1;
      *unstable_rows = n;
    }
  });
}

}  // extern "C"
