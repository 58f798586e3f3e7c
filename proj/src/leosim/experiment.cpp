#include "leosim/experiment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <type_traits>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "leosim/error.hpp"

namespace leosim {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

int line_of_key(std::string_view text, const std::string& key) {
  const std::string quoted = "\"" + key + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(quoted, pos)) != std::string_view::npos) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_at(text, pos);
    pos = after;
  }
  return 1;
}

// Parses a document and reports syntax errors as "<source>:<line>: ...".
json parse_document(std::string_view text, const std::string& source) {
  try {
    json doc = json::parse(text.begin(), text.end());
    if (!doc.is_object()) {
      throw Error(ErrorCode::Config, source + ":1: top level must be a JSON object");
    }
    return doc;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, source + ":" + std::to_string(line_at(text, e.byte == 0 ? 0 : e.byte - 1)) +
                                       ": malformed JSON: " + e.what());
  }
}

class KeyReader {
 public:
  KeyReader(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw Error(ErrorCode::Config,
                source_ + ":" + std::to_string(line_of_key(text_, key)) + ": '" + key + "': " + message);
  }

  double number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key, const json& v) const {
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) fail(key, "out of range");
    return static_cast<int>(i);
  }

  std::uint64_t unsigned_integer(const std::string& key, const json& v) const {
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key, const json& v) const {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }

  NodeId node(const std::string& key, const json& v) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
      fail(key, "expected [plane, slot]");
    }
    return NodeId{v[0].get<int>(), v[1].get<int>()};
  }

  // Points validation failures at the key the message mentions.
  [[noreturn]] void fail_validation(const json& doc, const std::string& message) const {
    for (const auto& [key, _] : doc.items()) {
      if (message.find(key) != std::string::npos) fail(key, message);
    }
    throw Error(ErrorCode::Config, source_ + ":1: " + message);
  }

 private:
  std::string_view text_;
  std::string source_;
};

char* write_double(char* first, char* last, double value) {
  return std::to_chars(first, last, value).ptr;
}

std::string csv_field(double value, bool blank = false) { return blank ? std::string() : format_number(value); }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  char* end = write_double(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

SimConfig parse_config(std::string_view text, const std::string& source) {
  const json doc = parse_document(text, source);
  KeyReader r(text, source);
  SimConfig cfg;
  ConstellationParams& cp = cfg.constellation;
  PolicyParams& pp = cfg.policy;

  using Setter = std::function<void(const std::string&, const json&)>;
  const std::map<std::string, Setter> setters = {
      {"n_planes", [&](auto& k, auto& v) { cp.n_planes = r.integer(k, v); }},
      {"sats_per_plane", [&](auto& k, auto& v) { cp.sats_per_plane = r.integer(k, v); }},
      {"altitude_km", [&](auto& k, auto& v) { cp.altitude_km = r.number(k, v); }},
      {"inclination_deg", [&](auto& k, auto& v) { cp.inclination_deg = r.number(k, v); }},
      {"polar_threshold_deg", [&](auto& k, auto& v) { cp.polar_threshold_deg = r.number(k, v); }},
      {"earth_radius_km", [&](auto& k, auto& v) { cp.earth_radius_km = r.number(k, v); }},
      {"light_speed_km_s", [&](auto& k, auto& v) { cp.light_speed_km_s = r.number(k, v); }},
      {"region",
       [&](auto& k, auto& v) {
         if (!v.is_array() || v.size() != 2) r.fail(k, "expected [[p0, s0], [p1, s1]]");
         cfg.region = Region{r.node(k, v[0]), r.node(k, v[1])};
       }},
      {"lambda_in", [&](auto& k, auto& v) { cfg.lambda_in = r.number(k, v); }},
      {"t_step", [&](auto& k, auto& v) { cfg.t_step = r.number(k, v); }},
      {"n_pairs", [&](auto& k, auto& v) { cfg.n_pairs = r.integer(k, v); }},
      {"n_packets", [&](auto& k, auto& v) { cfg.n_packets = r.integer(k, v); }},
      {"packet_size_bits", [&](auto& k, auto& v) { cfg.packet_size_bits = r.integer(k, v); }},
      {"link_rate_bps", [&](auto& k, auto& v) { cfg.link_rate_bps = r.number(k, v); }},
      {"policy",
       [&](auto& k, auto& v) {
         try {
           pp.kind = parse_policy_kind(r.string(k, v));
         } catch (const Error& e) {
           if (e.code() == ErrorCode::Config) throw;
           r.fail(k, e.what());
         }
       }},
      {"n_threshold", [&](auto& k, auto& v) { pp.n_threshold = r.integer(k, v); }},
      {"n_buffer", [&](auto& k, auto& v) { pp.n_buffer = r.integer(k, v); }},
      {"p_pref", [&](auto& k, auto& v) { pp.p_pref = r.number(k, v); }},
      {"w_ngbr", [&](auto& k, auto& v) { pp.w_ngbr = r.number(k, v); }},
      {"w_buffer", [&](auto& k, auto& v) { pp.w_buffer = r.number(k, v); }},
      {"generation_duration", [&](auto& k, auto& v) { cfg.generation_duration = r.number(k, v); }},
      {"seed", [&](auto& k, auto& v) { cfg.seed = r.unsigned_integer(k, v); }},
      {"replications", [&](auto& k, auto& v) { cfg.replications = r.integer(k, v); }},
      {"hop_limit", [&](auto& k, auto& v) { cfg.hop_limit = r.integer(k, v); }},
  };

  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) r.fail(key, "unknown key");
    it->second(key, value);
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    r.fail_validation(doc, e.what());
  }
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

namespace {

template <typename Config, typename Visit>
bool visit_number(Config& c, std::string_view key, Visit&& visit) {
  auto& cp = c.constellation;
  auto& pp = c.policy;
  if (key == "n_planes") return visit(cp.n_planes), true;
  if (key == "sats_per_plane") return visit(cp.sats_per_plane), true;
  if (key == "altitude_km") return visit(cp.altitude_km), true;
  if (key == "inclination_deg") return visit(cp.inclination_deg), true;
  if (key == "polar_threshold_deg") return visit(cp.polar_threshold_deg), true;
  if (key == "earth_radius_km") return visit(cp.earth_radius_km), true;
  if (key == "light_speed_km_s") return visit(cp.light_speed_km_s), true;
  if (key == "region_first_plane") return visit(c.region.first.plane), true;
  if (key == "region_first_slot") return visit(c.region.first.slot), true;
  if (key == "region_last_plane") return visit(c.region.last.plane), true;
  if (key == "region_last_slot") return visit(c.region.last.slot), true;
  if (key == "lambda_in") return visit(c.lambda_in), true;
  if (key == "t_step") return visit(c.t_step), true;
  if (key == "n_pairs") return visit(c.n_pairs), true;
  if (key == "n_packets") return visit(c.n_packets), true;
  if (key == "packet_size_bits") return visit(c.packet_size_bits), true;
  if (key == "link_rate_bps") return visit(c.link_rate_bps), true;
  if (key == "n_threshold") return visit(pp.n_threshold), true;
  if (key == "n_buffer") return visit(pp.n_buffer), true;
  if (key == "p_pref") return visit(pp.p_pref), true;
  if (key == "w_ngbr") return visit(pp.w_ngbr), true;
  if (key == "w_buffer") return visit(pp.w_buffer), true;
  if (key == "generation_duration") return visit(c.generation_duration), true;
  if (key == "seed") return visit(c.seed), true;
  if (key == "replications") return visit(c.replications), true;
  if (key == "hop_limit") return visit(c.hop_limit), true;
  return false;
}

}  // namespace

void set_config_number(SimConfig& config, std::string_view key, double value) {
  const bool known = visit_number(config, key, [&](auto& field) {
    using T = std::remove_reference_t<decltype(field)>;
    if constexpr (std::is_integral_v<T>) {
      if (value != std::floor(value) || value < static_cast<double>(std::numeric_limits<T>::min()) ||
          value > static_cast<double>(std::numeric_limits<T>::max())) {
        throw Error(ErrorCode::InvalidArgument, "'" + std::string(key) + "' needs an integer value");
      }
    }
    field = static_cast<T>(value);
  });
  if (!known) throw Error(ErrorCode::InvalidArgument, "unknown configuration key '" + std::string(key) + "'");
}

double get_config_number(const SimConfig& config, std::string_view key) {
  double out = 0.0;
  const bool known = visit_number(config, key, [&](const auto& field) { out = static_cast<double>(field); });
  if (!known) throw Error(ErrorCode::InvalidArgument, "unknown configuration key '" + std::string(key) + "'");
  return out;
}

std::vector<Replication> run_replications(const SimConfig& config, int threads) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.replications);
  std::vector<Replication> out(n);
  auto one = [&config](std::size_t k) {
    SimConfig c = config;
    c.seed = config.seed + k;
    return Replication{c.seed, run(c)};
  };
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) out[k] = one(k);
    return out;
  }
  // Results land in replication order regardless of completion order.
  for (std::size_t base = 0; base < n; base += static_cast<std::size_t>(threads)) {
    std::vector<std::future<Replication>> batch;
    for (std::size_t k = base; k < std::min(n, base + static_cast<std::size_t>(threads)); ++k) {
      batch.push_back(std::async(std::launch::async, one, k));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) out[base + i] = batch[i].get();
  }
  return out;
}

double ci95_halfwidth(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(n));
}

Aggregate aggregate(const std::vector<Replication>& reps) {
  Aggregate a;
  a.replications = static_cast<int>(reps.size());
  if (reps.empty()) return a;
  std::vector<double> delays;
  for (const auto& rep : reps) {
    const SimStats& s = rep.stats;
    delays.push_back(s.avg_e2e_delay_s);
    a.mean_e2e_delay_s += s.avg_e2e_delay_s;
    a.mean_prop_delay_s += s.avg_prop_delay_s;
    a.mean_queueing_delay_s += s.avg_queueing_delay_s;
    a.mean_hops += s.avg_hops;
    a.mean_generated += static_cast<double>(s.generated);
    a.mean_delivered += static_cast<double>(s.delivered);
    a.mean_dropped += static_cast<double>(s.dropped);
    a.mean_dropped_buffer += static_cast<double>(s.dropped_buffer);
    a.mean_dropped_loop += static_cast<double>(s.dropped_loop);
    a.mean_drop_rate += s.drop_rate();
    a.mean_max_queue += s.max_queue_observed;
  }
  const auto n = static_cast<double>(reps.size());
  for (double* field : {&a.mean_e2e_delay_s, &a.mean_prop_delay_s, &a.mean_queueing_delay_s, &a.mean_hops,
                        &a.mean_generated, &a.mean_delivered, &a.mean_dropped, &a.mean_dropped_buffer,
                        &a.mean_dropped_loop, &a.mean_drop_rate, &a.mean_max_queue}) {
    *field /= n;
  }
  a.ci95_halfwidth_s = ci95_halfwidth(delays);
  return a;
}

void write_simulate_csv(std::ostream& out, const SimConfig& config, const std::vector<Replication>& reps) {
  out << "row,seed,policy,lambda_in_pkt_per_s,n_buffer_pkts,n_threshold_pkts,generated_pkts,delivered_pkts,"
         "dropped_pkts,dropped_buffer_pkts,dropped_loop_pkts,drop_rate,avg_e2e_delay_s,ci95_halfwidth_s,"
         "avg_prop_delay_s,avg_queueing_delay_s,avg_hops,max_queue_observed_pkts\n";
  const std::string prefix = std::string(to_string(config.policy.kind)) + "," + format_number(config.lambda_in) +
                             "," + std::to_string(config.policy.n_buffer) + "," +
                             std::to_string(config.policy.n_threshold) + ",";
  for (std::size_t k = 0; k < reps.size(); ++k) {
    const SimStats& s = reps[k].stats;
    out << k << ',' << reps[k].seed << ',' << prefix << s.generated << ',' << s.delivered << ',' << s.dropped
        << ',' << s.dropped_buffer << ',' << s.dropped_loop << ',' << format_number(s.drop_rate()) << ','
        << format_number(s.avg_e2e_delay_s) << ",," << format_number(s.avg_prop_delay_s) << ','
        << format_number(s.avg_queueing_delay_s) << ',' << format_number(s.avg_hops) << ','
        << s.max_queue_observed << '\n';
  }
  const Aggregate a = aggregate(reps);
  out << "mean," << config.seed << ',' << prefix << csv_field(a.mean_generated) << ','
      << csv_field(a.mean_delivered) << ',' << csv_field(a.mean_dropped) << ',' << csv_field(a.mean_dropped_buffer)
      << ',' << csv_field(a.mean_dropped_loop) << ',' << csv_field(a.mean_drop_rate) << ','
      << csv_field(a.mean_e2e_delay_s) << ',' << csv_field(a.ci95_halfwidth_s) << ','
      << csv_field(a.mean_prop_delay_s) << ',' << csv_field(a.mean_queueing_delay_s) << ','
      << csv_field(a.mean_hops) << ',' << csv_field(a.mean_max_queue) << '\n';
}

namespace {

template <typename Rows, typename Writer>
void write_file(const std::filesystem::path& path, const Rows& rows, Writer writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
  writer(out, rows);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

}  // namespace

void write_simulate_csv(const std::filesystem::path& path, const SimConfig& config,
                        const std::vector<Replication>& reps) {
  write_file(path, reps, [&config](std::ostream& out, const auto& r) { write_simulate_csv(out, config, r); });
}

std::string_view to_string(SweepVariable v) noexcept {
  return v == SweepVariable::LambdaIn ? "lambda_in" : "n_buffer";
}

SweepVariable parse_sweep_variable(std::string_view text) {
  if (text == "lambda_in") return SweepVariable::LambdaIn;
  if (text == "n_buffer") return SweepVariable::NBuffer;
  throw Error(ErrorCode::InvalidArgument,
              "unknown sweep variable '" + std::string(text) + "' (expected lambda_in or n_buffer)");
}

void SweepSpec::validate() const {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one value");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "sweep values must be strictly increasing");
    }
  }
  if (!(threshold_ratio > 0.0 && threshold_ratio <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold_ratio must be in (0, 1]");
  }
  if (policies.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one policy");
  if (replications < 1) throw Error(ErrorCode::InvalidArgument, "replications must be >= 1");
  if (variable == SweepVariable::NBuffer) {
    for (double v : values) {
      if (v < 1.0 || v != std::floor(v)) {
        throw Error(ErrorCode::InvalidArgument, "n_buffer sweep values must be positive integers");
      }
    }
  }
}

SimConfig sweep_point(const SimConfig& base, const SweepSpec& spec, double value, PolicyKind policy) {
  SimConfig c = base;
  c.policy.kind = policy;
  c.replications = spec.replications;
  if (spec.variable == SweepVariable::LambdaIn) {
    c.lambda_in = value;
  } else {
    c.policy.n_buffer = static_cast<int>(value);
    c.policy.n_threshold = std::max(1, static_cast<int>(std::lround(spec.threshold_ratio * value)));
  }
  c.validate();
  return c;
}

std::vector<SweepRow> run_sweep(const SimConfig& base, const SweepSpec& spec, int threads) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (double value : spec.values) {
    for (PolicyKind policy : spec.policies) {
      SweepRow row;
      row.variable = spec.variable;
      row.value = value;
      row.policy = policy;
      row.config = sweep_point(base, spec, value, policy);
      row.reps = run_replications(row.config, threads);
      row.agg = aggregate(row.reps);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "variable,variable_value,policy,lambda_in_pkt_per_s,n_buffer_pkts,n_threshold_pkts,replications,"
         "base_seed,mean_e2e_delay_s,ci95_halfwidth_s,drop_rate,delivered_pkts\n";
  for (const SweepRow& r : rows) {
    out << to_string(r.variable) << ',' << format_number(r.value) << ',' << to_string(r.policy) << ','
        << format_number(r.config.lambda_in) << ',' << r.config.policy.n_buffer << ','
        << r.config.policy.n_threshold << ',' << r.agg.replications << ',' << r.config.seed << ','
        << format_number(r.agg.mean_e2e_delay_s) << ',' << format_number(r.agg.ci95_halfwidth_s) << ','
        << format_number(r.agg.mean_drop_rate) << ',' << format_number(r.agg.mean_delivered) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  write_file(path, rows, [](std::ostream& out, const auto& r) { write_sweep_csv(out, r); });
}

MeshGrid parse_mesh_grid(std::string_view text, const std::string& source) {
  const json doc = parse_document(text, source);
  KeyReader r(text, source);
  MeshGrid grid;

  auto numbers = [&](const std::string& key, const json& v) {
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& x : v) out.push_back(r.number(key, x));
    } else {
      r.fail(key, "expected a number or a list of numbers");
    }
    if (out.empty()) r.fail(key, "empty list");
    return out;
  };

  for (const auto& [key, v] : doc.items()) {
    if (key == "lambda_over_mu") {
      if (v.is_object()) {
        if (!v.contains("start") || !v.contains("stop") || !v.contains("count")) {
          r.fail(key, "range needs start, stop and count");
        }
        const double start = r.number(key, v["start"]);
        const double stop = r.number(key, v["stop"]);
        const int count = r.integer(key, v["count"]);
        if (count < 1) r.fail(key, "count must be >= 1");
        for (int i = 0; i < count; ++i) {
          grid.lambda_over_mu.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
        }
      } else {
        grid.lambda_over_mu = numbers(key, v);
      }
    } else if (key == "p_h") {
      grid.p_h = numbers(key, v);
    } else if (key == "p_pref") {
      grid.p_pref = numbers(key, v);
    } else if (key == "variant") {
      grid.variants.clear();
      const json list = v.is_array() ? v : json::array({v});
      for (const auto& x : list) {
        try {
          grid.variants.push_back(parse_mesh_variant(r.string(key, x)));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::Config) throw;
          r.fail(key, e.what());
        }
      }
      if (grid.variants.empty()) r.fail(key, "empty list");
    } else if (key == "hops_h") {
      grid.hops_h = r.integer(key, v);
    } else if (key == "hops_v") {
      grid.hops_v = r.integer(key, v);
    } else if (key == "tol") {
      grid.tol = r.number(key, v);
      if (!(grid.tol > 0.0)) r.fail(key, "must be > 0");
    } else if (key == "max_iter") {
      grid.max_iter = r.integer(key, v);
      if (grid.max_iter < 1) r.fail(key, "must be >= 1");
    } else {
      r.fail(key, "unknown key");
    }
  }
  if (grid.lambda_over_mu.empty()) {
    throw Error(ErrorCode::Config, source + ":1: 'lambda_over_mu' is required");
  }
  for (double x : grid.lambda_over_mu) {
    if (!(x >= 0.0)) r.fail("lambda_over_mu", "values must be >= 0");
  }
  for (double x : grid.p_h) {
    if (!(x >= 0.0 && x <= 1.0)) r.fail("p_h", "values must be in [0, 1]");
  }
  for (double x : grid.p_pref) {
    if (!(x >= 0.0 && x <= 1.0)) r.fail("p_pref", "values must be in [0, 1]");
  }
  return grid;
}

MeshGrid load_mesh_grid(const std::filesystem::path& path) {
  return parse_mesh_grid(read_file(path), path.string());
}

std::vector<MeshRow> solve_mesh_grid(const MeshGrid& grid) {
  std::vector<MeshRow> rows;
  for (MeshVariant variant : grid.variants) {
    for (double p_h : grid.p_h) {
      for (double p_pref : grid.p_pref) {
        for (double load : grid.lambda_over_mu) {
          MeshParams params{p_h, p_pref, load, 1.0, variant};
          MeshRow row{load, p_h, p_pref, variant, solve_fixed_point(params, grid.tol, grid.max_iter), 0.0};
          row.normalized_delay = row.solution.stable
                                     ? expected_path_delay(row.solution, grid.hops_h, grid.hops_v)
                                     : std::numeric_limits<double>::quiet_NaN();
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

void write_mesh_csv(std::ostream& out, const std::vector<MeshRow>& rows) {
  out << "lambda_over_mu,p_h,p_pref,variant,N_h,N_v,normalized_delay,stable\n";
  for (const MeshRow& r : rows) {
    out << format_number(r.lambda_over_mu) << ',' << format_number(r.p_h) << ',' << format_number(r.p_pref)
        << ',' << to_string(r.variant) << ',' << format_number(r.solution.n_h) << ','
        << format_number(r.solution.n_v) << ',' << format_number(r.normalized_delay) << ','
        << (r.solution.stable ? "true" : "false") << '\n';
  }
}

void write_mesh_csv(const std::filesystem::path& path, const std::vector<MeshRow>& rows) {
  write_file(path, rows, [](std::ostream& out, const auto& r) { write_mesh_csv(out, r); });
}

}  // namespace leosim
