#include <cmath>
#include <cstring>
#include <map>
#include <vector>

#include "doctest.h"
#include "leosim/desim.hpp"
#include "leosim/error.hpp"

using namespace leosim;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.region = Region{{0, 0}, {3, 3}};
  c.lambda_in = 0.0;
  return c;
}

}  // namespace

TEST_CASE("transmission time of a 1 kB packet") {
  SimConfig c;
  CHECK(c.transmission_time_s() == doctest::Approx(327.68e-6).epsilon(1e-12));
  CHECK(c.effective_hop_limit() == 4 * (12 + 24));
}

TEST_CASE("single packet sees no queueing") {
  SimConfig c = small_config();
  Engine e(c);
  e.schedule_packet({1, 0}, {2, 0}, 0.0);
  e.run_until_idle();
  const double chord = 2.0 * (6371.0 + 600.0) * std::sin(M_PI / 24.0);
  const double expected = 8192.0 / 2.5e7 + chord / 299792.458;
  auto s = e.stats();
  REQUIRE(s.delivered == 1);
  CHECK(std::abs(s.avg_e2e_delay_s - expected) < 1e-9);
  CHECK(s.avg_queueing_delay_s == 0.0);
  CHECK(s.avg_hops == 1.0);
}

TEST_CASE("multi-hop zero-load delay sums per-hop terms") {
  SimConfig c = small_config();
  Engine e(c);
  Constellation geo;
  e.schedule_packet({0, 0}, {3, 3}, 0.0);
  e.run_until_idle();
  auto s = e.stats();
  REQUIRE(s.delivered == 1);
  CHECK(s.avg_hops == 6.0);
  CHECK(std::abs(s.avg_e2e_delay_s - (6 * c.transmission_time_s() + s.avg_prop_delay_s)) < 1e-12);
  CHECK(s.avg_prop_delay_s > 6 * geo.inter_plane_length_km(45.0) / 299792.458);
}

TEST_CASE("arrival stores the piggybacked metric") {
  SimConfig c = small_config();
  Engine e(c);
  Packet p;
  p.src = {1, 0};
  p.dst = {1, 1};
  p.header_metric = 7.3;
  e.on_arrival({1, 1}, p, Direction::Up);
  CHECK(e.view({1, 1}).last_metric[index(Direction::Up)] == 7.3);
  CHECK(e.stats().delivered == 1);
}

TEST_CASE("full buffer drops the arrival") {
  SimConfig c = small_config();
  c.policy.kind = PolicyKind::DraThreshold;
  c.policy.n_buffer = 2;
  c.policy.n_threshold = 1;
  Engine e(c);
  for (int i = 0; i < 3; ++i) e.schedule_packet({0, 1}, {3, 1}, 0.0);
  e.run_until_idle();
  auto s = e.stats();
  CHECK(s.generated == 3);
  CHECK(s.delivered == 2);
  CHECK(s.dropped_buffer == 1);
  CHECK(s.max_queue_observed == 2);
}

TEST_CASE("back-to-back packets leave one transmission time apart") {
  SimConfig c = small_config();
  Engine e(c);
  std::vector<double> arrivals;
  e.set_delivery_observer([&](const Packet&, double t) { arrivals.push_back(t); });
  e.schedule_packet({0, 2}, {3, 2}, 0.0);
  e.schedule_packet({0, 2}, {3, 2}, 0.0);
  e.run_until_idle();
  REQUIRE(arrivals.size() == 2);
  CHECK(arrivals[1] - arrivals[0] == doctest::Approx(c.transmission_time_s()).epsilon(1e-9));
  auto s = e.stats();
  CHECK(s.avg_queueing_delay_s == doctest::Approx(c.transmission_time_s() / 2).epsilon(1e-9));
}

TEST_CASE("no traffic gives empty statistics") {
  SimConfig c;
  c.lambda_in = 0.0;
  auto s = run(c);
  CHECK(s.generated == 0);
  CHECK(s.delivered == 0);
  CHECK(s.avg_e2e_delay_s == 0.0);
}

TEST_CASE("run invariants") {
  for (auto kind : {PolicyKind::DraThreshold, PolicyKind::Probabilistic}) {
    SimConfig c;
    c.policy.kind = kind;
    c.n_packets = 300;
    c.seed = 9;
    auto a = run(c);
    CHECK(a.generated == 10u * 300u * 10u);
    CHECK(a.generated == a.delivered + a.dropped);
    CHECK(a.dropped == a.dropped_buffer + a.dropped_loop);
    CHECK(a.audit.time_monotonic);
    CHECK(a.audit.fifo);
    CHECK(a.audit.max_decomposition_error_s < 1e-9);
    CHECK(a.max_queue_observed <= c.policy.n_buffer);

    auto b = run(c);
    CHECK(std::memcmp(&a.avg_e2e_delay_s, &b.avg_e2e_delay_s, sizeof(double)) == 0);
    CHECK(a.delivered == b.delivered);
    CHECK(a.dropped == b.dropped);
    CHECK(a.per_flow.size() == b.per_flow.size());
    CHECK(a.end_time_s == b.end_time_s);
  }
}

TEST_CASE("policies share the traffic stream") {
  SimConfig c;
  c.policy.kind = PolicyKind::DraThreshold;
  auto a = run(c);
  c.policy.kind = PolicyKind::Probabilistic;
  auto b = run(c);
  CHECK(a.generated == b.generated);
  REQUIRE(a.per_flow.size() == b.per_flow.size());
  auto it = b.per_flow.begin();
  for (const auto& [key, _] : a.per_flow) CHECK((it++)->first == key);
}

TEST_CASE("pairs are drawn uniformly") {
  SimConfig c;
  c.n_pairs = 1;
  c.n_packets = 1;
  c.lambda_in = 1e6;
  c.t_step = 1.0;
  const int windows = 41 * 42 * 20;
  c.generation_duration = windows * c.t_step;
  std::map<std::pair<NodeId, NodeId>, int> counts;
  Engine e(c);
  e.set_delivery_observer([&](const Packet& p, double) { ++counts[{p.src, p.dst}]; });
  for (int k = 0; k < windows; ++k) e.schedule_generation(k * c.t_step);
  e.run_until_idle();
  REQUIRE(e.stats().delivered == static_cast<std::uint64_t>(windows));
  const int cells = 42 * 41;
  const double expected = static_cast<double>(windows) / cells;
  double chi2 = 0.0;
  int seen = 0;
  for (const auto& [_, n] : counts) {
    chi2 += (n - expected) * (n - expected) / expected;
    ++seen;
  }
  chi2 += (cells - seen) * expected;
  // Wilson-Hilferty upper 1% point
  const double df = cells - 1;
  const double z = 2.3263478740408408;
  const double crit = df * std::pow(1 - 2 / (9 * df) + z * std::sqrt(2 / (9 * df)), 3);
  CHECK(chi2 < crit);
}

TEST_CASE("unroutable region is a configuration error") {
  SimConfig c;
  // the short way from slot 0 to slot 13 runs through slot 23, outside the region
  c.region = Region{{0, 0}, {0, 13}};
  try {
    Engine e(c);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unreachable);
  }

  SimConfig bad;
  bad.region = Region{{2, 3}, {12, 9}};
  CHECK_THROWS_AS(bad.validate(), Error);
}
