#include <cmath>
#include <random>

#include "doctest.h"
#include "leosim/congestion.hpp"
#include "leosim/error.hpp"
#include "leosim/meshmodel.hpp"

using namespace leosim;

namespace {

MeshParams params(double p_h, double p_pref, double load, MeshVariant v) {
  MeshParams m;
  m.p_h = p_h;
  m.p_pref = p_pref;
  m.lambda = load;
  m.mu = 1.0;
  m.variant = v;
  return m;
}

// Four-term sum written out from the direction-selection events, with the
// closed-form probability and its complement.
double exact_p_right_oracle(double nh, double nv, double ph, double pp) {
  const double mh = (nh + 2 * nv) / 3.0;
  const double mv = (nv + 2 * nh) / 3.0;
  const double f_h_primary = primary_probability(mh, mv, pp);
  const double f_v_primary = primary_probability(mv, mh, pp);
  return 0.5 * ph * f_h_primary + 0.5 * (1 - ph) * (1 - f_v_primary);
}

}  // namespace

TEST_CASE("p_right examples") {
  for (auto v : {MeshVariant::PaperSimplified, MeshVariant::ExactFp}) {
    for (double n : {0.3, 1.0, 7.0}) {
      for (double pp : {0.1, 0.5, 0.9}) {
        CHECK(mesh_p_right(n, n, params(0.5, pp, 1, v)) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(mesh_p_up(n, n, params(0.5, pp, 1, v)) == doctest::Approx(0.25).epsilon(1e-12));
      }
    }
    CHECK(mesh_p_right(1, 1, params(1.0, 1.0, 1, v)) == doctest::Approx(0.5));
    CHECK(mesh_p_up(1, 1, params(1.0, 1.0, 1, v)) == doctest::Approx(0.0));
  }
  const double hand = 0.5 * (0.9 * 0.6 * 4 / (1.9 + 2.2) + 0.4 * 0.1 * 4 / (3.8 + 1.1));
  CHECK(mesh_p_right(1, 2, params(0.6, 0.9, 1, MeshVariant::PaperSimplified)) ==
        doctest::Approx(hand).epsilon(1e-12));
  CHECK(hand == doctest::Approx(0.2798).epsilon(1e-3));
}

TEST_CASE("simplified form indeterminate at the origin") {
  try {
    mesh_p_right(0, 0, params(0.5, 0.9, 1, MeshVariant::PaperSimplified));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndeterminateInput);
  }
  CHECK(mesh_p_right(0, 0, params(0.5, 0.9, 1, MeshVariant::ExactFp)) ==
        doctest::Approx(0.25));
}

TEST_CASE("direction probabilities sum to one half") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> n(0.01, 50.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double nh = n(rng), nv = n(rng), ph = u(rng), pp = u(rng);
    for (auto v : {MeshVariant::PaperSimplified, MeshVariant::ExactFp}) {
      const auto m = params(ph, pp, 1, v);
      CHECK(std::abs(mesh_p_right(nh, nv, m) + mesh_p_up(nh, nv, m) - 0.5) < 1e-12);
    }
    CHECK(mesh_p_right(nh, nv, params(ph, pp, 1, MeshVariant::ExactFp)) ==
          doctest::Approx(exact_p_right_oracle(nh, nv, ph, pp)).epsilon(1e-12));
  }
}

TEST_CASE("symmetric fixed point") {
  for (auto v : {MeshVariant::PaperSimplified, MeshVariant::ExactFp}) {
    auto s = solve_fixed_point(params(0.5, 0.9, 2.0, v));
    REQUIRE(s.stable);
    CHECK(s.n_h == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.n_v == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.rho_h == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(expected_path_delay(s, 3, 3) == doctest::Approx(6.0).epsilon(1e-9));
  }
  auto zero = solve_fixed_point(params(0.5, 0.9, 0.0, MeshVariant::ExactFp));
  CHECK(zero.stable);
  CHECK(zero.n_h == 0.0);
  CHECK(zero.n_v == 0.0);
  CHECK(expected_path_delay(zero, 3, 3) == 0.0);
}

TEST_CASE("fixed point residual") {
  const double tol = 1e-10;
  for (double ph : {0.5, 0.6, 0.7}) {
    for (double load : {0.5, 1.0, 2.0}) {
      auto m = params(ph, 0.9, load, MeshVariant::ExactFp);
      auto s = solve_fixed_point(m, tol);
      REQUIRE(s.stable);
      const double rh = load * mesh_p_right(s.n_h, s.n_v, m);
      const double rv = load * mesh_p_up(s.n_h, s.n_v, m);
      CHECK(std::abs(s.n_h - rh / (1 - rh)) < tol * std::max(1.0, s.n_h) * 10);
      CHECK(std::abs(s.n_v - rv / (1 - rv)) < tol * std::max(1.0, s.n_v) * 10);
    }
  }
}

TEST_CASE("variants agree at large queue lengths") {
  for (double ph : {0.5, 0.55, 0.6}) {
    for (double load : {3.7, 3.8, 3.9}) {
      auto a = solve_fixed_point(params(ph, 0.9, load, MeshVariant::ExactFp));
      auto b = solve_fixed_point(params(ph, 0.9, load, MeshVariant::PaperSimplified));
      if (!a.stable || !b.stable || a.n_h < 10 || a.n_v < 10) continue;
      INFO(ph, " ", load);
      CHECK(std::abs(a.n_h - b.n_h) / a.n_h < 0.05);
      CHECK(std::abs(a.n_v - b.n_v) / a.n_v < 0.05);
    }
  }
  auto a = solve_fixed_point(params(0.5, 0.9, 3.9, MeshVariant::ExactFp));
  REQUIRE(a.stable);
  CHECK(a.n_h > 10);
}

TEST_CASE("queue lengths grow with load") {
  for (double ph : {0.5, 0.7}) {
    double prev_h = 0, prev_v = 0;
    for (double load = 0.1; load < 2.5; load += 0.1) {
      auto s = solve_fixed_point(params(ph, 0.9, load, MeshVariant::ExactFp));
      if (!s.stable) break;
      CHECK(s.n_h >= prev_h);
      CHECK(s.n_v >= prev_v);
      prev_h = s.n_h;
      prev_v = s.n_v;
    }
  }
}

TEST_CASE("overload is reported as unstable") {
  auto s = solve_fixed_point(params(0.5, 0.9, 4.5, MeshVariant::ExactFp));
  CHECK_FALSE(s.stable);
  try {
    expected_path_delay(s, 3, 3);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UndefinedDelay);
  }
}

TEST_CASE("micro simulation") {
  auto idle = mesh_micro_sim(params(0.5, 0.9, 0.0, MeshVariant::ExactFp), 4, 1000, 1);
  CHECK(idle.n_h == 0.0);
  CHECK(idle.n_v == 0.0);
  CHECK_FALSE(idle.diverging);

  auto sym = mesh_micro_sim(params(0.5, 0.9, 2.0, MeshVariant::ExactFp), 8, 400000, 3);
  CHECK_FALSE(sym.diverging);
  CHECK(sym.n_h == doctest::Approx(1.0).epsilon(0.1));
  CHECK(sym.n_v == doctest::Approx(1.0).epsilon(0.1));

  CHECK_THROWS_AS(mesh_micro_sim(params(0.5, 0.9, 1.0, MeshVariant::ExactFp), 3, 10, 1), Error);
}
