#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grushin/geodesics.hpp"

using namespace grushin;

TEST_CASE("free 1D billiard: eta = 0 bounces between the walls") {
  PhasePoint start{0.0, 1.0, 1.0, 0.0};
  auto traj = integrate_flow(start, 1.0, 2.0, 1e-3);
  REQUIRE(!traj.pts.empty());
  // x(t) = 2t until the wall at t = 1/2, then the momentum flips
  const int i_quarter = 250;
  CHECK(traj.pts[i_quarter].x == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(traj.reflections.size() >= 1);
  CHECK(traj.reflections[0] == doctest::Approx(0.5).epsilon(1e-8));
  const int i_after = 750;
  CHECK(traj.pts[i_after].xi == doctest::Approx(-1.0).epsilon(1e-9));
  // y never moves
  for (size_t i = 0; i < traj.pts.size(); i += 100)
    CHECK(traj.pts[i].y == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eta is an exact constant of motion") {
  PhasePoint start{0.0, 0.0, 1.0, 1.0};
  auto traj = integrate_flow(start, 1.0, 10.0, 1e-3);
  for (const auto& q : traj.pts) CHECK(q.eta == 1.0);
}

TEST_CASE("y displacement reproduced by quadrature of |x|^{2 gamma}") {
  PhasePoint start{0.2, 0.3, 0.9, 1.4};
  const double gamma = 2.0;
  auto traj = integrate_flow(start, gamma, 20.0, 1e-3);
  // Simpson on the stored samples
  const size_t n = traj.pts.size() - ((traj.pts.size() + 1) % 2);  // odd count
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = potential(traj.pts[i].x, gamma);
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f;
  }
  const double dt = traj.t[1] - traj.t[0];
  const double quad = 2.0 * start.eta * acc * dt / 3.0;
  const double dy = traj.pts[n - 1].y - traj.pts[0].y;
  CHECK(std::abs(dy - quad) / std::abs(dy) < 1e-6);
}

TEST_CASE("first integrals: monotone y and tiny energy drift") {
  {
    PhasePoint start{0.1, 0.0, 0.7, 1.2};
    auto traj = integrate_flow(start, 1.0, 30.0, 1e-3);
    auto rep = first_integrals(traj, 1.0);
    CHECK(rep.y_monotone);
    CHECK(rep.max_energy_drift < 1e-8);
  }
  {
    PhasePoint start{0.1, 0.0, 0.7, -1.2};  // negative eta: y non-increasing
    auto traj = integrate_flow(start, 1.0, 10.0, 1e-3);
    CHECK(first_integrals(traj, 1.0).y_monotone);
  }
  {
    PhasePoint start{0.3, 0.5, 1.0, 0.0};  // eta = 0: y frozen
    auto traj = integrate_flow(start, 1.5, 10.0, 1e-3);
    for (const auto& q : traj.pts) CHECK(std::abs(q.y - 0.5) < 1e-12);
  }
  {
    // the gamma=2 standard run of the drift requirement
    PhasePoint start{0.0, 0.0, 1.0, 1.0};
    auto traj = integrate_flow(start, 2.0, 50.0, 1e-3);
    CHECK(first_integrals(traj, 2.0).max_energy_drift < 1e-8);
    // refined-step oracle agrees on the final point
    auto fine = integrate_flow(start, 2.0, 50.0, 1e-4);
    CHECK(std::abs(traj.pts.back().x - fine.pts.back().x) < 1e-6);
    CHECK(std::abs(traj.pts.back().y - fine.pts.back().y) < 1e-6);
  }
}

TEST_CASE("reflection preserves p and eta exactly") {
  PhasePoint start{0.0, 0.0, 1.2, 0.8};
  const double gamma = 1.0;
  auto traj = integrate_flow(start, gamma, 8.0, 1e-3);
  REQUIRE(!traj.reflections.empty());
  auto rep = first_integrals(traj, gamma);
  CHECK(rep.max_energy_drift < 1e-8);
}

TEST_CASE("time reversal returns to the start") {
  PhasePoint start{0.15, 1.0, 0.8, 1.1};
  const double gamma = 1.0, T = 7.0, dt = 5e-4;
  auto fwd = integrate_flow(start, gamma, T, dt);
  PhasePoint end = fwd.pts.back();
  PhasePoint flipped{end.x, end.y, -end.xi, -end.eta};
  auto bwd = integrate_flow(flipped, gamma, T, dt);
  PhasePoint back = bwd.pts.back();
  CHECK(std::abs(back.x - start.x) < 1e-6);
  CHECK(std::abs(std::remainder(back.y - start.y, kTwoPi)) < 1e-6);
  CHECK(std::abs(-back.xi - start.xi) < 1e-6);
}

TEST_CASE("gcc certify: full circle is trivially covered") {
  auto rep = gcc_certify(1.0, ObservationRegion::full_circle(), 0.2, 10.0, 16);
  CHECK(rep.min_time_fraction == 1.0);
  CHECK(rep.certified);
}

TEST_CASE("gcc certify: strip of length pi/2 is reached by every sampled ray") {
  auto region = ObservationRegion::strip(2.0, 2.0 + kPi / 2.0);
  auto rep = gcc_certify(1.0, region, 0.2, 60.0, 40, 1e-3);
  CHECK(rep.samples_tested + rep.discarded_grazing == 40);
  CHECK(rep.certified);
  CHECK(rep.min_time_fraction > 0.0);
  CHECK(rep.max_energy_drift < 1e-8);
  CHECK(rep.advance_inequality_ok);
  CHECK(std::isfinite(rep.worst_hit_time));
  // refined-dt oracle on the worst initial point
  auto res = gcc_certify(1.0, region, 0.2, 60.0, 1, 5e-4);
  CHECK(res.certified);
}

TEST_CASE("gcc certify rejects an invalid delta for the advance bound") {
  auto region = ObservationRegion::strip(2.0, 2.0 + kPi / 2.0);
  CHECK_THROWS(gcc_certify(1.0, region, 0.05, 10.0, 4, 1e-3, 0.1));
}

TEST_CASE("hitting times grow with gamma and shrink with the strip") {
  auto region = ObservationRegion::strip(2.0, 2.0 + kPi / 2.0);
  auto rows = hitting_time_scaling({1.0, 2.0}, region, 0.2, 40, 120.0, 1e-3);
  REQUIRE(rows.size() == 2);
  MESSAGE("worst hit times: gamma=1: ", rows[0].worst_hit_time,
          ", gamma=2: ", rows[1].worst_hit_time);
  CHECK(rows[1].worst_hit_time > rows[0].worst_hit_time);
  auto wide = ObservationRegion::strip(2.0, 2.0 + kPi);
  auto rows_wide = hitting_time_scaling({1.0}, wide, 0.2, 40, 120.0, 1e-3);
  CHECK(rows_wide[0].worst_hit_time < rows[0].worst_hit_time);
}
