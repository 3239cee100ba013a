#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grushin/linalg.hpp"
#include "grushin/observability.hpp"
#include "grushin/state.hpp"

using namespace grushin;

namespace {

SpectralBasis small_basis(double gamma, double cutoff, int nx = 800) {
  GrushinParams p{gamma, 1};
  auto grid = Grid1D::interior(-1.0, 1.0, nx);
  return build_basis(p, cutoff, grid);
}

}  // namespace

TEST_CASE("omega matrix: full circle, diagonal, fiber orthogonality") {
  auto basis = small_basis(1.0, 8.0);
  {
    Observatory obs(basis, ObservationRegion::full_circle());
    const auto& W = obs.omega_matrix();
    CHECK((W - Eigen::MatrixXcd::Identity(basis.size(), basis.size())).norm() < 1e-8);
  }
  auto region = ObservationRegion::strip(1.0, 1.0 + kPi / 2.0);
  Observatory obs(basis, region);
  const auto& W = obs.omega_matrix();
  for (int j = 0; j < basis.size(); ++j)
    CHECK(std::abs(W(j, j) - region.length() / kTwoPi) < 1e-10);
  for (int j = 0; j < basis.size(); ++j)
    for (int k = j + 1; k < basis.size(); ++k)
      if (basis.pairs[j].n == basis.pairs[k].n)
        CHECK(std::abs(W(j, k)) < 1e-8);
  // Hermitian by construction
  CHECK((W - W.adjoint()).norm() == 0.0);
}

TEST_CASE("gramian: full circle is T times the identity") {
  auto basis = small_basis(1.0, 6.0);
  Observatory obs(basis, ObservationRegion::full_circle());
  auto g = obs.gramian(2.5, 1);
  CHECK((g.matrix - 2.5 * Eigen::MatrixXcd::Identity(basis.size(), basis.size())).norm() <
        1e-8);
  CHECK(obs.obs_constant(g) == doctest::Approx(1.0 / 2.5).epsilon(1e-8));
}

TEST_CASE("gramian: Hermitian and positive semidefinite") {
  auto basis = small_basis(1.0, 15.0, 1000);
  Observatory obs(basis, ObservationRegion::strip(1.0, 1.0 + kPi / 2.0));
  auto g = obs.gramian(1.0, 1);
  CHECK((g.matrix - g.matrix.adjoint()).norm() < 1e-12 * g.matrix.norm());
  const double lmin = linalg::hermitian_lambda_min(g.matrix, 4000);
  CHECK(lmin > -1e-10);
}

TEST_CASE("gramian: closed form equals the Simpson time quadrature") {
  auto basis = small_basis(1.0, 6.0);
  const int N = basis.size();
  auto region = ObservationRegion::strip(0.8, 0.8 + 2.0);
  Observatory obs(basis, region);
  const double T = 1.0;
  auto g = obs.gramian(T, 1);

  const auto& W = obs.omega_matrix();
  const int steps = 2000;
  const double dt = T / steps;
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(N, N);
  for (int k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    Eigen::VectorXcd ph(N);
    for (int j = 0; j < N; ++j) ph(j) = std::polar(1.0, basis.pairs[j].lambda_sq * t);
    q += w * (ph.asDiagonal() * W * ph.conjugate().asDiagonal());
  }
  q *= dt / 3.0;
  CHECK((q - g.matrix).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("obs constant: region monotonicity and T monotonicity") {
  auto basis = small_basis(1.0, 10.0);
  auto narrow = ObservationRegion::strip(1.0, 1.0 + 1.0);
  auto wide = ObservationRegion::strip(1.0, 1.0 + 2.5);
  Observatory on(basis, narrow), ow(basis, wide);
  const double cn = on.obs_constant(on.gramian(4.0, 1));
  const double cw = ow.obs_constant(ow.gramian(4.0, 1));
  CHECK(cw <= cn);
  const double cl = on.obs_constant(on.gramian(8.0, 1));
  CHECK(cl <= cn);
}

TEST_CASE("obs constant: stable under a larger truncation in the observable window") {
  GrushinParams p{1.0, 1};
  auto grid = Grid1D::interior(-1.0, 1.0, 1200);
  auto region = ObservationRegion::strip(kPi / 2.0, 3.0 * kPi / 2.0);
  auto b15 = build_basis(p, 15.0, grid);
  auto b20 = build_basis(p, 20.0, grid);
  Observatory o15(b15, region), o20(b20, region);
  const double c15 = o15.obs_constant(o15.gramian(10.0, 1));
  const double c20 = o20.obs_constant(o20.gramian(10.0, 1));
  MESSAGE("constants at cutoff 15/20: ", c15, " ", c20);
  CHECK(std::isfinite(c15));
  CHECK(std::abs(c20 - c15) / c15 < 0.2);
}

TEST_CASE("lanczos lambda_min agrees with the dense solver") {
  auto basis = small_basis(1.0, 12.0);
  Observatory obs(basis, ObservationRegion::strip(1.0, 4.0));
  auto g = obs.gramian(2.0, 1);
  const double dense = linalg::hermitian_lambda_min(g.matrix, 1 << 20);
  auto matvec = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    y.noalias() = g.matrix * x;
  };
  const double iter = linalg::lanczos_lambda_min(matvec, basis.size());
  CHECK(iter == doctest::Approx(dense).epsilon(1e-7));
}

TEST_CASE("quasimode cost: full circle floor and the exact-eigenvalue case") {
  {
    auto basis = small_basis(1.0, 10.0);
    Observatory obs(basis, ObservationRegion::full_circle());
    const double h = 1.0 / std::sqrt(basis.pairs[basis.size() / 2].lambda_sq);
    CHECK(obs.quasimode_cost(h, 1.5, default_window()) >= 1.0 - 1e-10);
  }
  {
    // single-pair basis: at alpha = 0 and h^{-2} = lambda_sq exactly, the
    // penalty vanishes and the cost is the omega mass of that eigenspace
    GrushinParams p{1.5, 1};
    auto grid = Grid1D::interior(-1.0, 1.0, 600);
    auto basis = build_basis(p, 1.58, grid);
    REQUIRE(basis.size() == 1);
    auto region = ObservationRegion::strip(0.5, 0.5 + kPi);
    Observatory obs(basis, region);
    const double h = 1.0 / std::sqrt(basis.pairs[0].lambda_sq);
    CHECK(obs.quasimode_cost(h, 0.0, default_window()) ==
          doctest::Approx(region.length() / kTwoPi).epsilon(1e-10));
  }
}

TEST_CASE("quasimode cost: monotone in alpha and in the region") {
  GrushinParams p{1.0, 1};
  auto grid = Grid1D::interior(-1.0, 1.0, 1200);
  BasisOptions opt;
  opt.m_max = 1;
  auto basis = build_basis(p, 23.0, grid, opt);
  auto region = ObservationRegion::strip(1.0, 1.0 + kPi / 2.0);
  Observatory obs(basis, region);
  const double h = 0.125;
  double prev = 0.0;
  for (double a : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double c = obs.quasimode_cost(h, a, default_window());
    CHECK(c >= prev - 1e-12);  // the penalty weight h^{-2a} grows with a
    prev = c;
  }
  Observatory wide(basis, ObservationRegion::strip(1.0, 1.0 + kPi));
  CHECK(wide.quasimode_cost(h, 1.0, default_window()) >=
        obs.quasimode_cost(h, 1.0, default_window()) - 1e-12);
}

TEST_CASE("quasimode cost: collapse below the critical exponent, floor at it") {
  GrushinParams p{1.0, 1};
  auto grid = Grid1D::interior(-1.0, 1.0, 1200);
  BasisOptions opt;
  opt.m_max = 1;
  auto basis = build_basis(p, 23.0, grid, opt);
  Observatory obs(basis, ObservationRegion::strip(1.0, 1.0 + kPi / 2.0));
  auto window = default_window();
  // at the critical exponent gamma+1 = 2 the cost stays of order one; one
  // unit below it the cost collapses as h shrinks
  std::vector<double> at2, at1;
  for (double h : {0.25, 0.125, 0.0625}) {
    at2.push_back(obs.quasimode_cost(h, 2.0, window));
    at1.push_back(obs.quasimode_cost(h, 1.0, window));
  }
  MESSAGE("cost at alpha=2: ", at2[0], " ", at2[1], " ", at2[2]);
  MESSAGE("cost at alpha=1: ", at1[0], " ", at1[1], " ", at1[2]);
  for (double c : at2) CHECK(c > 0.05);
  CHECK(at1[2] < at1[0]);
  CHECK(at1[2] < 0.5 * at2[2]);
}

TEST_CASE("fit_resolvent_exponent: rejects degenerate input, returns a sane exponent") {
  GrushinParams p{1.0, 1};
  auto grid = Grid1D::interior(-1.0, 1.0, 1200);
  BasisOptions opt;
  opt.m_max = 1;
  auto basis = build_basis(p, 23.0, grid, opt);
  Observatory obs(basis, ObservationRegion::strip(1.0, 1.0 + kPi / 2.0));
  CHECK_THROWS(obs.fit_resolvent_exponent({0.25}, default_window()));
  auto fit = obs.fit_resolvent_exponent({0.5, 0.25, 0.125, 0.0625}, default_window());
  MESSAGE("alpha_star: ", fit.alpha_star[0], " ", fit.alpha_star[1], " ", fit.alpha_star[2],
          " ", fit.alpha_star[3], " -> exponent ", fit.exponent);
  CHECK(fit.exponent > 1.0);
  CHECK(fit.exponent < 3.0);
}

TEST_CASE("heat final constant: diagonal closed form on the full circle") {
  auto basis = small_basis(1.0, 6.0);
  Observatory obs(basis, ObservationRegion::full_circle());
  const double T = 0.4;
  for (int s : {1, 2}) {
    const double got = obs.heat_final_constant(T, s);
    double expect = 0.0;
    for (const auto& q : basis.pairs) {
      const double l2s = std::pow(q.lambda_sq, s);
      expect = std::max(expect,
                        2.0 * l2s * std::exp(-2.0 * T * l2s) / (1.0 - std::exp(-2.0 * T * l2s)));
    }
    CHECK(got == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("heat final constant: observable regime stabilizes, critical regime grows") {
  GrushinParams p{1.0, 2};
  auto grid = Grid1D::interior(-1.0, 1.0, 1000);
  auto region = ObservationRegion::strip(kPi / 2.0, 3.0 * kPi / 2.0);
  auto b8 = build_basis(p, 8.0, grid);
  auto b12 = build_basis(p, 12.0, grid);
  Observatory o8(b8, region), o12(b12, region);
  const double T = 0.5;
  // s = 2 > (gamma+1)/2: stable under truncation growth
  const double s2_a = o8.heat_final_constant(T, 2), s2_b = o12.heat_final_constant(T, 2);
  CHECK(std::abs(s2_b - s2_a) / s2_a < 0.5);
  // s = 1 = (gamma+1)/2: the constant keeps growing with the truncation
  const double s1_a = o8.heat_final_constant(T, 1), s1_b = o12.heat_final_constant(T, 1);
  MESSAGE("heat constants s=1: ", s1_a, " -> ", s1_b, ", s=2: ", s2_a, " -> ", s2_b);
  CHECK(s1_b > 1.5 * s1_a);
}

TEST_CASE("tinf lower bound and the semiclassical time rescale") {
  auto region = ObservationRegion::strip(1.0, 1.0 + kPi / 2.0);
  CHECK(tinf_lower_bound(1.0, 1, region, 1.0) == doctest::Approx(1.0));
  CHECK(tinf_lower_bound(3.0, 2, ObservationRegion::strip(kPi / 2.0, kPi), 1.1448) ==
        doctest::Approx((kPi / 2.0) / (1.1448 * 1.1448)));
  CHECK_THROWS(tinf_lower_bound(2.0, 1, region, 1.06));  // non-critical pair
  auto tiny = ObservationRegion::strip(1e-9, 1.0);
  CHECK(tinf_lower_bound(1.0, 1, tiny, 1.0) == doctest::Approx(1e-9));

  CHECK(localized_time_rescale(1.0, 1, 3.0) == doctest::Approx(3.0));
  CHECK(localized_time_rescale(0.5, 1, 4.0) == doctest::Approx(2.0));
  CHECK(localized_time_rescale(0.5, 2, 8.0) == doctest::Approx(1.0));
}

TEST_CASE("regime scan: verdict plumbing on the critical case") {
  GrushinParams p{1.0, 1};
  auto grid = Grid1D::interior(-1.0, 1.0, 1000);
  auto basis = build_basis(p, 12.0, grid);
  auto region = ObservationRegion::strip(1.0, 1.0 + kPi / 2.0);
  Observatory obs(basis, region);
  auto rep = obs.regime_scan(1, {0.25, 8.0}, {8.0, 10.0, 12.0});
  CHECK(rep.regime == "critical");
  REQUIRE(rep.rows.size() == 6);
  for (const auto& row : rep.rows) CHECK(row.dim > 0);
  REQUIRE(rep.verdicts.size() == 2);
  MESSAGE("T=0.25 verdict: ", rep.verdicts[0].second,
          ", T=8 verdict: ", rep.verdicts[1].second);
}
