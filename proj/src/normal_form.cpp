#include "grushin/normal_form.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "grushin/linalg.hpp"
#include "grushin/state.hpp"

namespace grushin {

namespace {

// plain DFT by matrix product; grid sizes here are a few hundred
Eigen::MatrixXcd dft_matrix(int n, int sign) {
  Eigen::MatrixXcd F(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) F(a, b) = std::polar(1.0, sign * kTwoPi * a * b / n);
  return F;
}

int signed_index(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

struct Spectral {
  // forward transform in both variables: coef(n_idx, q_idx)
  Eigen::MatrixXcd coef;
  int ny, nxt;

  explicit Spectral(const ExtendedField& v) : ny(v.ny()), nxt(v.nxt()) {
    coef = (dft_matrix(ny, -1) * v.f * dft_matrix(nxt, -1)) / double(ny * nxt);
  }
  ExtendedField back(ExtendedField::Parity parity) const {
    ExtendedField out;
    out.f = dft_matrix(ny, +1) * coef * dft_matrix(nxt, +1);
    out.parity = parity;
    return out;
  }
  double y_freq(int j) const { return signed_index(j, ny); }
  double x_freq(int i) const { return 0.5 * kPi * signed_index(i, nxt); }  // period 4
};

CutoffProfile psi1_profile() { return CutoffProfile::bump(0.25, 0.5, 1.5, 4.0); }
CutoffProfile psi2_profile() { return CutoffProfile::bump(0.125, 0.24, 4.1, 8.0); }

}  // namespace

double extended_coefficient(double x, double gamma) {
  if (std::abs(x) <= 1.0) return std::pow(std::abs(x), gamma);
  return std::pow(std::abs(2.0 - x), gamma);
}

ExtendedField odd_extend(const Eigen::MatrixXcd& field_on_M, const Grid1D& xgrid) {
  const int N = xgrid.n, ny = static_cast<int>(field_on_M.rows());
  if (field_on_M.cols() != N) throw std::invalid_argument("odd_extend: shape mismatch");
  if (std::abs(xgrid.a + 1.0) > 1e-14 || std::abs(xgrid.b - 1.0) > 1e-14)
    throw std::invalid_argument("odd_extend: x grid must cover (-1,1)");

  // Dirichlet gate: cubic extrapolation of the samples to x = +-1
  double scale = std::max(field_on_M.cwiseAbs().maxCoeff(), 1e-30);
  for (int j = 0; j < ny; ++j) {
    const Complex left =
        4.0 * field_on_M(j, 0) - 6.0 * field_on_M(j, 1) + 4.0 * field_on_M(j, 2) -
        field_on_M(j, 3);
    const Complex right = 4.0 * field_on_M(j, N - 1) - 6.0 * field_on_M(j, N - 2) +
                          4.0 * field_on_M(j, N - 3) - field_on_M(j, N - 4);
    if (std::abs(left) > 1e-8 * scale || std::abs(right) > 1e-8 * scale)
      throw std::invalid_argument("odd_extend: input does not vanish at x = +-1");
  }

  const int nxt = 2 * (N + 1);
  ExtendedField out;
  out.parity = ExtendedField::Parity::OddExtended;
  out.f = Eigen::MatrixXcd::Zero(ny, nxt);
  for (int j = 0; j < ny; ++j) {
    out.f(j, 0) = 0.0;      // x = -1
    out.f(j, N + 1) = 0.0;  // x = +1
    for (int i = 0; i < N; ++i) out.f(j, 1 + i) = field_on_M(j, i);
    // mirror: node index i' on (1,3) reflects to 2(N+1) - i'
    for (int i = N + 2; i < nxt; ++i) out.f(j, i) = -out.f(j, 2 * (N + 1) - i);
  }
  return out;
}

double mean_value(double gamma) {
  if (gamma < 1.0) throw std::invalid_argument("mean_value: gamma must be >= 1");
  return 1.0 / (2.0 * gamma + 1.0);
}

double mean_value_quadrature(double gamma, int nodes) {
  if (nodes % 2 != 0) ++nodes;
  const double h = 2.0 / nodes;
  double acc = potential(-1.0, gamma) + potential(1.0, gamma);
  for (int i = 1; i < nodes; ++i) acc += (i % 2 ? 4.0 : 2.0) * potential(-1.0 + i * h, gamma);
  return 0.5 * acc * h / 3.0;
}

Complex primitive_b(double gamma, double x, int nodes) {
  if (x < -1.0 || x > 3.0) throw std::invalid_argument("primitive_b: x must lie in [-1,3]");
  const double M = mean_value(gamma);
  if (nodes % 2 != 0) ++nodes;
  const double h = (x + 1.0) / nodes;
  auto f = [&](double z) { return M - sq(extended_coefficient(z, gamma)); };
  double acc = 0.0;
  if (h > 0.0) {
    acc = f(-1.0) + f(x);
    for (int i = 1; i < nodes; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(-1.0 + i * h);
    acc *= h / 3.0;
  }
  return acc / Complex(0.0, 2.0);
}

ResidualReport conjugated_residual(const ExtendedField& v0, double gamma, double h, double eps,
                                   double C1) {
  if (h <= 0.0 || h >= 1.0) throw std::invalid_argument("conjugated_residual: need 0 < h < 1");
  const int ny = v0.ny(), nxt = v0.nxt();
  const double M = mean_value(gamma);
  const auto psi1 = psi1_profile();
  const auto psi2 = psi2_profile();
  const auto chi0 = default_chi0(C1, gamma);

  Spectral sp(v0);
  ResidualReport rep;
  rep.v_norm = v0.norm();

  // localization gate: mass on modes outside supp(psi1) x supp(chi0)
  {
    double outside = 0.0, total = 0.0;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nxt; ++i) {
        const double m2 = std::norm(sp.coef(j, i));
        total += m2;
        const bool in_x = psi1(std::abs(h * sp.x_freq(i))) > 0.0;
        const bool in_y = chi0(std::pow(h, eps) * sp.y_freq(j)) > 0.0;
        if (!(in_x && in_y)) outside += m2;
      }
    rep.localization_residual = total > 0 ? std::sqrt(outside / total) : 0.0;
    if (rep.localization_residual > 1e-6)
      throw std::invalid_argument("conjugated_residual: input not spectrally localized");
  }

  const double cell = v0.dx() * kTwoPi / ny;
  auto qnorm = [&](const Eigen::MatrixXcd& f) { return std::sqrt(f.squaredNorm() * cell); };

  // r_before = ||(h^2 P_a + 1) v0||, P_a = d_x^2 + a(x)^2 d_y^2
  Eigen::MatrixXcd dxx, dyy;
  {
    Eigen::MatrixXcd cx = sp.coef, cy = sp.coef;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nxt; ++i) {
        cx(j, i) *= -sq(sp.x_freq(i));
        cy(j, i) *= -sq(sp.y_freq(j));
      }
    dxx = dft_matrix(ny, +1) * cx * dft_matrix(nxt, +1);
    dyy = dft_matrix(ny, +1) * cy * dft_matrix(nxt, +1);
  }
  Eigen::MatrixXcd before = v0.f + h * h * dxx;
  for (int i = 0; i < nxt; ++i) {
    const double a2 = sq(extended_coefficient(v0.x(i), gamma));
    before.col(i) += h * h * a2 * dyy.col(i);
  }
  rep.r_before = qnorm(before);

  // w0 = (1 - h Q d_y^2) v0 with Q = b(x) m(h D_x), m(xi) = psi2(xi)/xi;
  // both d_y^2 and m(h D_x) are diagonal on the 2D coefficients
  Eigen::MatrixXcd w0;
  {
    Eigen::MatrixXcd c = sp.coef;
    for (int j = 0; j < ny; ++j) c.row(j) *= -sq(sp.y_freq(j));
    for (int i = 0; i < nxt; ++i) {
      const double xi = h * sp.x_freq(i);
      c.col(i) *= xi != 0.0 ? psi2(std::abs(xi)) / xi : 0.0;
    }
    Eigen::MatrixXcd qv = dft_matrix(ny, +1) * c * dft_matrix(nxt, +1);
    for (int i = 0; i < nxt; ++i) qv.col(i) *= primitive_b(gamma, v0.x(i));
    w0 = v0.f - h * qv;
  }
  {
    ExtendedField wf;
    wf.f = w0;
    Spectral sw(wf);
    Eigen::MatrixXcd c = sw.coef;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nxt; ++i)
        c(j, i) *= 1.0 - h * h * (sq(sw.x_freq(i)) + M * sq(sw.y_freq(j)));
    Eigen::MatrixXcd after = dft_matrix(ny, +1) * c * dft_matrix(nxt, +1);
    rep.r_after = qnorm(after);
    rep.w_minus_v = qnorm(w0 - v0.f);
  }
  return rep;
}

ExtendedField make_localized_field(double gamma, double h, double eps, int nxt, int ny,
                                   unsigned seed, double C1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const auto psi1 = psi1_profile();
  const auto chi0 = default_chi0(C1, gamma);
  Eigen::MatrixXcd coef = Eigen::MatrixXcd::Zero(ny, nxt);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nxt; ++i) {
      const double xi = h * 0.5 * kPi * signed_index(i, nxt);
      const double n = std::pow(h, eps) * signed_index(j, ny);
      const double wgt = psi1(std::abs(xi)) * chi0(n);
      if (wgt > 0.0) coef(j, i) = wgt * Complex(nd(rng), nd(rng));
    }
  ExtendedField out;
  out.f = dft_matrix(ny, +1) * coef * dft_matrix(nxt, +1);
  out.parity = ExtendedField::Parity::Generic;
  const double nrm = out.norm();
  if (nrm > 0) out.f /= nrm;
  return out;
}

double flat_torus_resolvent_check(const ObservationRegion& region, double h, double M,
                                  double alpha) {
  if (region.length() <= 0.0) throw std::invalid_argument("flat_torus: empty region");
  auto yfac = [&](int delta) -> Complex {
    if (delta == 0) return region.length() / kTwoPi;
    const Complex i(0.0, 1.0);
    return (std::exp(i * (double)delta * region.a2) - std::exp(i * (double)delta * region.a1)) /
           (kTwoPi * i * (double)delta);
  };
  const double pen = std::pow(h, -2.0 * alpha);
  const double lo = 0.5 / (h * h), hi = 2.0 / (h * h);
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  const int qmax = static_cast<int>(std::floor(std::sqrt(hi) / (0.5 * kPi)));
  for (int q = 0; q <= qmax; ++q) {
    const double xi2 = sq(0.5 * kPi * q);
    // window in the y frequency for this x mode
    std::vector<int> ns;
    const int n_hi = static_cast<int>(std::floor(std::sqrt(std::max(0.0, (hi - xi2) / M))));
    for (int n = -n_hi; n <= n_hi; ++n) {
      const double mu = xi2 + M * n * n;
      if (mu > lo && mu < hi) ns.push_back(n);
    }
    if (ns.empty()) continue;
    any = true;
    const int d = static_cast<int>(ns.size());
    Eigen::MatrixXcd A(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) A(a, b) = yfac(ns[b] - ns[a]);
      const double mu = xi2 + M * ns[a] * ns[a];
      A(a, a) += pen * sq(1.0 - h * h * mu);
    }
    best = std::min(best, linalg::hermitian_lambda_min(A));
  }
  if (!any) throw std::invalid_argument("flat_torus: empty spectral window");
  return best;
}

}  // namespace grushin
