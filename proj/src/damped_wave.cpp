#include "grushin/damped_wave.hpp"

#include <cmath>
#include <stdexcept>

#include "grushin/linalg.hpp"

namespace grushin {

double DampedSystem::energy(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
  return (lambda_sq.array() * u.array().abs2()).sum() + v.squaredNorm();
}

Eigen::MatrixXcd DampedSystem::generator_matrix() const {
  const int N = dim();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  A.block(0, N, N, N).setIdentity();
  A.block(N, 0, N, N) = (-lambda_sq).asDiagonal().toDenseMatrix().cast<Complex>();
  A.block(N, N, N, N) = -B;
  return A;
}

DampedSystem assemble_damped(const SpectralBasis& basis, const ObservationRegion& region) {
  if (basis.size() == 0) throw std::invalid_argument("assemble_damped: empty basis");
  DampedSystem sys;
  sys.basis = &basis;
  sys.lambda_sq.resize(basis.size());
  for (int j = 0; j < basis.size(); ++j) sys.lambda_sq(j) = basis.pairs[j].lambda_sq;
  if (region.length() <= 0.0) {
    sys.B = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  } else {
    Observatory obs(basis, region);
    sys.B = obs.omega_matrix();
  }
  return sys;
}

EnergyTrace evolve_damped(const DampedSystem& sys, const Eigen::VectorXcd& u0,
                          const Eigen::VectorXcd& u1, double T, double dt) {
  const int N = sys.dim();
  if (u0.size() != N || u1.size() != N)
    throw std::invalid_argument("evolve_damped: initial data size mismatch");
  if (T <= 0.0 || dt <= 0.0) throw std::invalid_argument("evolve_damped: need positive T, dt");

  // classical RK4 on the block system u' = v, v' = -Lambda^2 u - B v
  auto rhs = [&](const Eigen::VectorXcd& u, const Eigen::VectorXcd& v, Eigen::VectorXcd& du,
                 Eigen::VectorXcd& dv) {
    du = v;
    dv.noalias() = -(sys.B * v);
    dv.array() -= sys.lambda_sq.array().cast<Complex>() * u.array();
  };

  EnergyTrace trace;
  {  // graph energy E(A (u0, u1)): A(u0,u1) = (u1, -Lambda^2 u0 - B u1)
    Eigen::VectorXcd w = -(sys.B * u1);
    w.array() -= sys.lambda_sq.array().cast<Complex>() * u0.array();
    trace.initial_graph_energy = sys.energy(u1, w);
  }

  Eigen::VectorXcd u = u0, v = u1;
  Eigen::VectorXcd k1u(N), k1v(N), k2u(N), k2v(N), k3u(N), k3v(N), k4u(N), k4v(N), tu(N), tv(N);
  const long steps = std::lround(T / dt);
  double E_prev = sys.energy(u, v);
  const double E0 = E_prev;
  trace.times.push_back(0.0);
  trace.energies.push_back(E_prev);
  for (long step = 1; step <= steps; ++step) {
    rhs(u, v, k1u, k1v);
    tu = u + 0.5 * dt * k1u;
    tv = v + 0.5 * dt * k1v;
    rhs(tu, tv, k2u, k2v);
    tu = u + 0.5 * dt * k2u;
    tv = v + 0.5 * dt * k2v;
    rhs(tu, tv, k3u, k3v);
    tu = u + dt * k3u;
    tv = v + dt * k3v;
    rhs(tu, tv, k4u, k4v);
    u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double E = sys.energy(u, v);
    trace.max_step_violation = std::max(trace.max_step_violation, (E - E_prev) / E0);
    E_prev = E;
    trace.times.push_back(step * dt);
    trace.energies.push_back(E);
  }
  return trace;
}

DecayFit decay_fit(const EnergyTrace& trace, double t1, double t2, double gamma) {
  if (t1 < 1.0 || t2 <= t1) throw std::invalid_argument("decay_fit: need 1 <= t1 < t2");
  if (trace.times.empty() || trace.times.back() < t2)
    throw std::invalid_argument("decay_fit: window outside the trace");
  std::vector<double> lt, le;
  DecayFit fit;
  const double graph = std::sqrt(trace.initial_graph_energy);
  for (size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < t1 || t > t2) continue;
    const double Eh = std::sqrt(std::max(trace.energies[i], 1e-300));
    lt.push_back(std::log(t));
    le.push_back(std::log(Eh));
    fit.bound_quantity =
        std::max(fit.bound_quantity, Eh * std::pow(t, 0.5 / gamma) / graph);
  }
  if (lt.size() < 4) throw std::invalid_argument("decay_fit: too few samples in the window");
  fit.slope = linalg::fit_line(lt, le).slope;
  // sustained slope below -2 * (1/(2 gamma)) marks the exponential tail of
  // the truncated system
  if (fit.slope < -2.0 / (2.0 * gamma)) fit.tail_detected = true;
  return fit;
}

double resolvent_norm(const DampedSystem& sys, double lambda) {
  const int N = sys.dim();
  if (std::abs(lambda) < 1.0)
    throw std::invalid_argument("resolvent_norm: |lambda| must be >= 1");
  // (i lam - A) (u,v) = (f,g) reduces to S u = g + i lam f + B f with
  // S = Lambda^2 - lam^2 + i lam B, and v = i lam u - f.
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(N, N);
  S = Complex(0.0, lambda) * sys.B;
  for (int j = 0; j < N; ++j) S(j, j) += sys.lambda_sq(j) - lambda * lambda;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(S);

  // no purely imaginary spectrum: S must be far from singular
  {
    Eigen::VectorXcd probe = Eigen::VectorXcd::Ones(N).normalized();
    const double res = (S * lu.solve(probe) - probe).norm();
    if (res > 1e-6)
      throw std::runtime_error("resolvent_norm: near-singular shift (imaginary-axis spectrum?)");
  }

  // energy weights: ||(u,v)||_H^2 = || (lam_j u_j, v_j) ||_2^2
  Eigen::VectorXd wu = sys.lambda_sq.array().sqrt();
  auto apply_T = [&](const Eigen::VectorXcd& f, const Eigen::VectorXcd& g, Eigen::VectorXcd& u,
                     Eigen::VectorXcd& v) {
    Eigen::VectorXcd rhs = g + Complex(0.0, lambda) * f + sys.B * f;
    u = lu.solve(rhs);
    v = Complex(0.0, lambda) * u - f;
  };
  auto apply_T_adj = [&](const Eigen::VectorXcd& f, const Eigen::VectorXcd& g,
                         Eigen::VectorXcd& u, Eigen::VectorXcd& v) {
    // (i lam - A)^* (u,v) = (f,g): the second row gives u = B v - i lam v - g,
    // and eliminating u from the first row leaves S^* v = f - i lam g
    Eigen::VectorXcd rhs = f - Complex(0.0, lambda) * g;
    v = lu.adjoint().solve(rhs);
    u = (sys.B * v) - Complex(0.0, lambda) * v - g;
  };

  // power iteration on M M^* with M = W T W^{-1}, W = diag(wu, 1)
  Eigen::VectorXcd zu(N), zv(N);
  for (int j = 0; j < N; ++j) {
    zu(j) = Complex(std::cos(0.7 * j + 0.3), std::sin(1.3 * j));
    zv(j) = Complex(std::sin(0.4 * j + 1.1), std::cos(2.1 * j));
  }
  double nz = std::sqrt(zu.squaredNorm() + zv.squaredNorm());
  zu /= nz;
  zv /= nz;
  double norm_sq = 0.0;
  for (int it = 0; it < 60; ++it) {
    // y = M^* z : unweight, adjoint solve, weight
    Eigen::VectorXcd fu = zu.cwiseProduct(wu.cast<Complex>());  // W^{-*} ... W diag real
    Eigen::VectorXcd u, v;
    apply_T_adj(fu, zv, u, v);
    Eigen::VectorXcd yu = u.cwiseQuotient(wu.cast<Complex>());
    Eigen::VectorXcd yv = v;
    // z' = M y
    Eigen::VectorXcd gu = yu.cwiseQuotient(wu.cast<Complex>());
    apply_T(gu, yv, u, v);
    Eigen::VectorXcd z2u = u.cwiseProduct(wu.cast<Complex>());
    Eigen::VectorXcd z2v = v;
    const double lam_est = std::sqrt(z2u.squaredNorm() + z2v.squaredNorm());
    z2u /= lam_est;
    z2v /= lam_est;
    const bool converged = it > 6 && std::abs(lam_est - norm_sq) < 1e-8 * lam_est;
    norm_sq = lam_est;
    zu = z2u;
    zv = z2v;
    if (converged) break;
  }
  return std::sqrt(norm_sq);
}

double ph_smallest_singular_value(const DampedSystem& sys, double h,
                                  const CutoffProfile& window) {
  const int N = sys.dim();
  std::vector<int> idx;
  for (int j = 0; j < N; ++j)
    if (window(h * h * sys.lambda_sq(j)) > 0.0) idx.push_back(j);
  if (idx.empty()) throw std::invalid_argument("ph_smallest_singular_value: empty window");
  const int n = static_cast<int>(idx.size());
  const double gamma = sys.basis->params.gamma;
  Eigen::MatrixXcd Ph(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Ph(a, b) = Complex(0.0, std::pow(h, gamma + 1.0)) * sys.B(idx[a], idx[b]);
      if (a == b) Ph(a, b) += h * h * sys.lambda_sq(idx[a]) - 1.0;
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ph);
  return svd.singularValues()(n - 1);
}

}  // namespace grushin
