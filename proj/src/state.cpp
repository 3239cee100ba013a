#include "grushin/state.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace grushin {

namespace {

// fibers present in the basis -> list of pair indices, in fixed order
std::map<int, std::vector<int>> fiber_index(const SpectralBasis& basis) {
  std::map<int, std::vector<int>> fibers;
  for (int j = 0; j < basis.size(); ++j) fibers[basis.pairs[j].n].push_back(j);
  return fibers;
}

void check_grid(const SpectralBasis& basis, const Grid2D& grid) {
  if (grid.ny < 2) throw std::invalid_argument("Grid2D: need at least 2 y nodes");
  if (grid.x.n != basis.grid.n || std::abs(grid.x.spacing - basis.grid.spacing) > 1e-14)
    throw std::invalid_argument("Grid2D: x grid must match the basis grid");
  // the y grid has to resolve every retained Fourier mode
  if (2 * (basis.n_max_used + 1) > grid.ny)
    throw std::invalid_argument("Grid2D: y grid too coarse for the basis fibers");
}

}  // namespace

StateVector zero_state(const SpectralBasis& basis) {
  StateVector st;
  st.basis = &basis;
  st.coeffs = Eigen::VectorXcd::Zero(basis.size());
  return st;
}

StateVector unit_state(const SpectralBasis& basis, int index) {
  StateVector st = zero_state(basis);
  st.coeffs(index) = 1.0;
  return st;
}

double field_norm(const Field2D& f, const Grid2D& g) {
  return std::sqrt(f.squaredNorm() * g.cell());
}

StateVector expand(const Field2D& field, const SpectralBasis& basis, const Grid2D& grid,
                   double* residual) {
  check_grid(basis, grid);
  if (field.rows() != grid.ny || field.cols() != grid.x.n)
    throw std::invalid_argument("expand: field shape does not match the grid");
  StateVector st = zero_state(basis);
  auto fibers = fiber_index(basis);

  const double wy = kTwoPi / grid.ny;
  const double wx = grid.x.weight();
  const double ynorm = 1.0 / std::sqrt(kTwoPi);
  for (const auto& [n, idx] : fibers) {
    // \hat u_n(x) = sum_y u(x,y) e^{-iny} wy / sqrt(2pi)
    Eigen::VectorXcd phase(grid.ny);
    for (int j = 0; j < grid.ny; ++j)
      phase(j) = std::polar(wy * ynorm, -n * grid.y(j));
    Eigen::RowVectorXcd uhat = phase.transpose() * field;  // length nx
    for (int j : idx) {
      const auto& p = basis.pairs[j];
      Complex a = 0.0;
      for (int i = 0; i < grid.x.n; ++i) a += uhat(i) * p.vec[i];
      st.coeffs(j) = a * wx;
    }
  }
  if (residual) {
    Field2D back = synthesize(st, grid);
    const double nrm = field_norm(field, grid);
    *residual = nrm > 0 ? field_norm(back - field, grid) / nrm : 0.0;
  }
  return st;
}

Field2D synthesize(const StateVector& state, const Grid2D& grid) {
  const SpectralBasis& basis = *state.basis;
  check_grid(basis, grid);
  auto fibers = fiber_index(basis);

  Field2D out = Field2D::Zero(grid.ny, grid.x.n);
  const double ynorm = 1.0 / std::sqrt(kTwoPi);
  for (const auto& [n, idx] : fibers) {
    Eigen::RowVectorXcd g = Eigen::RowVectorXcd::Zero(grid.x.n);
    for (int j : idx) {
      const auto& p = basis.pairs[j];
      const Complex a = state.coeffs(j);
      if (a == Complex(0.0)) continue;
      for (int i = 0; i < grid.x.n; ++i) g(i) += a * p.vec[i];
    }
    Eigen::VectorXcd phase(grid.ny);
    for (int j = 0; j < grid.ny; ++j) phase(j) = std::polar(ynorm, n * grid.y(j));
    out.noalias() += phase * g;
  }
  return out;
}

StateVector apply_spectral_multiplier(const StateVector& state,
                                      const std::function<double(double)>& g) {
  StateVector out = state;
  for (int j = 0; j < out.basis->size(); ++j) {
    const double v = g(out.basis->pairs[j].lambda_sq);
    if (!std::isfinite(v))
      throw std::invalid_argument("apply_spectral_multiplier: non-finite multiplier value");
    out.coeffs(j) *= v;
  }
  return out;
}

StateVector fourier_y_cutoff(const StateVector& state, const CutoffProfile& chi0, double scale) {
  StateVector out = state;
  for (int j = 0; j < out.basis->size(); ++j)
    out.coeffs(j) *= chi0(scale * out.basis->pairs[j].n);
  return out;
}

StateVector schrodinger_step(const StateVector& state, double t, int s) {
  StateVector out = state;
  for (int j = 0; j < out.basis->size(); ++j) {
    const double lam2s = std::pow(out.basis->pairs[j].lambda_sq, s);
    out.coeffs(j) *= std::polar(1.0, -t * lam2s);
  }
  return out;
}

StateVector heat_step(const StateVector& state, double t, int s) {
  if (t < 0.0) throw std::invalid_argument("heat_step: t must be >= 0");
  StateVector out = state;
  for (int j = 0; j < out.basis->size(); ++j) {
    const double lam2s = std::pow(out.basis->pairs[j].lambda_sq, s);
    out.coeffs(j) *= std::exp(-t * lam2s);
  }
  return out;
}

double boundary_trace(const StateVector& state, int k, const Grid2D& grid) {
  if (k < 0) throw std::invalid_argument("boundary_trace: k must be >= 0");
  StateVector pw = apply_spectral_multiplier(
      state, [k](double lsq) { return std::pow(lsq, k); });
  Field2D f = synthesize(pw, grid);
  const int nx = grid.x.n;
  if (nx < 5) throw std::invalid_argument("boundary_trace: grid too small");
  // quartic (5-point) extrapolation of the interior samples to the endpoint;
  // with uniform spacing the endpoint weights are binomial
  auto extrap = [&](int j, bool right) {
    Complex v = 0.0;
    static const double w[5] = {5.0, -10.0, 10.0, -5.0, 1.0};
    for (int q = 0; q < 5; ++q) {
      const int col = right ? nx - 1 - q : q;
      v += w[q] * f(j, col);
    }
    return std::abs(v);
  };
  double worst = 0.0;
  for (int j = 0; j < grid.ny; ++j)
    worst = std::max({worst, extrap(j, false), extrap(j, true)});
  return worst;
}

CutoffProfile default_window() { return CutoffProfile::bump(0.5, 0.55, 1.9, 2.0); }

CutoffProfile default_chi0(double C1, double gamma) {
  const double p = 0.5 * (gamma + 1.0);
  return CutoffProfile::even_bump(std::pow(4.0 * C1, p), std::pow(8.0 * C1, p));
}

}  // namespace grushin
