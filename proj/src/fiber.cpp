#include "grushin/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grushin/linalg.hpp"

namespace grushin {

Tridiag assemble_fiber_operator(int n, const GrushinParams& params, const Grid1D& grid) {
  params.validate();
  if (grid.n < 1 || grid.points.empty()) throw std::invalid_argument("fiber: empty grid");
  for (int i = 0; i + 1 < grid.n; ++i) {
    const double d = grid.points[i + 1] - grid.points[i];
    if (std::abs(d - grid.spacing) > 1e-12 * std::abs(grid.spacing))
      throw std::invalid_argument("fiber: grid must be uniform");
  }
  const double h2 = grid.spacing * grid.spacing;
  Tridiag op;
  op.diag.resize(grid.n);
  op.off.assign(std::max(0, grid.n - 1), -1.0 / h2);
  const double n2 = static_cast<double>(n) * n;
  for (int i = 0; i < grid.n; ++i)
    op.diag[i] = 2.0 / h2 + n2 * potential(grid.points[i], params.gamma);
  return op;
}

std::vector<FiberEigenpair> solve_fiber_spectrum(const Tridiag& op, int m_max, const Grid1D& grid,
                                                 int n_fiber) {
  if (m_max < 1) throw std::invalid_argument("solve_fiber_spectrum: m_max must be >= 1");
  auto eig = linalg::tridiag_smallest(op.diag, op.off, m_max, true);
  const double w = std::sqrt(grid.weight());
  std::vector<FiberEigenpair> out(eig.values.size());
  for (size_t m = 0; m < eig.values.size(); ++m) {
    auto& p = out[m];
    p.n = n_fiber;
    p.m = static_cast<int>(m) + 1;
    p.lambda_sq = eig.values[m];
    p.vec.resize(grid.n);
    // LAPACK returns unit 2-norm vectors; rescale to unit L2 quadrature norm
    double sign = 0.0;
    for (int i = 0; i < grid.n && sign == 0.0; ++i)
      if (std::abs(eig.vectors(i, m)) > 1e-300) sign = eig.vectors(i, m) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < grid.n; ++i) p.vec[i] = sign * eig.vectors(i, m) / w;
  }
  return out;
}

std::vector<double> fiber_eigenvalues_below(int n, const GrushinParams& params,
                                            const Grid1D& grid, double lambda_sq_cap) {
  auto op = assemble_fiber_operator(n, params, grid);
  return linalg::tridiag_values_in_range(op.diag, op.off, -1.0, lambda_sq_cap);
}

double scaling_check(const FiberEigenpair& pair, const GrushinParams& params) {
  if (pair.n == 0) throw std::invalid_argument("scaling_check: n must be nonzero");
  return pair.lambda_sq / std::pow(std::abs(static_cast<double>(pair.n)),
                                   2.0 / (params.gamma + 1.0));
}

std::vector<double> fiber_eigenvalues_richardson(int n, const GrushinParams& params,
                                                 const Grid1D& grid, int m_max) {
  auto coarse = assemble_fiber_operator(n, params, grid);
  auto fine_grid = Grid1D::interior(grid.a, grid.b, 2 * grid.n + 1);
  auto fine = assemble_fiber_operator(n, params, fine_grid);
  auto ec = linalg::tridiag_smallest(coarse.diag, coarse.off, m_max, false);
  auto ef = linalg::tridiag_smallest(fine.diag, fine.off, m_max, false);
  std::vector<double> out(ec.values.size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = (4.0 * ef.values[i] - ec.values[i]) / 3.0;  // scheme is O(h^2)
  return out;
}

}  // namespace grushin
