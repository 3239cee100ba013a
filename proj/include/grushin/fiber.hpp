#pragma once

#include <vector>

#include "grushin/types.hpp"

namespace grushin {

// Symmetric tridiagonal matrix stored by diagonals.
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;
};

// One eigenpair of the fiber operator -d_x^2 + n^2 |x|^{2 gamma} on (-1,1)
// with Dirichlet ends. lambda_sq is the eigenvalue; the eigenfunction is
// L2-normalized under the grid quadrature with the sign fixed so that the
// first nonzero sample is positive.
struct FiberEigenpair {
  int n = 0;
  int m = 1;
  double lambda_sq = 0.0;
  std::vector<double> vec;
};

// Second-order central-difference discretization of the fiber operator;
// Dirichlet rows eliminated. Diagonal entries 2/h^2 + n^2 |x_i|^{2 gamma},
// off-diagonal -1/h^2.
Tridiag assemble_fiber_operator(int n, const GrushinParams& params, const Grid1D& grid);

// m_max smallest eigenpairs of the assembled fiber operator, ascending.
std::vector<FiberEigenpair> solve_fiber_spectrum(const Tridiag& op, int m_max, const Grid1D& grid,
                                                 int n_fiber);

// Eigenvalues only, restricted to lambda_sq <= cap. Used by the exhaustive
// enumeration paths (Weyl counts, C1 scans) where vectors are not needed.
std::vector<double> fiber_eigenvalues_below(int n, const GrushinParams& params,
                                            const Grid1D& grid, double lambda_sq_cap);

// mu_{m,n} = lambda_sq / |n|^{2/(gamma+1)}; converges, for fixed m and
// growing |n|, to the m-th whole-line eigenvalue of -d_z^2 + |z|^{2 gamma}.
double scaling_check(const FiberEigenpair& pair, const GrushinParams& params);

// Richardson-extrapolated fiber eigenvalues: combines solves at the given
// grid and at half spacing for an O(h^4) eigenvalue estimate.
std::vector<double> fiber_eigenvalues_richardson(int n, const GrushinParams& params,
                                                 const Grid1D& grid, int m_max);

}  // namespace grushin
