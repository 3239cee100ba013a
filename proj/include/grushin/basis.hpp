#pragma once

#include <limits>
#include <vector>

#include "grushin/fiber.hpp"
#include "grushin/types.hpp"

namespace grushin {

struct BasisOptions {
  int m_max = std::numeric_limits<int>::max();
  int n_cap = std::numeric_limits<int>::max();
  // minimal sampling of the fastest oscillation 2*pi/Lambda admitted by the grid
  double min_points_per_wavelength = 12.0;
  int threads = 2;
};

// Truncated Hilbert basis {phi_{m,n}(x) e^{iny}} of the operator, holding
// every fiber eigenpair with sqrt(lambda_sq) <= cutoff (subject to the
// optional m/n caps), sorted by lambda_sq.
struct SpectralBasis {
  GrushinParams params;
  Grid1D grid;
  double cutoff = 0.0;
  BasisOptions options;
  std::vector<FiberEigenpair> pairs;
  int n_max_used = 0;

  int size() const { return static_cast<int>(pairs.size()); }
  // first index with lambda_sq > lsq (pairs are sorted by lambda_sq)
  int upper_index(double lsq) const;
};

SpectralBasis build_basis(const GrushinParams& params, double cutoff, const Grid1D& grid,
                          const BasisOptions& options = {});

struct WeylReport {
  long count = 0;           // #{(m,n): lambda_{m,n} <= Lambda}
  long window_count = 0;    // restricted to lambda in [Lambda/sqrt(2), sqrt(2)*Lambda]
  long degenerate_count = 0;  // window pairs with |n| >= Lambda / b0
};

WeylReport weyl_count(const SpectralBasis& basis, double lambda, double b0 = 0.1);

// Best constant of the coercivity inequality ||D_y|^{2/(gamma+1)} u| <= C1 |Delta u|
// on the truncated basis: sup over pairs with n != 0 of |n|^{2/(gamma+1)} / lambda_sq.
struct C1Estimate {
  double value = 0.0;
  int at_n = 0;
  int at_m = 0;
};
C1Estimate estimate_C1(const SpectralBasis& basis);

// L2 mass of the eigenfunction outside |x| <= 2 b0^{1/gamma}. Requires the
// degenerate-regime condition |n| >= lambda / b0.
double concentration_profile(const FiberEigenpair& pair, double b0, const Grid1D& grid,
                             const GrushinParams& params);

}  // namespace grushin
