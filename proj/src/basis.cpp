#include "grushin/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "grushin/linalg.hpp"

namespace grushin {

int SpectralBasis::upper_index(double lsq) const {
  auto it = std::upper_bound(pairs.begin(), pairs.end(), lsq,
                             [](double v, const FiberEigenpair& p) { return v < p.lambda_sq; });
  return static_cast<int>(it - pairs.begin());
}

SpectralBasis build_basis(const GrushinParams& params, double cutoff, const Grid1D& grid,
                          const BasisOptions& options) {
  params.validate();
  const double lsq_cap = cutoff * cutoff;

  // resolution guard: the fastest retained mode oscillates with wavelength
  // 2*pi/cutoff in x near the degenerate line
  const double ppw = kTwoPi / (cutoff * grid.spacing);
  if (ppw < options.min_points_per_wavelength)
    throw std::invalid_argument("build_basis: grid too coarse for the requested cutoff");
  if (grid.n % 2 != 0)
    throw std::invalid_argument("build_basis: use an even interior point count (x=0 off-grid)");

  // ground eigenvalue of the n=0 fiber is pi^2/4 + O(h^2); the cutoff must
  // admit at least that pair
  {
    auto e0 = fiber_eigenvalues_below(0, params, grid, lsq_cap);
    if (e0.empty()) throw std::invalid_argument("build_basis: cutoff below the spectral bottom");
  }

  // discover the fiber range: lambda_{1,n} grows monotonically in |n|
  int n_max = 0;
  {
    auto ground = [&](int n) {
      auto op = assemble_fiber_operator(n, params, grid);
      return linalg::tridiag_smallest(op.diag, op.off, 1, false).values[0];
    };
    int n = 1;
    while (n <= options.n_cap && ground(n) <= lsq_cap) {
      n_max = n;
      if (ground(std::min(options.n_cap, n * 2)) > lsq_cap || n == options.n_cap) {
        // refine by scan between n and 2n
        int lo = n, hi = std::min(options.n_cap, n * 2);
        while (lo + 1 < hi) {
          int mid = (lo + hi) / 2;
          if (ground(mid) <= lsq_cap)
            lo = mid;
          else
            hi = mid;
        }
        n_max = (ground(hi) <= lsq_cap) ? hi : lo;
        break;
      }
      n *= 2;
    }
    n_max = std::min(n_max, options.n_cap);
  }

  SpectralBasis basis;
  basis.params = params;
  basis.grid = grid;
  basis.cutoff = cutoff;
  basis.options = options;
  basis.n_max_used = n_max;

  // fibers are independent; solve them in parallel and merge in fixed order
  std::vector<std::vector<FiberEigenpair>> per_fiber(n_max + 1);
  auto solve_one = [&](int n) {
    auto op = assemble_fiber_operator(n, params, grid);
    auto values = linalg::tridiag_values_in_range(op.diag, op.off, -1.0, lsq_cap);
    int m_count = std::min<int>(static_cast<int>(values.size()), options.m_max);
    if (m_count > 0) per_fiber[n] = solve_fiber_spectrum(op, m_count, grid, n);
  };
  const int nthreads = std::max(1, options.threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&, t]() {
      for (int n = t; n <= n_max; n += nthreads) solve_one(n);
    });
  for (auto& th : pool) th.join();

  for (int n = 0; n <= n_max; ++n) {
    for (auto& p : per_fiber[n]) {
      if (p.lambda_sq > lsq_cap) continue;
      basis.pairs.push_back(p);
      if (n > 0) {
        FiberEigenpair mirror = basis.pairs.back();
        mirror.n = -n;
        basis.pairs.push_back(std::move(mirror));
      }
    }
  }
  std::stable_sort(basis.pairs.begin(), basis.pairs.end(),
                   [](const FiberEigenpair& a, const FiberEigenpair& b) {
                     return a.lambda_sq < b.lambda_sq;
                   });
  return basis;
}

WeylReport weyl_count(const SpectralBasis& basis, double lambda, double b0) {
  if (lambda > basis.cutoff + 1e-12)
    throw std::invalid_argument("weyl_count: lambda exceeds the basis cutoff");
  WeylReport r;
  const double lsq = lambda * lambda;
  const double wlo = lsq / 2.0, whi = 2.0 * lsq;
  for (const auto& p : basis.pairs) {
    if (p.lambda_sq <= lsq) ++r.count;
    if (p.lambda_sq >= wlo && p.lambda_sq <= whi) {
      ++r.window_count;
      if (std::abs(p.n) >= lambda / b0) ++r.degenerate_count;
    }
  }
  return r;
}

C1Estimate estimate_C1(const SpectralBasis& basis) {
  C1Estimate best;
  const double expo = 2.0 / (basis.params.gamma + 1.0);
  for (const auto& p : basis.pairs) {
    if (p.n == 0) continue;
    const double v = std::pow(std::abs(static_cast<double>(p.n)), expo) / p.lambda_sq;
    if (v > best.value) {
      best.value = v;
      best.at_n = p.n;
      best.at_m = p.m;
    }
  }
  if (best.value == 0.0)
    throw std::invalid_argument("estimate_C1: basis has no pair with n != 0");
  return best;
}

double concentration_profile(const FiberEigenpair& pair, double b0, const Grid1D& grid,
                             const GrushinParams& params) {
  const double lambda = std::sqrt(pair.lambda_sq);
  if (std::abs(pair.n) < lambda / b0)
    throw std::invalid_argument("concentration_profile: pair outside the degenerate regime");
  const double edge = 2.0 * std::pow(b0, 1.0 / params.gamma);
  double outside = 0.0;
  for (int i = 0; i < grid.n; ++i)
    if (std::abs(grid.points[i]) > edge) outside += pair.vec[i] * pair.vec[i];
  return outside * grid.weight();
}

}  // namespace grushin
