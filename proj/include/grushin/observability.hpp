#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "grushin/basis.hpp"
#include "grushin/cutoff.hpp"
#include "grushin/types.hpp"

namespace grushin {

// Horizontal strip omega = (-1,1)_x x (a1,a2)_y. a2 - a1 == 2*pi is the
// full-circle control case used by several identities.
struct ObservationRegion {
  double a1 = 0.0;
  double a2 = kTwoPi;

  static ObservationRegion strip(double a1, double a2);
  static ObservationRegion full_circle() { return {0.0, kTwoPi}; }
  double length() const { return a2 - a1; }
  bool full() const { return length() >= kTwoPi - 1e-14; }
};

struct Gramian {
  Eigen::MatrixXcd matrix;
  double horizon = 0.0;
  int s = 1;
  ObservationRegion region;
};

struct ScalingFit {
  std::vector<double> h_values;
  std::vector<double> alpha_star;  // bisected transition exponent per h
  std::vector<double> costs;       // cost at the critical exponent gamma+1, per h
  double exponent = 0.0;           // plateau estimate of the critical exponent
  double r_squared = 0.0;          // of alpha_star against log2(1/h)
};

struct RegimeRow {
  double T = 0.0;
  double lambda_cutoff = 0.0;
  int dim = 0;
  double lambda_min = 0.0;
  double constant = 0.0;
};

struct RegimeScanReport {
  std::vector<RegimeRow> rows;
  // per T value: "growth" | "plateau" | "mixed"
  std::vector<std::pair<double, std::string>> verdicts;
  std::string regime;  // subcritical / critical / supercritical classification
};

// Shared context for the Gramian-based experiments; caches the omega matrix
// (assembled once per basis+region pair, its blocks are reused by every scan).
class Observatory {
 public:
  Observatory(const SpectralBasis& basis, ObservationRegion region);

  const SpectralBasis& basis() const { return *basis_; }
  const ObservationRegion& region() const { return region_; }

  // quadratic-form matrix of u -> int_omega |u|^2 in the truncated basis:
  // the y factor closed-form, the x factor by quadrature
  const Eigen::MatrixXcd& omega_matrix() const;

  Gramian gramian(double T, int s, int dim = -1) const;

  // 1 / least eigenvalue of the Gramian; +inf sentinel when the least
  // eigenvalue falls below 1e-14
  double obs_constant(const Gramian& g) const;

  RegimeScanReport regime_scan(int s, const std::vector<double>& T_list,
                               const std::vector<double>& lambda_list) const;

  // least eigenvalue of P_omega + h^{-2 alpha} (h^2 Delta + 1)^2 on the
  // psi-window subspace {lambda_sq : psi(h^2 lambda_sq) > 0}
  double quasimode_cost(double h, double alpha, const CutoffProfile& window) const;

  // reference cost of the full-circle region on the same window
  double full_circle_cost(double h, double alpha, const CutoffProfile& window) const;

  ScalingFit fit_resolvent_exponent(const std::vector<double>& h_list,
                                    const CutoffProfile& window) const;

  // largest generalized eigenvalue of e^{-2T lambda^{2s}} against the heat
  // Gramian (closed-form time integral)
  double heat_final_constant(double T, int s) const;

 private:
  std::pair<int, int> window_range(double h, const CutoffProfile& window) const;

  const SpectralBasis* basis_;
  ObservationRegion region_;
  mutable Eigen::MatrixXcd omega_;
  mutable bool omega_ready_ = false;
};

// T_inf >= a1 / mu0^s in the critical case s = (gamma+1)/2
double tinf_lower_bound(double gamma, int s, const ObservationRegion& region, double mu0);

// t' = h^{2s-1} * T_semiclassical
double localized_time_rescale(double h, int s, double T_semiclassical);

}  // namespace grushin
