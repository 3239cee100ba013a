#pragma once

#include <Eigen/Dense>
#include <vector>

#include "grushin/observability.hpp"

namespace grushin {

// Galerkin damped wave system U' = [[0, I], [-Lambda^2, -B]] U on the
// coefficient space of the truncated basis, with B the strip form matrix.
// The energy is E(U) = sum lambda^2 |u_j|^2 + sum |v_j|^2.
struct DampedSystem {
  const SpectralBasis* basis = nullptr;
  Eigen::VectorXd lambda_sq;
  Eigen::MatrixXcd B;

  int dim() const { return static_cast<int>(lambda_sq.size()); }
  double energy(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;
  // block generator as a dense matrix (diagnostics / small systems only)
  Eigen::MatrixXcd generator_matrix() const;
};

DampedSystem assemble_damped(const SpectralBasis& basis, const ObservationRegion& region);

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  double initial_graph_energy = 0.0;  // E(A (u0, u1))
  double max_step_violation = 0.0;    // max relative per-step energy increase
};

EnergyTrace evolve_damped(const DampedSystem& sys, const Eigen::VectorXcd& u0,
                          const Eigen::VectorXcd& u1, double T, double dt);

struct DecayFit {
  double slope = 0.0;           // of log E^{1/2} against log t over the window
  double bound_quantity = 0.0;  // max of E(t)^{1/2} t^{1/(2 gamma)} / E(A U0)^{1/2}
  bool tail_detected = false;   // window reaches the exponential tail of the truncation
};

DecayFit decay_fit(const EnergyTrace& trace, double t1, double t2, double gamma);

// operator norm of (i lambda - A)^{-1} in the energy inner product
double resolvent_norm(const DampedSystem& sys, double lambda);

// smallest singular value of P_h = -h^2 Delta - 1 + i h^{gamma+1} b restricted
// to the spectral-window subspace
double ph_smallest_singular_value(const DampedSystem& sys, double h,
                                  const CutoffProfile& window);

}  // namespace grushin
