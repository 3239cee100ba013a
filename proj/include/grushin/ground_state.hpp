#pragma once

#include <vector>

#include "grushin/types.hpp"

namespace grushin {

// Whole-line ground state of Q_gamma = -d_z^2 + |z|^{2 gamma}, computed on a
// Dirichlet truncation [-R, R] wide enough that the boundary error is far
// below the reported tolerances.
struct GroundState {
  double gamma = 1.0;
  double mu0 = 0.0;       // ground eigenvalue
  double radius = 0.0;    // truncation half-width R
  double spacing = 0.0;
  std::vector<double> samples;  // interior grid of [-R, R], L2-normalized
  double c_gamma = 0.0;   // fitted constant of the tail c z^{-gamma/2} e^{-z^{gamma+1}/(gamma+1)}
  double x_tail = 0.0;    // switch point between samples and the tail form

  // interpolated value; switches to the tail form once the amplitude falls
  // to ~1e-10, where the samples approach the eigenvector noise floor. The
  // tail carries the first-order connection coefficient a_-(z) so the two
  // branches agree to the square of the algebraic remainder.
  double at(double z) const;
  double deriv_at(double z) const;
  double grid_point(int i) const { return -radius + (i + 1) * spacing; }
};

double default_radius(double gamma);

GroundState solve_ground_state(double gamma, double radius = 0.0, int grid_points = 0);

// Windowed statistics of r(x) = phi(x) x^{gamma/2} exp(x^{gamma+1}/(gamma+1)).
// For gamma == 1 the power correction is absent (the Gaussian has no x^{-1/2}
// prefactor) and r(x) = phi(x) exp(x^2/2) is used instead.
struct PlateauFit {
  double mean = 0.0;
  double variation = 0.0;  // (max - min) / |mean| over the window
};
PlateauFit plateau_fit(const GroundState& gs, double x_lo, double x_hi);

// Plateau value of r over the window; fails with a diagnostic if the
// relative variation exceeds 1e-3 (no plateau certified).
double asymptotic_constant(const GroundState& gs, double x_lo, double x_hi);

// Tail frame of the connection-matrix expansion: phi = a_- phi_- + a_+ phi_+
// with phi_{-+} = x^{-gamma/2} exp(-+ x^{gamma+1}/(gamma+1)). a_plus is stored
// multiplied by exp(+2 x^{gamma+1}/(gamma+1)) so every quantity stays O(1).
struct NeumannTail {
  double gamma = 0.0;
  double x0 = 0.0;
  int terms = 0;
  std::vector<double> xs;
  std::vector<double> a_minus;
  std::vector<double> a_plus_scaled;
  double fitted_C = 0.0;  // constant of |a_-(x) - 1| <= C x^{-(gamma-1)}

  double a_plus(int i) const;  // unscaled value (may underflow to 0)
  // frame value a_- phi_- + a_+ phi_+ at grid index i; equals
  // (a_- + a~_+) x^{-gamma/2} e^{-Z}
  double frame_value(int i) const;
};

NeumannTail neumann_tail(const GroundState& gs, double x0, int terms);

// p_gamma(w, x) = |w|^{1/(2(gamma+1))} phi(|w|^{1/(gamma+1)} x), still
// L2(R)-normalized, and its eigenvalue lambda_gamma(w) = mu0 |w|^{2/(gamma+1)}.
double rescaled_ground_state(const GroundState& gs, double w, double x);
double rescaled_eigenvalue(const GroundState& gs, double w);

}  // namespace grushin
