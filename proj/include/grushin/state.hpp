#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "grushin/basis.hpp"
#include "grushin/cutoff.hpp"

namespace grushin {

using Field2D = Eigen::MatrixXcd;  // (ny x nx): row = y node, column = x node

// y nodes are uniform on [0, 2*pi); x nodes are the basis grid
struct Grid2D {
  Grid1D x;
  int ny = 0;

  double y(int j) const { return kTwoPi * j / ny; }
  double cell() const { return x.weight() * kTwoPi / ny; }
};

// Complex coefficients in the truncated eigenbasis {phi_{m,n} e^{iny}/sqrt(2pi)}.
struct StateVector {
  const SpectralBasis* basis = nullptr;
  Eigen::VectorXcd coeffs;

  double norm() const { return coeffs.norm(); }
};

StateVector zero_state(const SpectralBasis& basis);
StateVector unit_state(const SpectralBasis& basis, int index);

// L2 quadrature inner products on the grid
double field_norm(const Field2D& f, const Grid2D& g);

StateVector expand(const Field2D& field, const SpectralBasis& basis, const Grid2D& grid,
                   double* residual = nullptr);
Field2D synthesize(const StateVector& state, const Grid2D& grid);

StateVector apply_spectral_multiplier(const StateVector& state,
                                      const std::function<double(double)>& g_of_lambda_sq);

// coefficient (m,n) multiplied by chi0(scale * n)
StateVector fourier_y_cutoff(const StateVector& state, const CutoffProfile& chi0, double scale);

StateVector schrodinger_step(const StateVector& state, double t, int s);
StateVector heat_step(const StateVector& state, double t, int s);

// max over the y grid of the synthesized field of lambda^{2k} * state,
// extrapolated to x = +-1. Zero (to synthesis accuracy) on truncated data.
double boundary_trace(const StateVector& state, int k, const Grid2D& grid);

// spectral window psi applied as psi(h^2 lambda_sq); the profile is the even
// cutoff with plateau [0.55, 1.9] and support (0.5, 2.0)
CutoffProfile default_window();

// chi0 of the y-frequency localization: 1 on |z| <= (4 C1)^{(gamma+1)/2},
// 0 beyond (8 C1)^{(gamma+1)/2}
CutoffProfile default_chi0(double C1, double gamma);

}  // namespace grushin
