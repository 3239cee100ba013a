#pragma once

#include <Eigen/Dense>

#include "grushin/cutoff.hpp"
#include "grushin/observability.hpp"
#include "grushin/types.hpp"

namespace grushin {

// Field on the doubled torus [-1,3) x [0,2*pi). The x grid holds
// 2*(N+1) uniform nodes (the Dirichlet nodes x = -1, 1 included); an even
// interior count N keeps the Lipschitz points x = 0, 2 of the extended
// coefficient off the grid.
struct ExtendedField {
  enum class Parity { OddExtended, Generic };

  Eigen::MatrixXcd f;  // (ny x nxt)
  Parity parity = Parity::Generic;

  int ny() const { return static_cast<int>(f.rows()); }
  int nxt() const { return static_cast<int>(f.cols()); }
  double dx() const { return 4.0 / nxt(); }
  double x(int i) const { return -1.0 + i * dx(); }
  double norm() const { return std::sqrt(f.squaredNorm() * dx() * kTwoPi / ny()); }
};

// odd extension across x = 1: f~ = f on |x| <= 1, f~(x,y) = -f(2-x, y) on
// 1 <= x <= 3; the input samples live on the interior grid of (-1,1)
ExtendedField odd_extend(const Eigen::MatrixXcd& field_on_M, const Grid1D& xgrid);

// extended degenerate coefficient a(x): |x|^gamma on |x|<=1, |2-x|^gamma on [1,3]
double extended_coefficient(double x, double gamma);

// M = (1/2) int_{-1}^{1} |x|^{2 gamma} dx = 1/(2 gamma + 1)
double mean_value(double gamma);
double mean_value_quadrature(double gamma, int nodes);  // cross-check path

// b(x) = (1/2i) int_{-1}^x (M - a(z)^2) dz by cumulative quadrature
Complex primitive_b(double gamma, double x, int nodes = 8192);

struct ResidualReport {
  double r_before = 0.0;      // ||(h^2 P_a + 1) v0||
  double r_after = 0.0;       // ||(h^2 Delta_M + 1) w0||
  double v_norm = 0.0;
  double w_minus_v = 0.0;     // ||w0 - v0||
  double localization_residual = 0.0;
};

ResidualReport conjugated_residual(const ExtendedField& v0, double gamma, double h, double eps,
                                   double C1 = 1.0);

// spectrally localized random field psi1(h D_x) chi0(h^eps D_y) (white noise)
ExtendedField make_localized_field(double gamma, double h, double eps, int nxt, int ny,
                                   unsigned seed, double C1 = 1.0);

// quasimode-cost analog for Delta_M = d_x^2 + M d_y^2 on the doubled torus
// with the exact exponential basis; omega_0 is a horizontal strip
double flat_torus_resolvent_check(const ObservationRegion& region, double h, double M,
                                  double alpha = 2.0);

}  // namespace grushin
