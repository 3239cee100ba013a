#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace grushin {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using Complex = std::complex<double>;

// Parameters of the operator d_x^2 + |x|^{2*gamma} d_y^2 and of the power s
// applied to it in the evolution equations.
struct GrushinParams {
  double gamma = 1.0;
  int s = 1;

  void validate() const {
    if (gamma < 1.0) throw std::invalid_argument("GrushinParams: gamma must be >= 1");
    if (s < 1) throw std::invalid_argument("GrushinParams: s must be >= 1");
  }

  // true when s == (gamma+1)/2, the critical balance between step and power
  bool critical() const { return std::abs(2.0 * s - (gamma + 1.0)) < 1e-12; }
};

// Uniform grid of interior points of (a,b); the Dirichlet endpoints are not
// stored. An even point count keeps x=0 off the grid.
struct Grid1D {
  double a = -1.0;
  double b = 1.0;
  int n = 0;
  double spacing = 0.0;
  std::vector<double> points;

  static Grid1D interior(double a, double b, int n) {
    if (n < 1 || b <= a) throw std::invalid_argument("Grid1D: bad interval or point count");
    Grid1D g;
    g.a = a;
    g.b = b;
    g.n = n;
    g.spacing = (b - a) / (n + 1);
    g.points.resize(n);
    for (int i = 0; i < n; ++i) g.points[i] = a + (i + 1) * g.spacing;
    return g;
  }

  // L2 quadrature weight of one interior node (trapezoid with Dirichlet ends)
  double weight() const { return spacing; }
};

inline double sq(double x) { return x * x; }

// |x|^{2 gamma}, written to stay finite for x=0 and non-integer gamma
inline double potential(double x, double gamma) {
  return std::pow(std::abs(x), 2.0 * gamma);
}

}  // namespace grushin
