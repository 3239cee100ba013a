#include "grushin/cutoff.hpp"

#include <cmath>

namespace grushin {

namespace {
double g(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = g(u), b = g(1.0 - u);
  return a / (a + b);
}

CutoffProfile CutoffProfile::bump(double lo, double plateau_lo, double plateau_hi, double hi) {
  if (!(lo < plateau_lo && plateau_lo <= plateau_hi && plateau_hi < hi))
    throw std::invalid_argument("CutoffProfile: need lo < plateau_lo <= plateau_hi < hi");
  return {Kind::SmoothBump, lo, plateau_lo, plateau_hi, hi};
}

CutoffProfile CutoffProfile::indicator(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("CutoffProfile: need lo < hi");
  return {Kind::Indicator, lo, lo, hi, hi};
}

CutoffProfile CutoffProfile::even_bump(double plateau_hi, double hi) {
  if (!(0.0 <= plateau_hi && plateau_hi < hi))
    throw std::invalid_argument("CutoffProfile: need 0 <= plateau_hi < hi");
  return {Kind::SmoothBump, -hi, -plateau_hi, plateau_hi, hi};
}

double CutoffProfile::operator()(double z) const {
  if (kind == Kind::Indicator) return (z >= lo && z <= hi) ? 1.0 : 0.0;
  if (z <= lo || z >= hi) return 0.0;
  if (z < plateau_lo) return smooth_step((z - lo) / (plateau_lo - lo));
  if (z > plateau_hi) return smooth_step((hi - z) / (hi - plateau_hi));
  return 1.0;
}

double CutoffProfile::deriv(double z) const {
  // central difference at a scale well below the transition widths; the
  // profile is smooth so this is accurate to ~1e-10
  const double w = std::min(plateau_lo - lo, hi - plateau_hi);
  const double dz = 1e-5 * (w > 0 ? w : 1.0);
  return ((*this)(z + dz) - (*this)(z - dz)) / (2.0 * dz);
}

double CutoffProfile::deriv2(double z) const {
  const double w = std::min(plateau_lo - lo, hi - plateau_hi);
  const double dz = 3e-4 * (w > 0 ? w : 1.0);
  return ((*this)(z + dz) - 2.0 * (*this)(z) + (*this)(z - dz)) / (dz * dz);
}

}  // namespace grushin
