#pragma once

#include <stdexcept>

namespace grushin {

// Compactly supported cutoff profile on the real line. The smooth variant is
// C-infinity: it equals 1 on [plateau_lo, plateau_hi], 0 outside
// (lo, hi), and interpolates with the standard exp(-1/t) transition.
struct CutoffProfile {
  enum class Kind { SmoothBump, Indicator };

  Kind kind = Kind::SmoothBump;
  double lo = 0.0, plateau_lo = 0.0, plateau_hi = 0.0, hi = 0.0;

  static CutoffProfile bump(double lo, double plateau_lo, double plateau_hi, double hi);
  static CutoffProfile indicator(double lo, double hi);

  // even profile in |z|: plateau [0, plateau_hi], support (-hi, hi)
  static CutoffProfile even_bump(double plateau_hi, double hi);

  double operator()(double z) const;

  // derivatives used by the commutator expansion; exact for the smooth kind
  double deriv(double z) const;
  double deriv2(double z) const;
};

// smooth step: 0 for u<=0, 1 for u>=1, C-infinity monotone in between
double smooth_step(double u);

}  // namespace grushin
