#pragma once

#include <string>
#include <vector>

#include "grushin/observability.hpp"
#include "grushin/types.hpp"

namespace grushin {

struct PhasePoint {
  double x = 0.0, y = 0.0, xi = 0.0, eta = 0.0;
};

// Sampled trajectory of the broken Hamiltonian flow of p = xi^2 + |x|^{2g} eta^2
// on [-1,1]_x x T_y with reflection xi -> -xi at |x| = 1.
struct Trajectory {
  std::vector<double> t;
  std::vector<PhasePoint> pts;
  std::vector<double> reflections;
  double p0 = 0.0;
  double eta0 = 0.0;
  bool grazing = false;  // a near-tangential wall hit was detected

  double energy(const PhasePoint& q, double gamma) const;
};

struct FirstIntegralReport {
  double max_energy_drift = 0.0;  // max |p - p0| / p0
  bool y_monotone = true;         // sign of dy/dt matches sign of eta0 throughout
};

struct GccReport {
  double T0 = 0.0;
  double c0 = 0.0;  // certified minimal time fraction (== min_time_fraction)
  long samples_tested = 0;
  double min_time_fraction = 0.0;
  PhasePoint worst_initial;
  bool certified = false;
  long discarded_grazing = 0;
  double worst_hit_time = 0.0;
  double max_energy_drift = 0.0;
  bool advance_inequality_ok = true;  // per-window y-advance bound of the proof
};

Trajectory integrate_flow(const PhasePoint& start, double gamma, double T, double dt);

FirstIntegralReport first_integrals(const Trajectory& traj, double gamma);

GccReport gcc_certify(double gamma, const ObservationRegion& region, double b0, double T0,
                      int sample_count, double dt = 1e-3, double delta = 0.1, int threads = 2);

struct HittingRow {
  double gamma = 0.0;
  double worst_hit_time = 0.0;
  double slope_diagnostic = 0.0;  // log worst time against gamma*log(1/delta_eff)
};

std::vector<HittingRow> hitting_time_scaling(const std::vector<double>& gammas,
                                             const ObservationRegion& region, double b0,
                                             int sample_count, double T0, double dt = 1e-3,
                                             int threads = 2);

}  // namespace grushin
