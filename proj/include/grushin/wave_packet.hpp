#pragma once

#include <Eigen/Dense>
#include <vector>

#include "grushin/cutoff.hpp"
#include "grushin/ground_state.hpp"
#include "grushin/observability.hpp"
#include "grushin/types.hpp"

namespace grushin {

// Traveling wave packet v_n(t,x,y) = sum_k psi(h_n k) e^{iky - it lam(k)^s}
// p(k, x) built from rescaled whole-line ground states, with h_n = 2^{-n}.
// Defined on R_x x T_y; the cutoff chi transplants it onto (-1,1)_x x T_y.
struct WavePacketConfig {
  int n = 4;               // dyadic index
  CutoffProfile psi;       // k-profile, supported inside [1/2, 1]
  CutoffProfile chi;       // x-cutoff: 1 on |x|<=1/4, 0 on |x|>=1/2
  double T0 = 0.0;
  double gamma = 3.0;
  int s = 2;

  double h() const { return std::pow(2.0, -n); }
  std::vector<int> modes() const;  // k with psi(h_n k) > 0
  void validate() const;           // critical balance s = (gamma+1)/2
};

// default profiles and the horizon T0 = 0.5 a1 / mu0^s
WavePacketConfig make_packet_config(int n, double gamma, const ObservationRegion& region,
                                    double mu0, double T0_factor = 0.5);

struct PacketGrid {
  double Lx = 3.0;  // x spans [-Lx, Lx]
  int nx = 0;
  int ny = 0;

  static PacketGrid for_config(const WavePacketConfig& cfg, double Lx = 3.0);
  double x(int i) const { return -Lx + (i + 1) * dx(); }
  double dx() const { return 2.0 * Lx / (nx + 1); }
  double y(int j) const { return kTwoPi * j / ny; }
};

// samples of v_n(t, ., .) as a (ny x nx) matrix
Eigen::MatrixXcd build_packet(const WavePacketConfig& cfg, const GroundState& gs,
                              const PacketGrid& grid, double t);

// single-point direct k-sum evaluation
Complex packet_value(const WavePacketConfig& cfg, const GroundState& gs, double t, double x,
                     double y);

// sqrt(sum_k psi(h_n k)^2); the normalized packet divides by this
double initial_norm(const WavePacketConfig& cfg);

struct OmegaMassResult {
  double mass = 0.0;       // int_0^T0 int_omega |chi v_n|^2 / initial_norm^2
  bool regime_warning = false;  // T0 >= a1 / mu0^s: outside the proof's regime
};
OmegaMassResult omega_mass(const WavePacketConfig& cfg, const GroundState& gs,
                           const ObservationRegion& region, int time_steps);

// max_t || [(-Delta)^s, chi] v_n (t) ||; the commutator expansion keeps only
// terms carrying a chi derivative, so the integrand lives in 1/4<=|x|<=1/2
double source_norm(const WavePacketConfig& cfg, const GroundState& gs,
                   const std::vector<double>& t_list);

struct PoissonTerm {
  Complex value;
  double phase_slope = 0.0;  // dPhi/dw = y - 2 pi m - t mu0^s
  bool near_stationary = false;
};
PoissonTerm poisson_term(const WavePacketConfig& cfg, const GroundState& gs, int m, double t,
                         double x, double y);

struct PoissonEnvelopeEntry {
  int m = 0;
  double measured = 0.0;
  double bound = 0.0;
};
// fits the integration-by-parts envelope C h^{3g/(g+1)-1/(2(g+1))-1}/|m-c0|^3
// at the calibration point and evaluates it on the given m list
std::vector<PoissonEnvelopeEntry> poisson_envelope(const WavePacketConfig& cfg,
                                                   const GroundState& gs,
                                                   const ObservationRegion& region,
                                                   const std::vector<int>& m_list, double t,
                                                   double x, double y, double calibration_C = 0.0);

}  // namespace grushin
