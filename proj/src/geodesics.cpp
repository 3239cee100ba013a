#include "grushin/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace grushin {

namespace {

struct Rhs {
  double gamma;
  void operator()(const PhasePoint& q, PhasePoint& dq) const {
    const double ax = std::abs(q.x);
    const double pot = std::pow(ax, 2.0 * gamma);
    dq.x = 2.0 * q.xi;
    dq.xi = -2.0 * gamma * (q.x >= 0 ? 1.0 : -1.0) * std::pow(ax, 2.0 * gamma - 1.0) *
            q.eta * q.eta;
    dq.y = 2.0 * pot * q.eta;
    dq.eta = 0.0;
  }
};

PhasePoint rk4(const Rhs& f, const PhasePoint& q, double h) {
  PhasePoint k1, k2, k3, k4, tmp;
  f(q, k1);
  tmp = {q.x + 0.5 * h * k1.x, q.y + 0.5 * h * k1.y, q.xi + 0.5 * h * k1.xi, q.eta};
  f(tmp, k2);
  tmp = {q.x + 0.5 * h * k2.x, q.y + 0.5 * h * k2.y, q.xi + 0.5 * h * k2.xi, q.eta};
  f(tmp, k3);
  tmp = {q.x + h * k3.x, q.y + h * k3.y, q.xi + h * k3.xi, q.eta};
  f(tmp, k4);
  return {q.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
          q.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
          q.xi + h / 6.0 * (k1.xi + 2 * k2.xi + 2 * k3.xi + k4.xi), q.eta};
}

constexpr double kWallTol = 1e-10;
constexpr double kGrazeTol = 1e-9;

// One broken-flow sampling step of length dt, with bisected wall events.
// Returns false when a grazing contact was found (the sample is unusable).
struct Stepper {
  Rhs f;
  PhasePoint q;      // y stored unwrapped
  std::vector<double>* reflections = nullptr;
  double t = 0.0;
  bool grazing = false;

  bool advance(double dt) {
    double remaining = dt;
    int guard = 0;
    while (remaining > 1e-15) {
      if (++guard > 64) throw std::runtime_error("geodesics: event loop failed to make progress");
      // protect the reduced regularity of the force at x=0 for 1 < gamma < 2
      double h = remaining;
      if (f.gamma > 1.0 && f.gamma < 2.0 && std::abs(q.x) < 1e-3) h = std::min(h, 0.5 * dt);
      PhasePoint next = rk4(f, q, h);
      if (std::abs(next.x) <= 1.0) {
        q = next;
        t += h;
        remaining -= h;
        continue;
      }
      // bisect the event time within (0, h]; the hit lands within ~1e-15 of
      // the wall and the state is left untouched apart from the xi flip, so
      // the reflection preserves p and eta exactly
      double lo = 0.0, hi = h;
      for (int it = 0; it < 80 && (hi - lo) > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(rk4(f, q, mid).x) > 1.0)
          hi = mid;
        else
          lo = mid;
      }
      PhasePoint hit = rk4(f, q, hi);
      if (std::abs(std::abs(hit.x) - 1.0) > kWallTol)
        throw std::runtime_error("geodesics: wall bisection failed");
      if (std::abs(hit.xi) < kGrazeTol) {
        grazing = true;
        return false;
      }
      hit.xi = -hit.xi;
      q = hit;
      t += hi;
      remaining -= hi;
      if (reflections) reflections->push_back(t);
    }
    return true;
  }
};

struct Halton {
  int index = 1;
  double next(int base) {
    double r = 0.0, f = 1.0;
    int i = index;
    while (i > 0) {
      f /= base;
      r += f * (i % base);
      i /= base;
    }
    return r;
  }
};

PhasePoint sample_initial(Halton& h, double gamma, double b0) {
  // low-discrepancy draw over (x0, y0, xi-sign, eta0, p0); xi0 solved from
  // p0 = xi0^2 + |x0|^{2 gamma} eta0^2
  const double u_x = h.next(2), u_y = h.next(3), u_eta = h.next(5), u_p = h.next(7);
  const double s_xi = h.next(11) < 0.5 ? -1.0 : 1.0;
  const double s_eta = h.next(13) < 0.5 ? -1.0 : 1.0;
  h.index++;
  const double eta = s_eta * (b0 + (1.0 / b0 - b0) * u_eta);
  const double p0 = 0.5 + 1.5 * u_p;
  double x_lim = std::min(1.0, std::pow(p0 / (eta * eta), 1.0 / (2.0 * gamma)));
  const double x0 = (2.0 * u_x - 1.0) * 0.999 * x_lim;
  const double y0 = kTwoPi * u_y;
  const double kin = p0 - potential(x0, gamma) * eta * eta;
  const double xi0 = s_xi * std::sqrt(std::max(0.0, kin));
  return {x0, y0, xi0, eta};
}

bool in_strip(double y, const ObservationRegion& r) {
  double w = std::fmod(y, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w > r.a1 && w < r.a2;
}

struct ScanResult {
  double fraction = 0.0;
  double hit_time = std::numeric_limits<double>::infinity();
  double drift = 0.0;
  bool grazing = false;
  bool advance_ok = true;
};

ScanResult scan_trajectory(const PhasePoint& start, double gamma, double T0, double dt,
                           const ObservationRegion& region, double b0, double delta) {
  Stepper st{Rhs{gamma}, start};
  const double p0 = start.xi * start.xi + potential(start.x, gamma) * start.eta * start.eta;
  const double window = 3.0 * delta / std::sqrt(p0);
  const double advance_bound =
      b0 * delta * std::pow(0.5 * delta, 2.0 * gamma) / (2.0 * std::sqrt(p0));
  ScanResult res;
  long in_count = 0, total = 0;
  std::deque<std::pair<double, double>> tail;  // (t, unwrapped y) ring for the window check
  tail.emplace_back(0.0, start.y);
  if (in_strip(start.y, region)) {
    ++in_count;
    res.hit_time = 0.0;
  }
  ++total;
  const long steps = std::lround(T0 / dt);
  for (long k = 0; k < steps; ++k) {
    if (!st.advance(dt)) {
      res.grazing = true;
      return res;
    }
    ++total;
    if (in_strip(st.q.y, region)) {
      ++in_count;
      res.hit_time = std::min(res.hit_time, st.t);
    }
    const double p = st.q.xi * st.q.xi + potential(st.q.x, gamma) * st.q.eta * st.q.eta;
    res.drift = std::max(res.drift, std::abs(p - p0) / p0);
    tail.emplace_back(st.t, st.q.y);
    while (tail.size() > 2 && tail.front().first <= st.t - window - dt) tail.pop_front();
    if (tail.front().first <= st.t - window) {
      if (std::abs(st.q.y - tail.front().second) < advance_bound) res.advance_ok = false;
    }
  }
  res.fraction = static_cast<double>(in_count) / static_cast<double>(total);
  return res;
}

}  // namespace

double Trajectory::energy(const PhasePoint& q, double gamma) const {
  return q.xi * q.xi + potential(q.x, gamma) * q.eta * q.eta;
}

Trajectory integrate_flow(const PhasePoint& start, double gamma, double T, double dt) {
  if (gamma < 1.0) throw std::invalid_argument("integrate_flow: gamma must be >= 1");
  if (std::abs(start.x) > 1.0) throw std::invalid_argument("integrate_flow: |x0| must be <= 1");
  if (dt <= 0.0 || T <= 0.0) throw std::invalid_argument("integrate_flow: need positive T, dt");
  Trajectory traj;
  traj.eta0 = start.eta;
  traj.p0 = start.xi * start.xi + potential(start.x, gamma) * start.eta * start.eta;
  Stepper st{Rhs{gamma}, start};
  st.reflections = &traj.reflections;
  const long steps = std::lround(T / dt);
  traj.t.reserve(steps + 1);
  traj.pts.reserve(steps + 1);
  traj.t.push_back(0.0);
  traj.pts.push_back(start);
  for (long k = 0; k < steps; ++k) {
    if (!st.advance(dt)) {
      traj.grazing = true;
      break;
    }
    traj.t.push_back(st.t);
    traj.pts.push_back(st.q);  // y is unwrapped; reduce mod 2*pi when displaying
  }
  return traj;
}

FirstIntegralReport first_integrals(const Trajectory& traj, double gamma) {
  if (traj.pts.empty()) throw std::invalid_argument("first_integrals: empty trajectory");
  FirstIntegralReport rep;
  const double sign = traj.eta0 >= 0 ? 1.0 : -1.0;
  for (size_t i = 0; i < traj.pts.size(); ++i) {
    const double p = traj.energy(traj.pts[i], gamma);
    rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(p - traj.p0) / traj.p0);
    if (i > 0) {
      const double dy = traj.pts[i].y - traj.pts[i - 1].y;
      if (sign * dy < -1e-12) rep.y_monotone = false;
    }
  }
  return rep;
}

GccReport gcc_certify(double gamma, const ObservationRegion& region, double b0, double T0,
                      int sample_count, double dt, double delta, int threads) {
  if (!(b0 > 0.0 && b0 < 1.0)) throw std::invalid_argument("gcc_certify: b0 must be in (0,1)");
  if (region.full()) {
    GccReport rep;
    rep.T0 = T0;
    rep.min_time_fraction = 1.0;
    rep.c0 = 1.0;
    rep.samples_tested = sample_count;
    rep.certified = true;
    return rep;
  }
  // the proof's smallness condition on delta: |xdot| >= sqrt(p0) inside J_delta
  if (std::pow(delta, 2.0 * gamma) / (b0 * b0) > 0.75 * 0.5)
    throw std::invalid_argument("gcc_certify: delta too large for the advance inequality");

  std::vector<PhasePoint> starts(sample_count);
  Halton h;
  for (int i = 0; i < sample_count; ++i) starts[i] = sample_initial(h, gamma, b0);

  std::vector<ScanResult> results(sample_count);
  std::vector<std::thread> pool;
  const int nthreads = std::max(1, threads);
  for (int tix = 0; tix < nthreads; ++tix)
    pool.emplace_back([&, tix]() {
      for (int i = tix; i < sample_count; i += nthreads)
        results[i] = scan_trajectory(starts[i], gamma, T0, dt, region, b0, delta);
    });
  for (auto& th : pool) th.join();

  GccReport rep;
  rep.T0 = T0;
  rep.min_time_fraction = 1.0;
  for (int i = 0; i < sample_count; ++i) {
    if (results[i].grazing) {
      ++rep.discarded_grazing;
      continue;
    }
    ++rep.samples_tested;
    rep.max_energy_drift = std::max(rep.max_energy_drift, results[i].drift);
    if (!results[i].advance_ok) rep.advance_inequality_ok = false;
    if (std::isfinite(results[i].hit_time))
      rep.worst_hit_time = std::max(rep.worst_hit_time, results[i].hit_time);
    else
      rep.worst_hit_time = std::numeric_limits<double>::infinity();
    if (results[i].fraction < rep.min_time_fraction) {
      rep.min_time_fraction = results[i].fraction;
      rep.worst_initial = starts[i];
    }
  }
  rep.c0 = rep.min_time_fraction;
  rep.certified = rep.samples_tested > 0 && rep.min_time_fraction > 0.0;
  return rep;
}

std::vector<HittingRow> hitting_time_scaling(const std::vector<double>& gammas,
                                             const ObservationRegion& region, double b0,
                                             int sample_count, double T0, double dt,
                                             int threads) {
  std::vector<HittingRow> rows;
  const double delta = 0.1;
  for (double g : gammas) {
    GccReport rep = gcc_certify(g, region, b0, T0, sample_count, dt, delta, threads);
    HittingRow row;
    row.gamma = g;
    row.worst_hit_time = rep.worst_hit_time;
    row.slope_diagnostic =
        std::log(std::max(rep.worst_hit_time, 1e-12)) / (g * std::log(1.0 / delta));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace grushin
