#include "grushin/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "grushin/fiber.hpp"

namespace grushin::io {

json basis_to_json(const SpectralBasis& basis) {
  json j;
  j["gamma"] = basis.params.gamma;
  j["s"] = basis.params.s;
  j["cutoff"] = basis.cutoff;
  j["grid"] = {{"a", basis.grid.a}, {"b", basis.grid.b}, {"points", basis.grid.n}};
  json pairs = json::array();
  for (const auto& p : basis.pairs) {
    json e;
    e["n"] = p.n;
    e["m"] = p.m;
    e["lambda_sq"] = p.lambda_sq;
    e["vector"] = p.vec;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

SpectralBasis basis_from_json(const json& j) {
  SpectralBasis basis;
  basis.params.gamma = j.at("gamma").get<double>();
  basis.params.s = j.at("s").get<int>();
  basis.cutoff = j.at("cutoff").get<double>();
  basis.grid = Grid1D::interior(j.at("grid").at("a").get<double>(),
                                j.at("grid").at("b").get<double>(),
                                j.at("grid").at("points").get<int>());
  for (const auto& e : j.at("pairs")) {
    FiberEigenpair p;
    p.n = e.at("n").get<int>();
    p.m = e.at("m").get<int>();
    p.lambda_sq = e.at("lambda_sq").get<double>();
    p.vec = e.at("vector").get<std::vector<double>>();
    basis.pairs.push_back(std::move(p));
    basis.n_max_used = std::max(basis.n_max_used, std::abs(p.n));
  }
  return basis;
}

json ground_state_to_json(const GroundState& gs) {
  json j;
  j["gamma"] = gs.gamma;
  j["mu0"] = gs.mu0;
  j["c_gamma"] = gs.c_gamma;
  j["radius"] = gs.radius;
  j["x_tail"] = gs.x_tail;
  j["spacing"] = gs.spacing;
  j["samples"] = gs.samples;
  return j;
}

GroundState ground_state_from_json(const json& j) {
  GroundState gs;
  gs.gamma = j.at("gamma").get<double>();
  gs.mu0 = j.at("mu0").get<double>();
  gs.c_gamma = j.at("c_gamma").get<double>();
  gs.radius = j.at("radius").get<double>();
  gs.x_tail = j.at("x_tail").get<double>();
  gs.spacing = j.at("spacing").get<double>();
  gs.samples = j.at("samples").get<std::vector<double>>();
  return gs;
}

json state_to_json(const StateVector& st, const std::string& basis_ref) {
  json j;
  j["basis_ref"] = basis_ref;
  std::vector<double> re, im;
  for (int i = 0; i < st.coeffs.size(); ++i) {
    re.push_back(st.coeffs(i).real());
    im.push_back(st.coeffs(i).imag());
  }
  j["coeffs_re"] = re;
  j["coeffs_im"] = im;
  return j;
}

Eigen::VectorXcd coeffs_from_json(const json& j) {
  const auto re = j.at("coeffs_re").get<std::vector<double>>();
  const auto im = j.at("coeffs_im").get<std::vector<double>>();
  if (re.size() != im.size()) throw std::invalid_argument("state: re/im length mismatch");
  Eigen::VectorXcd c(re.size());
  for (size_t i = 0; i < re.size(); ++i) c(i) = {re[i], im[i]};
  return c;
}

std::string basis_csv(const SpectralBasis& basis) {
  std::ostringstream os;
  os.precision(15);
  os << "n,m,lambda_sq,mu\n";
  for (const auto& p : basis.pairs) {
    os << p.n << "," << p.m << "," << p.lambda_sq << ",";
    if (p.n != 0)
      os << scaling_check(p, basis.params);
    else
      os << "";
    os << "\n";
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& traj, double gamma) {
  std::ostringstream os;
  os.precision(15);
  os << "t,x,y,xi,eta,p\n";
  for (size_t i = 0; i < traj.t.size(); ++i) {
    const auto& q = traj.pts[i];
    double y = std::fmod(q.y, kTwoPi);
    if (y < 0) y += kTwoPi;
    os << traj.t[i] << "," << q.x << "," << y << "," << q.xi << "," << q.eta << ","
       << traj.energy(q, gamma) << "\n";
  }
  return os.str();
}

std::string alpha_star_csv(const ScalingFit& fit) {
  std::ostringstream os;
  os.precision(15);
  os << "h,alpha_star\n";
  for (size_t i = 0; i < fit.h_values.size(); ++i)
    os << fit.h_values[i] << "," << fit.alpha_star[i] << "\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  json j;
  f >> j;
  return j;
}

}  // namespace grushin::io
