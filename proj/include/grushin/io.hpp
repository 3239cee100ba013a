#pragma once

#include <json.hpp>
#include <string>

#include "grushin/basis.hpp"
#include "grushin/geodesics.hpp"
#include "grushin/ground_state.hpp"
#include "grushin/observability.hpp"
#include "grushin/state.hpp"

namespace grushin::io {

using json = nlohmann::json;

json basis_to_json(const SpectralBasis& basis);
SpectralBasis basis_from_json(const json& j);

json ground_state_to_json(const GroundState& gs);
GroundState ground_state_from_json(const json& j);

json state_to_json(const StateVector& st, const std::string& basis_ref);
Eigen::VectorXcd coeffs_from_json(const json& j);

std::string basis_csv(const SpectralBasis& basis);  // rows (n, m, lambda_sq, mu)
std::string trajectory_csv(const Trajectory& traj, double gamma);  // t,x,y,xi,eta,p
std::string alpha_star_csv(const ScalingFit& fit);                 // h, alpha_star

void write_file(const std::string& path, const std::string& content);
json read_json(const std::string& path);

}  // namespace grushin::io
