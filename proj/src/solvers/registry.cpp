#include "combigrad/solvers/registry.hpp"

#include "combigrad/error.hpp"
#include "combigrad/solvers/grid_path.hpp"
#include "combigrad/solvers/matching.hpp"
#include "combigrad/solvers/tsp.hpp"

namespace combigrad::solvers {

std::string to_string(Family family) {
  switch (family) {
    case Family::kShortestPath:
      return "sp";
    case Family::kTsp:
      return "tsp";
    case Family::kMatching:
      return "pm";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "sp") return Family::kShortestPath;
  if (s == "tsp") return Family::kTsp;
  if (s == "pm") return Family::kMatching;
  throw ConfigError("unknown instance family '" + s + "' (expected sp, tsp or pm)");
}

void to_json(nlohmann::json& j, const InstanceSpec& spec) {
  j = nlohmann::json{{"family", to_string(spec.family)}, {"k", spec.k}};
  if (spec.family == Family::kShortestPath) j["connectivity"] = spec.connectivity;
  if (spec.approximate) j["approximate"] = true;
}

void from_json(const nlohmann::json& j, InstanceSpec& spec) {
  if (!j.is_object() || !j.contains("family") || !j.contains("k")) {
    throw ConfigError("instance description needs \"family\" and \"k\"");
  }
  spec.family = family_from_string(j.at("family").get<std::string>());
  spec.k = j.at("k").get<int>();
  spec.connectivity = j.value("connectivity", 8);
  spec.approximate = j.value("approximate", false);
}

std::unique_ptr<Solver> make_solver(const InstanceSpec& spec) {
  switch (spec.family) {
    case Family::kShortestPath:
      return std::make_unique<GridPathSolver>(GridGraph{spec.k, spec.connectivity});
    case Family::kTsp:
      return std::make_unique<TspSolver>(
          TspInstance{spec.k}, spec.approximate ? TspSolver::Mode::kApprox : TspSolver::Mode::kExact);
    case Family::kMatching:
      return std::make_unique<MatchingSolver>(MatchingInstance{spec.k});
  }
  throw ConfigError("unhandled instance family");
}

}  // namespace combigrad::solvers
