#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "combigrad/solver.hpp"

namespace combigrad::solvers {

enum class Family { kShortestPath, kTsp, kMatching };

std::string to_string(Family family);  // "sp" | "tsp" | "pm"
Family family_from_string(const std::string& s);

// Serializable instance description:
//   {"family": "sp"|"tsp"|"pm", "k": int, "connectivity": 4|8}
// `connectivity` is only meaningful for "sp" (default 8). The optional
// "approximate": true selects the 2-opt TSP heuristic.
struct InstanceSpec {
  Family family = Family::kShortestPath;
  int k = 2;
  int connectivity = 8;
  bool approximate = false;

  friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

void to_json(nlohmann::json& j, const InstanceSpec& spec);
void from_json(const nlohmann::json& j, InstanceSpec& spec);

std::unique_ptr<Solver> make_solver(const InstanceSpec& spec);

}  // namespace combigrad::solvers
