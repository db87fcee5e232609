#pragma once

#include "tdg/simulator.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace tdg {

// Malformed or invalid scenario documents.
class ScenarioError : public DomainError {
public:
    using DomainError::DomainError;
};

// A parsed scenario file. `document` is the normalized JSON (defaults filled
// in), so serialize/parse round-trips exactly.
struct ScenarioFile {
    Scenario scenario;
    nlohmann::json document;
};

// Strict parser for the scenario schema; unknown keys are rejected.
// Keys: dimension, gamma, v_P, target {type + parameters}, x_P0, x_E0,
// policy_P, policy_E, dt, t_max, capture_radius, seed, direct_to.
ScenarioFile parse_scenario(const nlohmann::json& doc);
ScenarioFile load_scenario(const std::string& path);

}  // namespace tdg
