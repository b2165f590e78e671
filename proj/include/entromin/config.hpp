#pragma once

#include <json.hpp>

#include "entromin/experiments.hpp"
#include "entromin/operators.hpp"
#include "entromin/regularizers.hpp"
#include "entromin/solver.hpp"

// JSON forms of the configuration types. Optional numeric fields accept a
// number or the string "auto"; continuation_ratio also accepts "fixed".
// Unknown keys are rejected so typos surface before any compute.

namespace entromin {

using json = nlohmann::ordered_json;

json to_json(const RegularizerSpec& spec);
RegularizerSpec regularizer_from_json(const json& j);

json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const json& j, const SolverConfig& base = {});

json to_json(const AnalysisConfig& cfg);
AnalysisConfig analysis_config_from_json(const json& j, const AnalysisConfig& base = {});

json to_json(const OperatorDescriptor& d);
OperatorDescriptor operator_descriptor_from_json(const json& j);

json to_json(const ExperimentGrid& grid);
ExperimentGrid experiment_grid_from_json(const json& j, const ExperimentGrid& base = {});

json to_json(const NoisySweepConfig& cfg);
NoisySweepConfig noisy_sweep_from_json(const json& j, const NoisySweepConfig& base = {});

json to_json(const ImageExperimentConfig& cfg);
ImageExperimentConfig image_experiment_from_json(const json& j, const ImageExperimentConfig& base = {});

}  // namespace entromin
