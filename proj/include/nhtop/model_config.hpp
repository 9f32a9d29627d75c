// model_config.hpp — JSON model descriptions and default parameters

#pragma once

#include <map>
#include <optional>
#include <string>

#include "nhtop/netmodel.hpp"

namespace nhtop::netmodel {

// {"model": ..., "N": int, "params": {...}, "custom": {"sites": [...], "edges": [...]}}
struct ModelConfig {
    ModelKind model = ModelKind::ssh;
    int N = 0;  // 0 means the model default
    std::map<std::string, double> params;
    std::optional<NetworkSpec> custom;
};

// Parameter names accepted by each model, with their default values.
const std::map<std::string, double>& default_params(ModelKind kind);
int default_size(ModelKind kind);

// Throws SpecificationError on malformed JSON, unknown keys or bad types.
ModelConfig parse_model_config(const std::string& json_text);
ModelConfig load_model_config(const std::string& path);

// Fills defaults, rejects unknown parameter names and builds H.
EffectiveHamiltonian build_model(const ModelConfig& cfg);

// Value of a parameter after defaults are applied.
double param_or_default(const ModelConfig& cfg, const std::string& name);

} // namespace nhtop::netmodel
