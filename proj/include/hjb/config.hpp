#ifndef HJB_CONFIG_HPP
#define HJB_CONFIG_HPP

#include "hjb/model.hpp"

#include <optional>
#include <string>

namespace hjb {

/// A fully resolved run configuration: the model with its computational
/// window applied, the solver grid size, and optional bound parameters.
struct ModelConfig {
    ModelSpec model;
    int grid_n = 400;
    std::optional<Assumption6Params> a6;
    std::string source_text;  // raw file contents, hashed into the manifest
};

/// Parses the model definition format:
///
///   rho = 0.05
///   [model]
///   family = "log_ak"      # log_ak | ak_crra | rck_cobb_douglas |
///   gamma = 0.1            #   linear_counterexample | custom
///   [grid]
///   k_lo = 0.1
///   k_hi = 10.0
///   n = 400
///   [policy]               # optional
///   c_cap = 2.5
///   [assumption6]          # optional; all nine keys required if present
///   k_star = 1.0 ...
///
/// Unknown keys are rejected with a diagnostic naming the key. The custom
/// family requires programmatic oracles and is rejected by the file loader.
ModelConfig parse_model_config(const std::string& text);
ModelConfig load_model_config(const std::string& path);

} // namespace hjb

#endif
