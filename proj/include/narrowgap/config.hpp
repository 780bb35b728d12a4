#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "narrowgap/auxfields.hpp"
#include "narrowgap/geometry.hpp"
#include "narrowgap/refsolver.hpp"

namespace narrowgap {

/// Validated run configuration; see README for the JSON schema.
struct RunConfig {
    GapGeometry geometry;
    BoundaryData boundary = BoundaryData::constant(0.0);
    std::vector<double> eps_list;
    Resolution resolution;
    std::optional<LimitQuantities> limits;    ///< given directly
    std::optional<double> touching_sigma;     ///< compute limits with this excision radius
    std::vector<std::vector<double>> points;  ///< asym evaluation points
    int hypothesis_samples = 256;
    double check_bound = 10.0;
    nlohmann::json raw;
};

/// Throws ConfigError with the offending key on any schema violation.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a of the canonical (sorted, compact) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& j);

}  // namespace narrowgap
