#pragma once

#include <string>

#include <json.hpp>

#include "muskat/validate.hpp"

// Run manifest and JSON reports.  Timing is informational; every numerical
// value in the outputs is reproducible from the configuration alone.

namespace muskat {

nlohmann::json manifest_json(const RunConfig& config, const ValidationResult& val,
                             double elapsed_seconds);

nlohmann::json window_json(const WeightWindow& w);
nlohmann::json corner_json(const CornerData& c);

void write_json(const nlohmann::json& j, const std::string& path);

} // namespace muskat
