#pragma once

#include "esjs/cli.hpp"

#include "json.hpp"

#include <string>

namespace esjs::cli {

using Json = nlohmann::ordered_json;

Json spec_to_json(const RunSpec& spec);
Json fit_row_to_json(const FitReport& row);
Json experiment_to_json(const ExperimentReport& report);
Json scaling_to_json(std::span<const ScalingRow> rows, const PowerLaw& fit);

/// Renders a finished report object in the requested format. CSV and table
/// output are derived from the same JSON values.
std::string render(const Json& report, OutputFormat format);

}  // namespace esjs::cli
