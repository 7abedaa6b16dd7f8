#pragma once

#include <string>
#include <vector>

#include "sfb/dataset.hpp"
#include "sfb/harness.hpp"
#include "sfb/metrics.hpp"

namespace sfb {

// All emitted CSVs start with a '#schema=' comment line. Full-precision
// columns use shortest round-trip formatting so re-derived reports are
// byte-identical.

struct DescribeRow {
	std::string region;
	std::size_t months = 0;
	DescriptiveStats stats;
};

/// Per-region descriptive rows sorted by descending share, cumulative
/// share filled in.
std::vector<DescribeRow> describe_dataset(const std::vector<TimeSeries>& dataset);
std::string describe_to_csv(const std::vector<DescribeRow>& rows);

std::string records_to_csv(std::span<const ForecastRecord> records);
std::vector<ForecastRecord> records_from_csv(const std::string& text);

std::string report_to_csv(const EvaluationReport& report);
std::string dm_to_csv(const EvaluationReport& report);
std::string summary_to_csv(const EvaluationReport& report);

struct Manifest {
	std::string artifact_version;
	std::string config_text; // verbatim config; replay re-parses this
	std::vector<CellSummary> cells;
	std::vector<CellFailureInfo> failures;
	double total_seconds = 0.0;
};

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace sfb
