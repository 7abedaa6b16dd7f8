#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfb/records.hpp"

namespace sfb {

/// 100/n * sum |(y_t - yhat_t)/y_t|. Throws ZeroActualError on any zero
/// actual; arrivals are strictly positive, zeros are never skipped.
double mape(std::span<const double> actuals, std::span<const double> forecasts);

/// MAPE(model)/MAPE(baseline) over identically indexed records. < 1 means
/// the model beats the baseline.
double rmape(std::span<const ForecastRecord> model, std::span<const ForecastRecord> baseline);

/// Share of periods where |e_A| is strictly below |e_B|; ties count 0.
double plae(std::span<const ForecastRecord> a, std::span<const ForecastRecord> b);

enum class DmLoss { AbsolutePercentage, Squared };

std::string dm_loss_name(DmLoss loss);

struct DmOptions {
	double critical_small = 2.028; // applied when n == small_n
	std::size_t small_n = 11;
	double critical_normal = 1.96;
};

struct DmResult {
	double statistic = 0.0;
	int bandwidth = 0; // Newey-West truncation lag, h - 1
	DmLoss loss = DmLoss::AbsolutePercentage;
	std::size_t n = 0;
	bool significant_5pct = false;
};

/// Diebold-Mariano test on the loss differential d_t = L(e_A) - L(e_B),
/// long-run variance by Newey-West with Bartlett weights and truncation
/// lag h-1. Negative statistic: B has the bigger errors.
DmResult dm_test(std::span<const ForecastRecord> a, std::span<const ForecastRecord> b, int horizon,
                 DmLoss loss = DmLoss::AbsolutePercentage, const DmOptions& options = {});

struct CellScores {
	std::string region;
	std::string model_id;
	int horizon = 1;
	std::size_t n = 0;
	double mape = 0.0;
	double rmape = 0.0;
	double plae = 0.0;
	bool failed = false;
	std::string failure; // empty unless failed
};

struct DmRow {
	std::string region;
	std::string model_a;
	std::string model_b;
	int horizon = 1;
	std::optional<DmResult> result; // empty when the differential is degenerate
	std::string status;             // "ok" or "degenerate"
};

struct FamilySummaryRow {
	std::string family; // "linear", "svr", "nn"
	int horizon = 1;
	std::size_t cells = 0;
	double mean_rmape = 0.0;
	double median_rmape = 0.0;
};

struct EvaluationReport {
	std::vector<CellScores> cells;
	std::vector<DmRow> dm;
	std::vector<FamilySummaryRow> summary;
};

struct CellFailureInfo {
	std::string region;
	std::string model_id;
	int horizon = 1;
	std::string message;
};

struct ReportOptions {
	std::size_t eval_window = 11; // last N test targets scored; 0 = all
	DmLoss loss = DmLoss::AbsolutePercentage;
	DmOptions dm;
	std::string baseline_id = "ARMA";
};

std::string family_of_model(const std::string& model_id);

/// Build the full report from raw records: per-cell scores against the
/// baseline, per-(region, horizon) DM tests between the best three models
/// by MAPE, and the per-family rMAPE summary. Rows are sorted by
/// (region, model, horizon) regardless of input order.
EvaluationReport assemble_report(std::span<const ForecastRecord> records,
                                 std::span<const CellFailureInfo> failures,
                                 const ReportOptions& options = {});

} // namespace sfb
