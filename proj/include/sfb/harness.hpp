#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfb/dataset.hpp"
#include "sfb/metrics.hpp"
#include "sfb/neural.hpp"
#include "sfb/records.hpp"
#include "sfb/svr.hpp"

namespace sfb {

enum class ModelKind { Arma, SvrLinear, SvrPolynomial, SvrGaussian, RbfNetwork, Mlp };

std::string model_id(ModelKind kind);
ModelKind model_kind_from_id(const std::string& id);

struct NeuralConfig {
	TrainPolicy policy;
	// hidden-unit candidates grow with the horizon
	std::vector<int> q_short{5, 10};  // h <= 3
	std::vector<int> q_mid{10, 20};   // h <= 6
	std::vector<int> q_long{20, 30};  // beyond
	std::map<int, std::vector<int>> overrides;

	std::vector<int> q_candidates_for(int horizon) const;
};

struct ArmaOrderConfig {
	int p_max = 12;
	int q_max = 12;
};

struct ExperimentConfig {
	std::vector<int> horizons{1, 2, 3, 6, 12};
	std::vector<ModelKind> models{ModelKind::Arma,       ModelKind::SvrLinear,
	                              ModelKind::SvrPolynomial, ModelKind::SvrGaussian,
	                              ModelKind::RbfNetwork, ModelKind::Mlp};
	SplitSpec split;
	std::optional<DatedBoundaries> dated; // overrides fractional split when set
	int lag = 1;
	std::uint64_t seed = 0;
	bool fast_mode = false; // freeze per-cell selections after the first origin
	double svr_tol = 1e-3;
	SvrGridDefaults svr;
	NeuralConfig neural;
	ArmaOrderConfig arma;
	ReportOptions report;

	void validate() const; // throws ConfigError
};

/// What one forecast origin exposes to a model: nothing dated at or after
/// the target can be reached through this view.
struct OriginContext {
	std::span<const double> visible; // y_0 .. y_origin
	std::size_t train_boundary = 0;  // first validation target index
	std::size_t valid_boundary = 0;  // first test target index
	std::size_t lag = 1;
	std::uint64_t seed = 0;
	bool reuse_selection = false; // fast mode, past the first origin

	// targets in [lag, train_boundary) plus [valid_boundary, visible : end)
	SupervisedSet train_pairs() const;
	// targets in [train_boundary, valid_boundary), fixed across origins
	SupervisedSet valid_pairs() const;
};

class FittedModel {
public:
	virtual ~FittedModel() = default;
	virtual double forecast(std::span<const double> history, int horizon) const = 0;
	virtual std::string describe() const = 0; // selected hypers, for the manifest
};

class ModelRunner {
public:
	virtual ~ModelRunner() = default;
	virtual std::string id() const = 0;
	virtual std::unique_ptr<FittedModel> fit(const OriginContext& ctx) = 0;
};

std::unique_ptr<ModelRunner> make_runner(ModelKind kind, const ExperimentConfig& config,
                                         int horizon);

struct OriginInfo {
	std::string region;
	std::string model;
	int horizon = 1;
	std::size_t origin_index = 0;  // last observed index
	std::size_t visible_count = 0; // observations reachable by the model
	std::size_t target_index = 0;  // origin_index + horizon
	std::size_t train_pair_count = 0;
	std::size_t valid_target_begin = 0;
	std::size_t valid_target_end = 0;
};

/// Instrumentation hook; under a parallel run on_origin is called from
/// worker threads, implementations must synchronize.
class CellProbe {
public:
	virtual ~CellProbe() = default;
	virtual void on_origin(const OriginInfo& info) = 0;
};

/// Iterated multi-step forecast: the one-step prediction is appended to
/// the working history and fed back as a lag input, horizon times.
double iterate_forecast(const std::function<double(std::span<const double>)>& one_step,
                        std::span<const double> history, std::size_t lag, int horizon);

/// One (region, model, horizon) cell of the expanding-window protocol:
/// at every test origin the model is re-selected on the fixed validation
/// block, retrained on the grown training block, and asked for an h-step
/// forecast. Emits test_len - horizon + 1 records.
std::vector<ForecastRecord> run_cell(const TimeSeries& series, ModelRunner& runner, int horizon,
                                     const ExperimentConfig& config, CellProbe* probe = nullptr,
                                     std::vector<std::string>* selections = nullptr);

struct CellSummary {
	std::string region;
	std::string model;
	int horizon = 1;
	std::uint64_t seed = 0;
	std::vector<std::string> selections; // one per origin
	double seconds = 0.0;
	bool failed = false;
	std::string error;
};

struct ExperimentResult {
	std::vector<ForecastRecord> records;
	std::vector<CellFailureInfo> failures;
	EvaluationReport report;
	std::vector<CellSummary> cells;
};

/// All (region x model x horizon) cells, run concurrently with per-cell
/// derived seeds and merged in a fixed order; failures are collected, not
/// fatal.
ExperimentResult run_experiment(const std::vector<TimeSeries>& dataset,
                                const ExperimentConfig& config, CellProbe* probe = nullptr);

std::uint64_t cell_seed(std::uint64_t experiment_seed, const std::string& region,
                        const std::string& model, int horizon);

} // namespace sfb
