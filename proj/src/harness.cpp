#include "sfb/harness.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "sfb/arma.hpp"
#include "sfb/csv.hpp"
#include "sfb/errors.hpp"
#include "sfb/rng.hpp"

namespace sfb {

std::string model_id(ModelKind kind) {
	switch (kind) {
	case ModelKind::Arma: return "ARMA";
	case ModelKind::SvrLinear: return "L-SVR";
	case ModelKind::SvrPolynomial: return "P-SVR";
	case ModelKind::SvrGaussian: return "G-SVR";
	case ModelKind::RbfNetwork: return "RBF-NN";
	case ModelKind::Mlp: return "MLP-NN";
	}
	throw Error("unreachable model kind");
}

ModelKind model_kind_from_id(const std::string& id) {
	if (id == "ARMA") return ModelKind::Arma;
	if (id == "L-SVR") return ModelKind::SvrLinear;
	if (id == "P-SVR") return ModelKind::SvrPolynomial;
	if (id == "G-SVR") return ModelKind::SvrGaussian;
	if (id == "RBF-NN") return ModelKind::RbfNetwork;
	if (id == "MLP-NN") return ModelKind::Mlp;
	throw Error("unknown model id '" + id + "'");
}

std::vector<int> NeuralConfig::q_candidates_for(int horizon) const {
	const auto it = overrides.find(horizon);
	if (it != overrides.end()) return it->second;
	if (horizon <= 3) return q_short;
	if (horizon <= 6) return q_mid;
	return q_long;
}

void ExperimentConfig::validate() const {
	if (horizons.empty()) throw ConfigError("horizons", "must not be empty");
	for (const int h : horizons)
		if (h < 1) throw ConfigError("horizons", "horizon " + std::to_string(h) + " is < 1");
	if (models.empty()) throw ConfigError("models", "must not be empty");
	bool has_arma = false;
	bool has_ml = false;
	for (const ModelKind m : models) (m == ModelKind::Arma ? has_arma : has_ml) = true;
	if (!has_arma) throw ConfigError("models", "the ARMA baseline is required");
	if (!has_ml) throw ConfigError("models", "at least one non-baseline model is required");
	if (lag < 1) throw ConfigError("lag", "must be >= 1");
	if (!(svr_tol > 0.0)) throw ConfigError("svr.tol", "must be > 0");
}

std::uint64_t cell_seed(std::uint64_t experiment_seed, const std::string& region,
                        const std::string& model, int horizon) {
	return experiment_seed ^ fnv1a64(region + "|" + model + "|" + std::to_string(horizon));
}

namespace {

SupervisedSet pairs_by_target(std::span<const double> visible, std::size_t lag,
                              const std::function<bool(std::size_t)>& keep) {
	SupervisedSet all = embed(visible, lag);
	SupervisedSet out;
	out.lag_count = lag;
	for (std::size_t k = 0; k < all.size(); ++k) {
		const std::size_t target = lag + k;
		if (!keep(target)) continue;
		out.inputs.push_back(std::move(all.inputs[k]));
		out.targets.push_back(all.targets[k]);
	}
	return out;
}

} // namespace

SupervisedSet OriginContext::train_pairs() const {
	return pairs_by_target(visible, lag, [&](std::size_t t) {
		return t < train_boundary || t >= valid_boundary;
	});
}

SupervisedSet OriginContext::valid_pairs() const {
	return pairs_by_target(visible, lag, [&](std::size_t t) {
		return t >= train_boundary && t < valid_boundary;
	});
}

double iterate_forecast(const std::function<double(std::span<const double>)>& one_step,
                        std::span<const double> history, std::size_t lag, int horizon) {
	if (history.size() < lag) throw InsufficientDataError("iterate: history shorter than lag");
	if (horizon < 1) throw Error("iterate: horizon must be >= 1");
	std::vector<double> recent(history.end() - static_cast<std::ptrdiff_t>(lag), history.end());
	std::vector<double> x(lag);
	double y = 0.0;
	for (int k = 0; k < horizon; ++k) {
		for (std::size_t i = 0; i < lag; ++i) x[i] = recent[lag - 1 - i]; // most recent first
		y = one_step(x);
		recent.erase(recent.begin());
		recent.push_back(y);
	}
	return y;
}

namespace {

// ---- runners -------------------------------------------------------------

class SvrFitted final : public FittedModel {
public:
	SvrFitted(SvrModel model, std::size_t lag) : model_(std::move(model)), lag_(lag) {}
	double forecast(std::span<const double> history, int horizon) const override {
		return iterate_forecast([this](std::span<const double> x) { return model_.predict(x); },
		                        history, lag_, horizon);
	}
	std::string describe() const override {
		const KernelSpec& k = model_.hyper.kernel;
		std::string s = "C=" + format_double(model_.hyper.cost) +
		                " eps=" + format_double(model_.hyper.epsilon) + " kernel=" +
		                kernel_kind_name(k.kind);
		if (k.kind == KernelKind::GaussianRbf) s += " delta2=" + format_double(k.bandwidth_sq);
		if (k.kind == KernelKind::Polynomial) s += " degree=" + std::to_string(k.degree);
		if (k.kind != KernelKind::GaussianRbf) s += " a2=" + format_double(k.a2);
		return s;
	}

private:
	SvrModel model_;
	std::size_t lag_;
};

class SvrRunner final : public ModelRunner {
public:
	SvrRunner(KernelKind kernel, const ExperimentConfig& config)
	    : kernel_(kernel), config_(config) {}

	std::string id() const override {
		switch (kernel_) {
		case KernelKind::Linear: return "L-SVR";
		case KernelKind::Polynomial: return "P-SVR";
		default: return "G-SVR";
		}
	}

	std::unique_ptr<FittedModel> fit(const OriginContext& ctx) override {
		const SupervisedSet train = ctx.train_pairs();
		if (ctx.reuse_selection && frozen_) {
			SvrModel model = svr_train(train, *frozen_, config_.svr_tol);
			return std::make_unique<SvrFitted>(std::move(model), ctx.lag);
		}
		const SupervisedSet valid = ctx.valid_pairs();
		const std::vector<SvrHyper> grid = build_svr_grid(kernel_, train, config_.svr);
		SvrSearchResult result = svr_grid_search(train, valid, grid);
		if (config_.fast_mode) frozen_ = result.hyper;
		return std::make_unique<SvrFitted>(std::move(result.model), ctx.lag);
	}

private:
	KernelKind kernel_;
	const ExperimentConfig& config_;
	std::optional<SvrHyper> frozen_;
};

template <typename Model>
class NeuralFitted final : public FittedModel {
public:
	NeuralFitted(Model model, std::size_t lag, int q)
	    : model_(std::move(model)), lag_(lag), q_(q) {}
	double forecast(std::span<const double> history, int horizon) const override {
		return iterate_forecast([this](std::span<const double> x) { return model_.predict(x); },
		                        history, lag_, horizon);
	}
	std::string describe() const override { return "q=" + std::to_string(q_); }

private:
	Model model_;
	std::size_t lag_;
	int q_;
};

class RbfRunner final : public ModelRunner {
public:
	RbfRunner(const ExperimentConfig& config, int horizon) : config_(config), horizon_(horizon) {}
	std::string id() const override { return "RBF-NN"; }

	std::unique_ptr<FittedModel> fit(const OriginContext& ctx) override {
		const SupervisedSet train = ctx.train_pairs();
		const SupervisedSet valid = ctx.valid_pairs();
		TrainPolicy policy = config_.neural.policy;
		policy.seed = ctx.seed;
		if (ctx.reuse_selection && frozen_q_) {
			RbfNetModel model = train_rbf(train, valid, *frozen_q_, policy);
			return std::make_unique<NeuralFitted<RbfNetModel>>(std::move(model), ctx.lag, *frozen_q_);
		}
		RbfSelection sel = select_q_rbf(train, valid, config_.neural.q_candidates_for(horizon_), policy);
		if (config_.fast_mode) frozen_q_ = sel.q;
		return std::make_unique<NeuralFitted<RbfNetModel>>(std::move(sel.model), ctx.lag, sel.q);
	}

private:
	const ExperimentConfig& config_;
	int horizon_;
	std::optional<int> frozen_q_;
};

class MlpRunner final : public ModelRunner {
public:
	MlpRunner(const ExperimentConfig& config, int horizon) : config_(config), horizon_(horizon) {}
	std::string id() const override { return "MLP-NN"; }

	std::unique_ptr<FittedModel> fit(const OriginContext& ctx) override {
		const SupervisedSet train = ctx.train_pairs();
		const SupervisedSet valid = ctx.valid_pairs();
		TrainPolicy policy = config_.neural.policy;
		policy.seed = ctx.seed;
		if (ctx.reuse_selection && frozen_q_) {
			MlpModel model = train_mlp(train, valid, *frozen_q_, policy);
			return std::make_unique<NeuralFitted<MlpModel>>(std::move(model), ctx.lag, *frozen_q_);
		}
		MlpSelection sel = select_q_mlp(train, valid, config_.neural.q_candidates_for(horizon_), policy);
		if (config_.fast_mode) frozen_q_ = sel.q;
		return std::make_unique<NeuralFitted<MlpModel>>(std::move(sel.model), ctx.lag, sel.q);
	}

private:
	const ExperimentConfig& config_;
	int horizon_;
	std::optional<int> frozen_q_;
};

class ArmaFitted final : public FittedModel {
public:
	explicit ArmaFitted(ArmaModel model) : model_(std::move(model)) {}
	double forecast(std::span<const double> history, int horizon) const override {
		return model_.forecast(history, horizon).back();
	}
	std::string describe() const override {
		std::string s = "p=" + std::to_string(model_.p()) + " q=" + std::to_string(model_.q()) +
		                " c=" + format_double(model_.intercept) + " aic=" + format_double(model_.aic);
		if (!model_.ar.empty()) {
			s += " ar=";
			for (std::size_t i = 0; i < model_.ar.size(); ++i)
				s += (i ? ";" : "") + format_double(model_.ar[i]);
		}
		if (!model_.ma.empty()) {
			s += " ma=";
			for (std::size_t i = 0; i < model_.ma.size(); ++i)
				s += (i ? ";" : "") + format_double(model_.ma[i]);
		}
		if (model_.root_reflected) s += " reflected";
		return s;
	}

private:
	ArmaModel model_;
};

class ArmaRunner final : public ModelRunner {
public:
	explicit ArmaRunner(const ExperimentConfig& config) : config_(config) {}
	std::string id() const override { return "ARMA"; }

	std::unique_ptr<FittedModel> fit(const OriginContext& ctx) override {
		// the linear baseline uses the whole in-sample history, no validation split
		if (ctx.reuse_selection && frozen_) {
			ArmaModel model = arma_fit(ctx.visible, frozen_->first, frozen_->second);
			return std::make_unique<ArmaFitted>(std::move(model));
		}
		ArmaModel model = arma_select_order(ctx.visible, config_.arma.p_max, config_.arma.q_max);
		if (config_.fast_mode) frozen_ = {model.p(), model.q()};
		return std::make_unique<ArmaFitted>(std::move(model));
	}

private:
	const ExperimentConfig& config_;
	std::optional<std::pair<int, int>> frozen_;
};

} // namespace

std::unique_ptr<ModelRunner> make_runner(ModelKind kind, const ExperimentConfig& config,
                                         int horizon) {
	switch (kind) {
	case ModelKind::Arma: return std::make_unique<ArmaRunner>(config);
	case ModelKind::SvrLinear: return std::make_unique<SvrRunner>(KernelKind::Linear, config);
	case ModelKind::SvrPolynomial:
		return std::make_unique<SvrRunner>(KernelKind::Polynomial, config);
	case ModelKind::SvrGaussian:
		return std::make_unique<SvrRunner>(KernelKind::GaussianRbf, config);
	case ModelKind::RbfNetwork: return std::make_unique<RbfRunner>(config, horizon);
	case ModelKind::Mlp: return std::make_unique<MlpRunner>(config, horizon);
	}
	throw Error("unreachable model kind");
}

std::vector<ForecastRecord> run_cell(const TimeSeries& series, ModelRunner& runner, int horizon,
                                     const ExperimentConfig& config, CellProbe* probe,
                                     std::vector<std::string>* selections) {
	if (horizon < 1) throw Error("run_cell: horizon must be >= 1");
	const Partition part = config.dated ? partition(series, *config.dated)
	                                    : partition(series, config.split);
	if (part.test_len() < static_cast<std::size_t>(horizon))
		throw InsufficientDataError("run_cell: test block (" + std::to_string(part.test_len()) +
		                            ") shorter than horizon " + std::to_string(horizon));
	const std::size_t lag = static_cast<std::size_t>(config.lag);
	if (part.train_end <= lag + 1)
		throw InsufficientDataError("run_cell: training block too short for lag " +
		                            std::to_string(lag));

	const std::size_t n = series.size();
	const std::uint64_t seed = cell_seed(config.seed, series.region, runner.id(), horizon);
	std::vector<ForecastRecord> records;

	bool first_origin = true;
	for (std::size_t origin = part.valid_end - 1; origin + static_cast<std::size_t>(horizon) < n;
	     ++origin) {
		const std::size_t target = origin + static_cast<std::size_t>(horizon);
		OriginContext ctx;
		ctx.visible = std::span<const double>(series.values.data(), origin + 1);
		ctx.train_boundary = part.train_end;
		ctx.valid_boundary = part.valid_end;
		ctx.lag = lag;
		ctx.seed = seed;
		ctx.reuse_selection = config.fast_mode && !first_origin;

		if (probe) {
			OriginInfo info;
			info.region = series.region;
			info.model = runner.id();
			info.horizon = horizon;
			info.origin_index = origin;
			info.visible_count = ctx.visible.size();
			info.target_index = target;
			info.train_pair_count = ctx.train_pairs().size();
			info.valid_target_begin = part.train_end;
			info.valid_target_end = part.valid_end;
			probe->on_origin(info);
		}

		try {
			const std::unique_ptr<FittedModel> fitted = runner.fit(ctx);
			const double y_hat = fitted->forecast(ctx.visible, horizon);
			if (selections) selections->push_back(fitted->describe());

			ForecastRecord rec;
			rec.region = series.region;
			rec.model_id = runner.id();
			rec.horizon = horizon;
			rec.origin = series.month_at(origin);
			rec.y_actual = series.values[target];
			rec.y_hat = y_hat;
			rec.error = rec.y_actual - rec.y_hat;
			records.push_back(std::move(rec));
		} catch (const Error& e) {
			throw CellError("origin " + series.month_at(origin).str() + ": " + e.what(), origin);
		}
		first_origin = false;
	}
	return records;
}

ExperimentResult run_experiment(const std::vector<TimeSeries>& dataset,
                                const ExperimentConfig& config, CellProbe* probe) {
	config.validate();
	if (dataset.empty()) throw ConfigError("input", "dataset is empty");

	struct CellJob {
		const TimeSeries* series;
		ModelKind kind;
		int horizon;
	};
	std::vector<CellJob> jobs;
	for (const TimeSeries& ts : dataset)
		for (const ModelKind kind : config.models)
			for (const int h : config.horizons) jobs.push_back({&ts, kind, h});

	struct CellOutcome {
		std::vector<ForecastRecord> records;
		CellSummary summary;
		bool failed = false;
	};
	std::vector<CellOutcome> outcomes(jobs.size());

#pragma omp parallel for schedule(dynamic)
	for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(jobs.size()); ++idx) {
		const CellJob& job = jobs[static_cast<std::size_t>(idx)];
		CellOutcome& out = outcomes[static_cast<std::size_t>(idx)];
		const std::unique_ptr<ModelRunner> runner = make_runner(job.kind, config, job.horizon);
		out.summary.region = job.series->region;
		out.summary.model = runner->id();
		out.summary.horizon = job.horizon;
		out.summary.seed = cell_seed(config.seed, job.series->region, runner->id(), job.horizon);
		const double t0 = omp_get_wtime();
		try {
			out.records = run_cell(*job.series, *runner, job.horizon, config, probe,
			                       &out.summary.selections);
		} catch (const Error& e) {
			out.failed = true;
			out.summary.failed = true;
			out.summary.error = e.what();
		}
		out.summary.seconds = omp_get_wtime() - t0;
	}

	ExperimentResult result;
	for (CellOutcome& out : outcomes) {
		if (out.failed) {
			result.failures.push_back({out.summary.region, out.summary.model, out.summary.horizon,
			                           out.summary.error});
		} else {
			result.records.insert(result.records.end(), out.records.begin(), out.records.end());
		}
		result.cells.push_back(std::move(out.summary));
	}
	result.report = assemble_report(result.records, result.failures, config.report);
	return result;
}

} // namespace sfb
