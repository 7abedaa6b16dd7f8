// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Heavier end-to-end checks live here rather than in the
// per-module unit suites.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <omp.h>

#include "oracles.hpp"
#include "sfb/arma.hpp"
#include "sfb/config.hpp"
#include "sfb/dataset.hpp"
#include "sfb/errors.hpp"
#include "sfb/harness.hpp"
#include "sfb/kernels.hpp"
#include "sfb/metrics.hpp"
#include "sfb/neural.hpp"
#include "sfb/reportio.hpp"
#include "sfb/rng.hpp"
#include "sfb/svr.hpp"
#include "sfb/synth.hpp"

using namespace sfb;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass, const std::string& detail = "") {
	std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
	            detail.empty() ? "" : " -- ", detail.c_str());
	std::fflush(stdout);
	if (!pass) ++g_failures;
}

void guarded(int number, const std::string& name, const std::function<void(bool&, std::string&)>& body) {
	bool pass = true;
	std::string detail;
	try {
		body(pass, detail);
	} catch (const std::exception& e) {
		pass = false;
		detail = std::string("exception: ") + e.what();
	}
	criterion(number, name, pass, detail);
}

// duality gap recomputed from the returned model only (no solver internals):
// with complementarity, alpha + alpha* = |beta|, so the dual objective is
// -1/2 b'Kb - eps sum|b| + sum d b; the primal uses tube slacks from the
// model residuals.
double external_duality_gap(const SvrModel& model, const SupervisedSet& data, double& dual_out) {
	const auto xs = model.input_scaler.apply_all(data.inputs);
	const std::size_t n = data.size();
	double quad = 0.0;
	double eps_term = 0.0;
	double target_term = 0.0;
	double slack = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		double fx = 0.0;
		for (std::size_t j = 0; j < n; ++j)
			if (model.dual_coeffs[j] != 0.0)
				fx += model.dual_coeffs[j] * kernel_eval(model.hyper.kernel, xs[j], xs[i]);
		quad += model.dual_coeffs[i] * fx;
		eps_term += std::abs(model.dual_coeffs[i]);
		target_term += data.targets[i] * model.dual_coeffs[i];
		slack += std::max(0.0, std::abs(fx + model.bias - data.targets[i]) - model.hyper.epsilon);
	}
	const double dual = -0.5 * quad - model.hyper.epsilon * eps_term + target_term;
	const double primal = 0.5 * quad + model.hyper.cost * slack;
	dual_out = dual;
	return primal - dual;
}

SupervisedSet random_instance(Rng& rng, std::size_t n, std::size_t dim) {
	SupervisedSet s;
	s.lag_count = dim;
	for (std::size_t i = 0; i < n; ++i) {
		std::vector<double> x(dim);
		for (double& v : x) v = rng.normal();
		double t = 0.0;
		for (const double v : x) t += std::sin(1.3 * v);
		s.inputs.push_back(std::move(x));
		s.targets.push_back(t + 0.25 * rng.normal());
	}
	return s;
}

void criterion_1_svr_oracle() {
	guarded(1, "svr solver matches the dense projected-gradient dual oracle", [](bool& pass, std::string& detail) {
		const double t0 = omp_get_wtime();
		double worst_pred = 0.0;
		double worst_rel_gap = 0.0;
		for (int inst = 0; inst < 25; ++inst) {
			Rng rng(5000 + inst);
			const std::size_t n = 10 + rng.below(11); // <= 20
			const std::size_t dim = 1 + rng.below(3); // <= 3
			const SupervisedSet data = random_instance(rng, n, dim);

			SvrHyper hyper;
			hyper.cost = std::vector<double>{1.0, 10.0, 100.0}[inst % 3];
			hyper.epsilon = 0.05;
			switch (inst % 3) {
			case 0: hyper.kernel = {KernelKind::Linear, 1.0, 0.5, 2, 1.0}; break;
			case 1: hyper.kernel = {KernelKind::Polynomial, 1.0, 1.0, 2, 1.0}; break;
			default: hyper.kernel = {KernelKind::GaussianRbf, 1.0, 0.0, 2, 2.0}; break;
			}

			const SvrModel model = svr_train(data, hyper, 1e-5);
			double dual = 0.0;
			const double gap = external_duality_gap(model, data, dual);
			const double rel = gap / std::max(1.0, std::abs(dual));
			worst_rel_gap = std::max(worst_rel_gap, rel);

			const auto xs = model.input_scaler.apply_all(data.inputs);
			const oracle::PgSolution pg = oracle::pg_dual_qp(xs, data.targets, hyper);
			for (int probe = 0; probe < 5; ++probe) {
				std::vector<double> x(dim);
				for (double& v : x) v = rng.normal();
				const double mine = model.predict(x);
				const double theirs = oracle::pg_predict(pg, xs, hyper, model.input_scaler.apply(x));
				worst_pred = std::max(worst_pred, std::abs(mine - theirs));
			}
		}
		const double seconds = omp_get_wtime() - t0;
		pass = worst_pred <= 1e-4 && worst_rel_gap <= 1e-6 && seconds < 10.0;
		char buf[160];
		std::snprintf(buf, sizeof(buf), "max |pred diff| %.2e, max rel gap %.2e, %.1f s", worst_pred,
		              worst_rel_gap, seconds);
		detail = buf;
	});
}

void criterion_2_kernels() {
	guarded(2, "kernel symmetry exact; gaussian gram PSD via jacobi oracle", [](bool& pass, std::string& detail) {
		Rng rng(77);
		const KernelSpec specs[] = {{KernelKind::Linear, 1.3, 0.4, 2, 1.0},
		                            {KernelKind::Polynomial, 1.0, 1.0, 3, 1.0},
		                            {KernelKind::GaussianRbf, 1.0, 0.0, 2, 1.7}};
		for (const KernelSpec& spec : specs)
			for (int trial = 0; trial < 200; ++trial) {
				const std::size_t dim = 1 + rng.below(4);
				std::vector<double> x(dim);
				std::vector<double> y(dim);
				for (double& v : x) v = rng.normal();
				for (double& v : y) v = rng.normal();
				if (kernel_eval(spec, x, y) != kernel_eval(spec, y, x)) {
					pass = false;
					detail = "symmetry violated";
					return;
				}
			}

		double min_eig = 0.0;
		for (int trial = 0; trial < 10; ++trial) {
			std::vector<std::vector<double>> xs;
			for (int i = 0; i < 20; ++i) {
				std::vector<double> x(3);
				for (double& v : x) v = rng.normal();
				xs.push_back(std::move(x));
			}
			const Matrix g = gram({KernelKind::GaussianRbf, 1.0, 0.0, 2, 1.1}, xs);
			const auto eig = oracle::jacobi_eigenvalues(g);
			min_eig = std::min(min_eig, eig.front());
			if (eig.front() < -1e-8) pass = false;
		}
		char buf[96];
		std::snprintf(buf, sizeof(buf), "min gram eigenvalue %.2e", min_eig);
		detail = buf;
	});
}

void criterion_3_mlp_gradient() {
	guarded(3, "mlp analytic gradient matches central differences", [](bool& pass, std::string& detail) {
		Rng rng(314159);
		double worst = 0.0;
		for (int trial = 0; trial < 50; ++trial) {
			const std::size_t p = 1 + rng.below(3);
			const std::size_t q = 1 + rng.below(5);
			const std::size_t m = 4 + rng.below(10);
			std::vector<std::vector<double>> xs;
			std::vector<double> ys;
			for (std::size_t k = 0; k < m; ++k) {
				std::vector<double> x(p);
				for (double& v : x) v = rng.normal();
				xs.push_back(std::move(x));
				ys.push_back(rng.normal());
			}
			std::vector<double> params(mlp_param_count(p, q));
			for (double& v : params) v = rng.uniform(-1.0, 1.0);
			std::vector<double> analytic(params.size());
			mlp_gradient(params, p, q, xs, ys, analytic);
			const auto numeric = oracle::central_differences(
			    [&](std::span<const double> w) { return mlp_loss(w, p, q, xs, ys); }, params, 1e-5);
			for (std::size_t i = 0; i < params.size(); ++i)
				worst = std::max(worst, std::abs(analytic[i] - numeric[i]) /
				                            std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-6}));
		}
		pass = worst <= 1e-5;
		char buf[64];
		std::snprintf(buf, sizeof(buf), "max relative error %.2e", worst);
		detail = buf;
	});
}

void criterion_4_rbf_output_layer() {
	guarded(4, "rbf output layer matches the normal-equations oracle", [](bool& pass, std::string& detail) {
		Rng rng(271828);
		double worst = 0.0;
		for (int inst = 0; inst < 10; ++inst) {
			const SupervisedSet train = random_instance(rng, 12 + static_cast<std::size_t>(inst), 2);
			TrainPolicy policy;
			policy.restarts = 3;
			policy.seed = 900 + static_cast<std::uint64_t>(inst);
			const RbfNetModel model = train_rbf(train, train, 5 + inst % 3, policy);

			const auto xs = model.input_scaler.apply_all(train.inputs);
			const std::size_t q = model.hidden_units();
			Matrix a(train.size(), q + 1);
			for (std::size_t k = 0; k < train.size(); ++k) {
				a(k, 0) = 1.0;
				for (std::size_t j = 0; j < q; ++j) {
					double d2 = 0.0;
					for (std::size_t d = 0; d < xs[k].size(); ++d) {
						const double diff = xs[k][d] - model.centroids[j][d];
						d2 += diff * diff;
					}
					a(k, j + 1) = std::exp(-d2 / (2.0 * model.spreads[j] * model.spreads[j]));
				}
			}
			std::vector<double> penalty(q + 1, 1e-8);
			penalty[0] = 0.0;
			const auto coef = oracle::normal_equations_ridge(a, train.targets, penalty);
			worst = std::max(worst, std::abs(model.bias - coef[0]));
			for (std::size_t j = 0; j < q; ++j)
				worst = std::max(worst, std::abs(model.weights[j] - coef[j + 1]));
		}
		pass = worst <= 1e-8;
		char buf[64];
		std::snprintf(buf, sizeof(buf), "max coefficient diff %.2e", worst);
		detail = buf;
	});
}

std::vector<double> gen_ar1(Rng& rng, std::size_t n, double phi, double sigma) {
	std::vector<double> y(n);
	double prev = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		prev = phi * prev + rng.normal(0.0, sigma);
		y[t] = prev + 50.0;
	}
	return y;
}

std::vector<double> gen_ma1(Rng& rng, std::size_t n, double theta, double sigma) {
	std::vector<double> y(n);
	double prev_eps = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		const double eps = rng.normal(0.0, sigma);
		y[t] = 50.0 + eps + theta * prev_eps;
		prev_eps = eps;
	}
	return y;
}

std::vector<double> gen_arma11(Rng& rng, std::size_t n, double phi, double theta, double sigma) {
	std::vector<double> y(n);
	double prev = 50.0;
	double prev_eps = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		const double eps = rng.normal(0.0, sigma);
		y[t] = 10.0 + phi * prev + eps + theta * prev_eps;
		prev = y[t];
		prev_eps = eps;
	}
	return y;
}

void criterion_5_arma_recovery() {
	guarded(5, "arma order recovery and ar(1) coefficient coverage", [](bool& pass, std::string& detail) {
		const double t0 = omp_get_wtime();
		const int trials = 50;
		int ar_hits = 0;
		int ma_hits = 0;
		int arma_hits = 0;
		int phi_cover = 0;
		const double se = std::sqrt((1.0 - 0.8 * 0.8) / 500.0);

		for (int trial = 0; trial < trials; ++trial) {
			{
				Rng rng(10000 + trial);
				const auto y = gen_ar1(rng, 500, 0.8, 1.0);
				const ArmaModel best = arma_select_order(y, 2, 2);
				if (best.p() == 1 && best.q() == 0) ++ar_hits;
				const ArmaModel direct = arma_fit(y, 1, 0);
				if (std::abs(direct.ar[0] - 0.8) <= 2.0 * se) ++phi_cover;
			}
			{
				Rng rng(20000 + trial);
				const auto y = gen_ma1(rng, 500, 0.5, 1.0);
				const ArmaModel best = arma_select_order(y, 2, 2);
				if (best.p() == 0 && best.q() == 1) ++ma_hits;
			}
			{
				Rng rng(30000 + trial);
				const auto y = gen_arma11(rng, 500, 0.8, 0.5, 1.0);
				const ArmaModel best = arma_select_order(y, 2, 2);
				if (best.p() == 1 && best.q() == 1) ++arma_hits;
			}
		}
		const double seconds = omp_get_wtime() - t0;
		const int need = trials * 8 / 10;
		const int need_cover = trials * 9 / 10;
		pass = ar_hits >= need && ma_hits >= need && arma_hits >= need && phi_cover >= need_cover &&
		       seconds < 60.0;
		char buf[160];
		std::snprintf(buf, sizeof(buf),
		              "ar %d/50, ma %d/50, arma %d/50 recovered; phi coverage %d/50; %.1f s", ar_hits,
		              ma_hits, arma_hits, phi_cover, seconds);
		detail = buf;
	});
}

void criterion_6_metrics_fixtures() {
	guarded(6, "metric fixtures: mape/rmape/plae exact, dm within 1e-10, antisymmetry", [](bool& pass, std::string& detail) {
		const std::vector<double> errA{3.0, -1.5, 2.0, 4.5, -2.5, 1.0, -3.5, 2.2, -1.8, 0.5, 2.8};
		const std::vector<double> errB{4.0, -2.0, 1.0, 5.0, -3.5, 2.0, -2.5, 3.0, -1.0, 1.5, 3.2};
		const auto fixture = [](const std::string& id, std::span<const double> errors, int h) {
			std::vector<ForecastRecord> out;
			YearMonth origin{2013, 2};
			for (const double e : errors) {
				ForecastRecord r;
				r.region = "r";
				r.model_id = id;
				r.horizon = h;
				r.origin = origin;
				r.y_actual = 100.0;
				r.y_hat = 100.0 - e;
				r.error = e;
				out.push_back(r);
				origin = origin.plus(1);
			}
			return out;
		};

		const auto a1 = fixture("A", errA, 1);
		const auto b1 = fixture("B", errB, 1);
		const auto a3 = fixture("A", errA, 3);
		const auto b3 = fixture("B", errB, 3);

		bool ok = true;
		ok &= std::abs(mape(std::vector<double>{100, 200}, std::vector<double>{110, 180}) - 10.0) < 1e-12;
		ok &= rmape(b1, b1) == 1.0;
		ok &= plae(a1, b1) == 8.0 / 11.0;

		// strictly-better-except-two and strictly-better-everywhere patterns
		std::vector<double> mostly = errB;
		for (double& e : mostly) e *= 0.5;
		mostly[3] = errB[3] * 2.0;
		mostly[7] = errB[7];
		ok &= plae(fixture("A", mostly, 1), b1) == 9.0 / 11.0;
		ok &= plae(fixture("A", std::vector<double>(11, 0.01), 1), b1) == 1.0;
		ok &= plae(b1, b1) == 0.0;

		const DmResult h3 = dm_test(a3, b3, 3);
		ok &= std::abs(h3.statistic - (-1.918613178574831)) <= 1e-10;
		const DmResult h1 = dm_test(a1, b1, 1);
		ok &= std::abs(h1.statistic - (-1.2953823016658015)) <= 1e-10;
		ok &= dm_test(a3, b3, 3).statistic == -dm_test(b3, a3, 3).statistic;

		// |stat| beyond 2.028 at n = 11 flags significance
		const auto strong = fixture("A", std::vector<double>(11, 0.1), 1);
		std::vector<double> weak_errs(11);
		for (std::size_t i = 0; i < 11; ++i) weak_errs[i] = 5.0 + 0.3 * static_cast<double>(i % 3);
		const DmResult strong_res = dm_test(strong, fixture("B", weak_errs, 1), 1);
		ok &= std::abs(strong_res.statistic) >= 2.028 && strong_res.significant_5pct;

		bool degenerate_ok = false;
		try {
			dm_test(a1, a1, 1);
		} catch (const VarianceError&) {
			degenerate_ok = true;
		}
		ok &= degenerate_ok;

		pass = ok;
		char buf[96];
		std::snprintf(buf, sizeof(buf), "dm h3 %.12f, dm h1 %.12f", h3.statistic, h1.statistic);
		detail = buf;
	});
}

// --- full synthetic experiment shared by criteria 7, 8, 10 ----------------

RunConfig acceptance_config() {
	const std::string text = R"([experiment]
horizons = 1,2,3,6,12
models = ARMA,L-SVR,P-SVR,G-SVR,RBF-NN,MLP-NN
lag = 1
seed = 20240601
eval_window = 11
mode = full

[svr]
costs = 0.1,1,10,100
epsilon_rel = 0.01,0.1
bandwidth_rel = 0.1,1,10
offsets = 0,1
degrees = 2,3

[neural]
restarts = 3
max_epochs = 1500
patience = 10
check_interval = 10
learning_rate = 0.01

[arma]
p_max = 3
q_max = 2

[input]
kind = synth
regions = 17
months = 183
base = 1000
base_step = 150
trend = 1
amplitude = 200
noise = white
sigma = 50
seed = 99
)";
	return parse_run_config(text);
}

struct HygieneProbe final : public CellProbe {
	std::mutex mutex;
	bool ok = true;
	std::string why;
	struct CellState {
		std::size_t last_origin = 0;
		std::size_t last_train = 0;
		std::size_t valid_begin = 0;
		std::size_t valid_end = 0;
		bool seen = false;
	};
	std::map<std::string, CellState> cells;
	std::size_t origins_seen = 0;

	void fail(const std::string& reason) {
		if (ok) {
			ok = false;
			why = reason;
		}
	}

	void on_origin(const OriginInfo& info) override {
		const std::lock_guard<std::mutex> lock(mutex);
		++origins_seen;
		if (info.visible_count != info.origin_index + 1) fail("visible block is not the history prefix");
		if (info.visible_count > info.target_index) fail("model could see the forecast target");
		const std::string key = info.region + "|" + info.model + "|" + std::to_string(info.horizon);
		CellState& st = cells[key];
		if (st.seen) {
			if (info.origin_index != st.last_origin + 1) fail("origins not consecutive");
			if (info.train_pair_count != st.last_train + 1) fail("train set did not grow by one");
			if (info.valid_target_begin != st.valid_begin || info.valid_target_end != st.valid_end)
				fail("validation block moved");
		}
		st.seen = true;
		st.last_origin = info.origin_index;
		st.last_train = info.train_pair_count;
		st.valid_begin = info.valid_target_begin;
		st.valid_end = info.valid_target_end;
	}
};

struct FullRun {
	ExperimentResult first;
	ExperimentResult second;
	double first_seconds = 0.0;
	double fast_seconds = 0.0;
	std::unique_ptr<HygieneProbe> probe = std::make_unique<HygieneProbe>();
	std::vector<TimeSeries> dataset;
	bool fast_ok = false;
};

FullRun run_full_experiment() {
	FullRun out;
	const RunConfig cfg = acceptance_config();
	out.dataset = load_input(cfg.input);

	double t0 = omp_get_wtime();
	out.first = run_experiment(out.dataset, cfg.experiment, out.probe.get());
	out.first_seconds = omp_get_wtime() - t0;

	out.second = run_experiment(out.dataset, cfg.experiment);

	RunConfig fast = cfg;
	fast.experiment.fast_mode = true;
	t0 = omp_get_wtime();
	const ExperimentResult fast_result = run_experiment(out.dataset, fast.experiment);
	out.fast_seconds = omp_get_wtime() - t0;
	out.fast_ok = fast_result.failures.empty();
	return out;
}

void criterion_7_hygiene(const FullRun& run) {
	guarded(7, "no future access; expanding train block; fixed validation", [&](bool& pass, std::string& detail) {
		pass = run.probe->ok && run.probe->origins_seen > 0;
		detail = run.probe->ok ? "origins checked: " + std::to_string(run.probe->origins_seen)
		                       : run.probe->why;
	});
}

void criterion_8_determinism(const FullRun& run) {
	guarded(8, "byte-identical reruns; runtime budget", [&](bool& pass, std::string& detail) {
		const bool identical = records_to_csv(run.first.records) == records_to_csv(run.second.records) &&
		                       report_to_csv(run.first.report) == report_to_csv(run.second.report) &&
		                       dm_to_csv(run.first.report) == dm_to_csv(run.second.report) &&
		                       summary_to_csv(run.first.report) == summary_to_csv(run.second.report);
		const bool full_fast_enough = run.first_seconds < 1800.0;
		const bool fast_fast_enough = run.fast_seconds < 300.0 && run.fast_ok;
		pass = identical && full_fast_enough && fast_fast_enough;
		char buf[128];
		std::snprintf(buf, sizeof(buf), "full %.0f s (< 1800), fast %.0f s (< 300), identical: %s",
		              run.first_seconds, run.fast_seconds, identical ? "yes" : "no");
		detail = buf;
	});
}

void criterion_10_report_sanity(const FullRun& run) {
	guarded(10, "finite scores everywhere; baseline self-check columns", [&](bool& pass, std::string& detail) {
		const EvaluationReport& report = run.first.report;
		const std::size_t expected_cells = 17 * 6 * 5;
		bool ok = run.first.failures.empty() && report.cells.size() == expected_cells;
		std::size_t arma_rows = 0;
		for (const CellScores& c : report.cells) {
			if (c.failed || !std::isfinite(c.mape) || !std::isfinite(c.rmape) || !std::isfinite(c.plae))
				ok = false;
			if (c.n != 11) ok = false;
			if (c.model_id == "ARMA") {
				++arma_rows;
				if (c.rmape != 1.0 || c.plae != 0.0) ok = false;
			}
		}
		ok &= arma_rows == 17 * 5;
		ok &= !report.dm.empty();
		ok &= report.summary.size() == 3 * 5; // three families, five horizons
		pass = ok;
		char buf[128];
		std::snprintf(buf, sizeof(buf), "cells %zu/%zu, failures %zu, dm rows %zu", report.cells.size(),
		              expected_cells, run.first.failures.size(), report.dm.size());
		detail = buf;
	});
}

// --- criterion 9: descriptive statistics against reference fixtures -------

struct RefRegion {
	const char* name;
	double arrivals_2013; // reference annual arrivals
	double mean;          // reference monthly mean
	double std_dev;       // reference monthly standard deviation
	double cv;            // reference coefficient of variation, percent
};

// reference regional statistics used by the conditional describe check
const RefRegion kRefRegions[] = {
    {"Catalonia", 10281308, 625334.3, 306900.6, 49.1},
    {"Balearic Islands", 7384863, 509102.3, 423971.4, 83.3},
    {"Andalusia", 6330745, 453843.7, 160241.8, 35.3},
    {"Canary Islands", 6044595, 359724.3, 93466.4, 26.0},
    {"Madrid (Community)", 4054804, 279640.7, 78578.3, 28.1},
    {"Valencia (Community)", 2701118, 171155.0, 52886.8, 30.9},
    {"Basque Country", 915076, 51169.5, 25532.1, 49.9},
    {"Castilla-Leon", 883526, 62450.4, 30444.4, 48.7},
    {"Galicia", 826443, 51043.9, 29595.0, 58.0},
    {"Aragon", 400521, 25868.9, 11384.5, 44.0},
    {"Castilla-La Mancha", 306395, 25856.1, 8378.2, 32.4},
    {"Navarra", 226060, 12748.8, 7444.7, 58.4},
    {"Cantabria", 201297, 13750.8, 8552.5, 62.2},
    {"Murcia (Region)", 196098, 14138.4, 3999.6, 28.3},
    {"Asturias", 189320, 11783.5, 7546.5, 64.0},
    {"Extremadura", 181200, 12443.7, 4502.2, 36.2},
    {"La Rioja", 88621, 6224.5, 3534.6, 56.8},
};

// a 183-month series with the exact requested mean and population std
TimeSeries stats_fixture_series(const std::string& region, double mean, double sd) {
	TimeSeries ts;
	ts.region = region;
	ts.start = {1999, 1};
	const double a = sd * std::sqrt(183.0 / 182.0);
	for (int i = 0; i < 183; ++i) {
		if (i == 182)
			ts.values.push_back(mean);
		else
			ts.values.push_back(i % 2 == 0 ? mean + a : mean - a);
	}
	return ts;
}

void criterion_9_describe_reference() {
	guarded(9, "describe reproduces the reference CV and share columns", [](bool& pass, std::string& detail) {
		std::vector<TimeSeries> dataset;
		std::string source;
		if (const char* env = std::getenv("SFB_INE_CSV")) {
			dataset = load_csv(env);
			source = "user-supplied csv";
		} else {
			// synthetic fixture with the reference moments and annual totals
			for (const RefRegion& r : kRefRegions)
				dataset.push_back(stats_fixture_series(r.name, r.mean, r.std_dev));
			source = "synthetic stats fixture";
		}

		// CV column, +- 0.1 percentage points per matched region
		double worst_cv = 0.0;
		std::size_t matched = 0;
		for (const TimeSeries& ts : dataset) {
			for (const RefRegion& r : kRefRegions) {
				if (ts.region != r.name) continue;
				++matched;
				const DescriptiveStats s = describe(ts, 1.0);
				worst_cv = std::max(worst_cv, std::abs(s.cv - r.cv));
			}
		}
		bool ok = matched > 0 && worst_cv <= 0.1;

		// share column, +- 0.05 points, over the reference annual totals
		std::vector<TimeSeries> annual;
		if (std::getenv("SFB_INE_CSV") == nullptr) {
			for (const RefRegion& r : kRefRegions) {
				TimeSeries ts;
				ts.region = r.name;
				ts.start = {2013, 1};
				for (int m = 0; m < 12; ++m) ts.values.push_back(r.arrivals_2013 / 12.0);
				annual.push_back(std::move(ts));
			}
		} else {
			annual = dataset; // real data: shares computed from the last complete year
		}
		const auto rows = describe_dataset(annual);
		double worst_share = 0.0;
		for (const DescribeRow& row : rows)
			for (const RefRegion& r : kRefRegions)
				if (row.region == r.name)
					worst_share = std::max(worst_share,
					                       std::abs(row.stats.share - 100.0 * r.arrivals_2013 / 41211990.0));
		ok &= worst_share <= 0.05;

		pass = ok;
		char buf[160];
		std::snprintf(buf, sizeof(buf), "%s: %zu regions, max |cv diff| %.3f, max |share diff| %.4f",
		              source.c_str(), matched, worst_cv, worst_share);
		detail = buf;
	});
}

} // namespace

int main() {
	if (const char* env = std::getenv("SFB_THREADS")) {
		const int n = std::atoi(env);
		if (n > 0) omp_set_num_threads(n);
	}
	std::printf("acceptance suite (%d threads)\n", omp_get_max_threads());

	criterion_1_svr_oracle();
	criterion_2_kernels();
	criterion_3_mlp_gradient();
	criterion_4_rbf_output_layer();
	criterion_5_arma_recovery();
	criterion_6_metrics_fixtures();

	try {
		const FullRun run = run_full_experiment();
		criterion_7_hygiene(run);
		criterion_8_determinism(run);
		criterion_9_describe_reference();
		criterion_10_report_sanity(run);
	} catch (const std::exception& e) {
		criterion(7, "no future access; expanding train block; fixed validation", false, e.what());
		criterion(8, "byte-identical reruns; runtime budget", false, "experiment failed");
		criterion_9_describe_reference();
		criterion(10, "finite scores everywhere; baseline self-check columns", false, "experiment failed");
	}

	std::printf("%s\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
	return g_failures == 0 ? 0 : 1;
}
