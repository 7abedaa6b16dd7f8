#include "sfb/neural.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sfb/errors.hpp"
#include "sfb/linalg.hpp"
#include "sfb/metrics.hpp"
#include "sfb/rng.hpp"

namespace sfb {

namespace {

constexpr double kSigmaFloor = 1e-3;
constexpr double kRidge = 1e-8;
constexpr double kMinLearningRate = 1e-14;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double rbf_activation(std::span<const double> x, std::span<const double> mu, double sigma) {
	return std::exp(-squared_distance(x, mu) / (2.0 * sigma * sigma));
}

struct KmeansRun {
	std::vector<std::vector<double>> centroids;
	double sse = std::numeric_limits<double>::infinity();
};

// one seeded Lloyd run; empty clusters are re-seeded at the point
// farthest from its assigned centroid
KmeansRun kmeans_once(const std::vector<std::vector<double>>& xs, int q, Rng& rng) {
	const std::size_t n = xs.size();
	KmeansRun run;

	std::vector<std::size_t> order(n);
	for (std::size_t i = 0; i < n; ++i) order[i] = i;
	for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

	for (const std::size_t idx : order) {
		const auto& cand = xs[idx];
		bool dup = false;
		for (const auto& c : run.centroids)
			if (squared_distance(c, cand) == 0.0) {
				dup = true;
				break;
			}
		if (!dup) run.centroids.push_back(cand);
		if (run.centroids.size() == static_cast<std::size_t>(q)) break;
	}
	if (run.centroids.size() < static_cast<std::size_t>(q)) return run; // degenerate, sse stays inf

	std::vector<std::size_t> assign(n, 0);
	for (int iter = 0; iter < 100; ++iter) {
		bool changed = false;
		for (std::size_t i = 0; i < n; ++i) {
			double best = std::numeric_limits<double>::infinity();
			std::size_t best_j = 0;
			for (std::size_t j = 0; j < run.centroids.size(); ++j) {
				const double d = squared_distance(xs[i], run.centroids[j]);
				if (d < best) {
					best = d;
					best_j = j;
				}
			}
			if (assign[i] != best_j) {
				assign[i] = best_j;
				changed = true;
			}
		}

		std::vector<std::vector<double>> sums(run.centroids.size(),
		                                      std::vector<double>(xs.front().size(), 0.0));
		std::vector<std::size_t> counts(run.centroids.size(), 0);
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t d = 0; d < xs[i].size(); ++d) sums[assign[i]][d] += xs[i][d];
			++counts[assign[i]];
		}
		for (std::size_t j = 0; j < run.centroids.size(); ++j) {
			if (counts[j] == 0) {
				// farthest point from its centroid takes over the empty slot
				double far = -1.0;
				std::size_t far_i = 0;
				for (std::size_t i = 0; i < n; ++i) {
					const double d = squared_distance(xs[i], run.centroids[assign[i]]);
					if (d > far) {
						far = d;
						far_i = i;
					}
				}
				run.centroids[j] = xs[far_i];
				changed = true;
				continue;
			}
			for (std::size_t d = 0; d < sums[j].size(); ++d)
				run.centroids[j][d] = sums[j][d] / static_cast<double>(counts[j]);
		}
		if (!changed && iter > 0) break;
	}

	run.sse = 0.0;
	for (std::size_t i = 0; i < n; ++i) {
		double best = std::numeric_limits<double>::infinity();
		for (const auto& c : run.centroids) best = std::min(best, squared_distance(xs[i], c));
		run.sse += best;
	}
	return run;
}

} // namespace

double RbfNetModel::predict(std::span<const double> x) const {
	if (!input_scaler.shift.empty() && x.size() != input_scaler.shift.size())
		throw DimError("rbf predict: bad input dimension " + std::to_string(x.size()));
	const std::vector<double> xs = input_scaler.apply(x);
	double y = bias;
	for (std::size_t j = 0; j < centroids.size(); ++j)
		y += weights[j] * rbf_activation(xs, centroids[j], spreads[j]);
	return y;
}

double MlpModel::predict(std::span<const double> x) const {
	if (x.size() != input_dim)
		throw DimError("mlp predict: bad input dimension " + std::to_string(x.size()));
	const std::vector<double> xs = input_scaler.apply(x);
	double y = output_bias;
	for (std::size_t j = 0; j < hidden_units; ++j) {
		double z = hidden_bias[j];
		for (std::size_t i = 0; i < input_dim; ++i) z += input_weights[i * hidden_units + j] * xs[i];
		y += output_weights[j] * sigmoid(z);
	}
	return y;
}

RbfNetModel train_rbf(const SupervisedSet& train, const SupervisedSet& valid, int q,
                      const TrainPolicy& policy) {
	if (q < 5 || q > 30) throw Error("rbf: hidden-unit count must lie in [5, 30]");
	if (train.size() < static_cast<std::size_t>(q))
		throw InsufficientDataError("rbf: fewer training pairs than hidden units");
	if (valid.size() > 0 && valid.inputs.front().size() != train.inputs.front().size())
		throw DimError("rbf: train/validation dimension mismatch");

	const AffineScaler scaler = AffineScaler::fit(train.inputs);
	const std::vector<std::vector<double>> xs = scaler.apply_all(train.inputs);

	std::set<std::vector<double>> distinct(xs.begin(), xs.end());
	if (distinct.size() < static_cast<std::size_t>(q))
		throw DegenerateClusterError("rbf: only " + std::to_string(distinct.size()) +
		                             " distinct inputs for " + std::to_string(q) + " clusters");

	KmeansRun best;
	for (int r = 0; r < std::max(1, policy.restarts); ++r) {
		Rng rng(derive_seed(policy.seed, static_cast<std::uint64_t>(r)));
		KmeansRun run = kmeans_once(xs, q, rng);
		if (run.sse < best.sse) best = std::move(run);
	}
	if (!std::isfinite(best.sse))
		throw DegenerateClusterError("rbf: k-means degenerate in every restart");

	RbfNetModel model;
	model.input_scaler = scaler;
	model.centroids = std::move(best.centroids);
	model.spreads.resize(model.centroids.size());
	for (std::size_t j = 0; j < model.centroids.size(); ++j) {
		double nearest = std::numeric_limits<double>::infinity();
		for (std::size_t k = 0; k < model.centroids.size(); ++k)
			if (k != j) nearest = std::min(nearest, squared_distance(model.centroids[j], model.centroids[k]));
		const double sigma = std::isfinite(nearest) ? std::sqrt(nearest) : 1.0;
		model.spreads[j] = std::max(sigma, kSigmaFloor);
	}

	// output layer: ridge least squares on the hidden activations; the
	// penalty applies to the unit weights only, never the bias
	const std::size_t n = train.size();
	const std::size_t qq = model.centroids.size();
	Matrix a(n + qq, qq + 1);
	std::vector<double> b(n + qq, 0.0);
	for (std::size_t k = 0; k < n; ++k) {
		a(k, 0) = 1.0;
		for (std::size_t j = 0; j < qq; ++j)
			a(k, j + 1) = rbf_activation(xs[k], model.centroids[j], model.spreads[j]);
		b[k] = train.targets[k];
	}
	const double sqrt_ridge = std::sqrt(kRidge);
	for (std::size_t j = 0; j < qq; ++j) a(n + j, j + 1) = sqrt_ridge;

	const std::vector<double> coef = solve_least_squares(std::move(a), std::move(b));
	model.bias = coef[0];
	model.weights.assign(coef.begin() + 1, coef.end());
	return model;
}

std::size_t mlp_param_count(std::size_t p, std::size_t q) { return p * q + 2 * q + 1; }

double mlp_loss(std::span<const double> params, std::size_t p, std::size_t q,
                const std::vector<std::vector<double>>& inputs, std::span<const double> targets) {
	const double* w = params.data();
	const double* c = w + p * q;
	const double* beta = c + q;
	const double beta0 = params[p * q + 2 * q];

	double loss = 0.0;
	for (std::size_t k = 0; k < inputs.size(); ++k) {
		double out = beta0;
		for (std::size_t j = 0; j < q; ++j) {
			double z = c[j];
			for (std::size_t i = 0; i < p; ++i) z += w[i * q + j] * inputs[k][i];
			out += beta[j] * sigmoid(z);
		}
		const double e = out - targets[k];
		loss += e * e;
	}
	return loss / static_cast<double>(inputs.size());
}

void mlp_gradient(std::span<const double> params, std::size_t p, std::size_t q,
                  const std::vector<std::vector<double>>& inputs, std::span<const double> targets,
                  std::span<double> grad) {
	const double* w = params.data();
	const double* c = w + p * q;
	const double* beta = c + q;
	const double beta0 = params[p * q + 2 * q];

	std::fill(grad.begin(), grad.end(), 0.0);
	double* gw = grad.data();
	double* gc = gw + p * q;
	double* gbeta = gc + q;
	double& gbeta0 = grad[p * q + 2 * q];

	std::vector<double> h(q);
	const double m = static_cast<double>(inputs.size());
	for (std::size_t k = 0; k < inputs.size(); ++k) {
		double out = beta0;
		for (std::size_t j = 0; j < q; ++j) {
			double z = c[j];
			for (std::size_t i = 0; i < p; ++i) z += w[i * q + j] * inputs[k][i];
			h[j] = sigmoid(z);
			out += beta[j] * h[j];
		}
		const double e = 2.0 * (out - targets[k]) / m;
		gbeta0 += e;
		for (std::size_t j = 0; j < q; ++j) {
			gbeta[j] += e * h[j];
			const double back = e * beta[j] * h[j] * (1.0 - h[j]);
			gc[j] += back;
			for (std::size_t i = 0; i < p; ++i) gw[i * q + j] += back * inputs[k][i];
		}
	}
}

MlpRestartResult train_mlp_single(const SupervisedSet& train, const SupervisedSet& valid, int q,
                                  const TrainPolicy& policy, std::uint64_t restart_seed,
                                  MlpTrainTrace* trace, int restart_index) {
	MlpRestartResult result;
	const std::size_t p = train.lag_count > 0 ? train.lag_count : train.inputs.front().size();

	const AffineScaler scaler = AffineScaler::fit(train.inputs);
	const std::vector<std::vector<double>> xs = scaler.apply_all(train.inputs);
	const std::vector<std::vector<double>> vx = scaler.apply_all(valid.inputs);

	double ty_mean = 0.0;
	for (const double t : train.targets) ty_mean += t;
	ty_mean /= static_cast<double>(train.size());
	double ty_sd = 0.0;
	for (const double t : train.targets) ty_sd += (t - ty_mean) * (t - ty_mean);
	ty_sd = std::sqrt(ty_sd / static_cast<double>(train.size()));
	if (ty_sd <= 1e-12) ty_sd = 1.0;
	std::vector<double> ys(train.size());
	for (std::size_t k = 0; k < train.size(); ++k) ys[k] = (train.targets[k] - ty_mean) / ty_sd;

	const std::size_t qq = static_cast<std::size_t>(q);
	const std::size_t np = mlp_param_count(p, qq);
	std::vector<double> params(np);
	Rng rng(restart_seed);
	for (double& v : params) v = rng.uniform(-0.5, 0.5);

	std::vector<double> grad(np);
	std::vector<double> best_params = params;
	double best_val = std::numeric_limits<double>::infinity();
	double lr = policy.learning_rate;
	double prev_loss = mlp_loss(params, p, qq, xs, ys);
	if (!std::isfinite(prev_loss)) return result;
	int bad_checks = 0;
	bool have_best = false;

	const auto validation_mape_now = [&]() {
		std::vector<double> pred(valid.size());
		const double* w = params.data();
		const double* c = w + p * qq;
		const double* beta = c + qq;
		const double beta0 = params[p * qq + 2 * qq];
		for (std::size_t k = 0; k < valid.size(); ++k) {
			double out = beta0;
			for (std::size_t j = 0; j < qq; ++j) {
				double z = c[j];
				for (std::size_t i = 0; i < p; ++i) z += w[i * qq + j] * vx[k][i];
				out += beta[j] * sigmoid(z);
			}
			pred[k] = ty_mean + ty_sd * out; // back to raw scale
		}
		return mape(valid.targets, pred);
	};

	const auto run_check = [&](int epoch) {
		const double val = validation_mape_now();
		if (trace) trace->checkpoints.push_back({restart_index, epoch, val});
		if (val < best_val) {
			best_val = val;
			best_params = params;
			have_best = true;
			bad_checks = 0;
		} else {
			++bad_checks;
		}
		return bad_checks >= policy.patience;
	};

	int epoch = 1;
	for (; epoch <= policy.max_epochs; ++epoch) {
		mlp_gradient(params, p, qq, xs, ys, grad);
		for (std::size_t i = 0; i < np; ++i) params[i] -= lr * grad[i];
		const double loss = mlp_loss(params, p, qq, xs, ys);
		if (!std::isfinite(loss)) {
			if (!have_best) return result; // diverged before any checkpoint
			break;
		}
		if (loss > prev_loss) {
			for (std::size_t i = 0; i < np; ++i) params[i] += lr * grad[i]; // undo
			lr *= 0.5;
			if (lr < kMinLearningRate) break;
		} else {
			prev_loss = loss;
		}
		if (policy.check_interval > 0 && epoch % policy.check_interval == 0 && valid.size() > 0)
			if (run_check(epoch)) break;
	}
	if (valid.size() > 0 && !have_best) run_check(epoch > policy.max_epochs ? policy.max_epochs : epoch);

	if (valid.size() == 0) {
		best_params = params;
		best_val = 0.0;
		have_best = true;
	}
	if (!have_best) return result;

	MlpModel model;
	model.input_dim = p;
	model.hidden_units = qq;
	model.input_scaler = scaler;
	model.input_weights.assign(best_params.begin(), best_params.begin() + static_cast<std::ptrdiff_t>(p * qq));
	model.hidden_bias.assign(best_params.begin() + static_cast<std::ptrdiff_t>(p * qq),
	                         best_params.begin() + static_cast<std::ptrdiff_t>(p * qq + qq));
	// fold the target z-scoring into the affine output layer
	model.output_weights.resize(qq);
	for (std::size_t j = 0; j < qq; ++j)
		model.output_weights[j] = ty_sd * best_params[p * qq + qq + j];
	model.output_bias = ty_mean + ty_sd * best_params[p * qq + 2 * qq];

	result.model = std::move(model);
	result.validation_mape = best_val;
	result.ok = true;
	return result;
}

MlpModel train_mlp(const SupervisedSet& train, const SupervisedSet& valid, int q,
                   const TrainPolicy& policy, MlpTrainTrace* trace) {
	if (train.size() < 2) throw InsufficientDataError("mlp: need at least 2 training pairs");
	if (q < 1) throw Error("mlp: hidden-unit count must be >= 1");

	MlpRestartResult best;
	for (int r = 0; r < std::max(1, policy.restarts); ++r) {
		MlpRestartResult res = train_mlp_single(train, valid, q, policy,
		                                        derive_seed(policy.seed, static_cast<std::uint64_t>(r)),
		                                        trace, r);
		if (!res.ok) continue;
		if (!best.ok || res.validation_mape < best.validation_mape) best = std::move(res);
	}
	if (!best.ok) throw ConvergenceError("mlp: every restart diverged", 0.0);
	return std::move(best.model);
}

RbfSelection select_q_rbf(const SupervisedSet& train, const SupervisedSet& valid,
                          const std::vector<int>& candidates, const TrainPolicy& policy) {
	if (candidates.empty()) throw SearchError("rbf q selection: empty candidate set");
	std::vector<int> qs = candidates;
	std::sort(qs.begin(), qs.end());
	RbfSelection best;
	bool have = false;
	std::string last_error = "no candidates";
	for (const int q : qs) {
		try {
			RbfNetModel model = train_rbf(train, valid, q, policy);
			std::vector<double> pred(valid.size());
			for (std::size_t k = 0; k < valid.size(); ++k) pred[k] = model.predict(valid.inputs[k]);
			const double val = mape(valid.targets, pred);
			if (!have || val < best.validation_mape) {
				best = {q, std::move(model), val};
				have = true;
			}
		} catch (const Error& e) {
			last_error = e.what();
		}
	}
	if (!have) throw SearchError("rbf q selection: all candidates failed: " + last_error);
	return best;
}

MlpSelection select_q_mlp(const SupervisedSet& train, const SupervisedSet& valid,
                          const std::vector<int>& candidates, const TrainPolicy& policy) {
	if (candidates.empty()) throw SearchError("mlp q selection: empty candidate set");
	std::vector<int> qs = candidates;
	std::sort(qs.begin(), qs.end());
	MlpSelection best;
	bool have = false;
	std::string last_error = "no candidates";
	for (const int q : qs) {
		try {
			MlpModel model = train_mlp(train, valid, q, policy, nullptr);
			std::vector<double> pred(valid.size());
			for (std::size_t k = 0; k < valid.size(); ++k) pred[k] = model.predict(valid.inputs[k]);
			const double val = mape(valid.targets, pred);
			if (!have || val < best.validation_mape) {
				best = {q, std::move(model), val};
				have = true;
			}
		} catch (const Error& e) {
			last_error = e.what();
		}
	}
	if (!have) throw SearchError("mlp q selection: all candidates failed: " + last_error);
	return best;
}

} // namespace sfb
