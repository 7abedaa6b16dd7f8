#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sfb/errors.hpp"
#include "sfb/metrics.hpp"
#include "sfb/model_io.hpp"
#include "sfb/neural.hpp"
#include "sfb/rng.hpp"

using namespace sfb;

namespace {

SupervisedSet constant_set(std::size_t n, double value) {
	SupervisedSet s;
	s.lag_count = 1;
	for (std::size_t i = 0; i < n; ++i) {
		s.inputs.push_back({static_cast<double>(i) * 0.37});
		s.targets.push_back(value);
	}
	return s;
}

SupervisedSet random_set(Rng& rng, std::size_t n, std::size_t dim) {
	SupervisedSet s;
	s.lag_count = dim;
	for (std::size_t i = 0; i < n; ++i) {
		std::vector<double> x(dim);
		for (double& v : x) v = rng.normal();
		double t = 1.0;
		for (const double v : x) t += std::cos(v);
		s.inputs.push_back(std::move(x));
		s.targets.push_back(t + 0.1 * rng.normal() + 3.0);
	}
	return s;
}

TrainPolicy quick_policy(std::uint64_t seed) {
	TrainPolicy p;
	p.restarts = 2;
	p.max_epochs = 600;
	p.patience = 10;
	p.seed = seed;
	return p;
}

} // namespace

TEST_CASE("rbf: constant targets give the minimum-norm solution") {
	const SupervisedSet train = constant_set(30, 7.0);
	const SupervisedSet valid = constant_set(8, 7.0);
	const RbfNetModel model = train_rbf(train, valid, 5, quick_policy(1));
	CHECK(model.bias == doctest::Approx(7.0).epsilon(1e-10));
	for (const double w : model.weights) CHECK(std::abs(w) <= 1e-6);
	CHECK(model.predict(std::vector<double>{2.0}) == doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("rbf: single-unit prediction at the centroid") {
	RbfNetModel model;
	model.centroids = {{0.4, -1.0}};
	model.spreads = {1.0};
	model.weights = {2.0};
	model.bias = 0.0;
	model.input_scaler.shift = {0.0, 0.0};
	model.input_scaler.scale = {1.0, 1.0};
	CHECK(model.predict(std::vector<double>{0.4, -1.0}) == 2.0);
}

TEST_CASE("rbf: activations lie in (0, 1] and peak at the centroid") {
	Rng rng(3);
	const SupervisedSet train = random_set(rng, 40, 2);
	const RbfNetModel model = train_rbf(train, train, 8, quick_policy(7));
	for (std::size_t j = 0; j < model.hidden_units(); ++j) {
		CHECK(model.spreads[j] > 0.0);
		// g_j(mu_j) = 1 by construction
		const double d0 = 0.0;
		CHECK(std::exp(-d0 / (2.0 * model.spreads[j] * model.spreads[j])) == 1.0);
	}
}

TEST_CASE("rbf: output layer matches the normal-equations oracle") {
	Rng rng(11);
	for (int instance = 0; instance < 10; ++instance) {
		const SupervisedSet train = random_set(rng, 10 + instance, 2);
		const RbfNetModel model = train_rbf(train, train, 5, quick_policy(100 + instance));

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
		penalty[0] = 0.0; // the bias is never penalized
		const std::vector<double> coef = oracle::normal_equations_ridge(a, train.targets, penalty);
		CHECK(std::abs(model.bias - coef[0]) <= 1e-8);
		for (std::size_t j = 0; j < q; ++j) CHECK(std::abs(model.weights[j] - coef[j + 1]) <= 1e-8);
	}
}

TEST_CASE("rbf: preconditions and degeneracy") {
	const SupervisedSet train = constant_set(30, 5.0);
	CHECK_THROWS_AS(train_rbf(train, train, 4, quick_policy(1)), Error);
	CHECK_THROWS_AS(train_rbf(train, train, 31, quick_policy(1)), Error);
	CHECK_THROWS_AS(train_rbf(constant_set(4, 5.0), train, 5, quick_policy(1)), InsufficientDataError);

	SupervisedSet dup;
	dup.lag_count = 1;
	for (int i = 0; i < 12; ++i) {
		dup.inputs.push_back({static_cast<double>(i % 3)}); // only 3 distinct inputs
		dup.targets.push_back(1.0 + i);
	}
	CHECK_THROWS_AS(train_rbf(dup, dup, 5, quick_policy(1)), DegenerateClusterError);
}

TEST_CASE("mlp: analytic gradient matches central differences on 50 random networks") {
	Rng rng(2718);
	double worst = 0.0;
	for (int trial = 0; trial < 50; ++trial) {
		const std::size_t p = 1 + rng.below(3);
		const std::size_t q = 1 + rng.below(5);
		std::vector<std::vector<double>> xs;
		std::vector<double> ys;
		const std::size_t m = 4 + rng.below(8);
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
		for (std::size_t i = 0; i < params.size(); ++i) {
			const double rel = std::abs(analytic[i] - numeric[i]) /
			                   std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-6});
			worst = std::max(worst, rel);
		}
	}
	CHECK(worst <= 1e-5);
}

TEST_CASE("mlp: linearly realizable data trains below 1% MAPE") {
	SupervisedSet train;
	train.lag_count = 1;
	for (int i = 0; i < 24; ++i) {
		const double x = static_cast<double>(i) / 12.0;
		train.inputs.push_back({x});
		train.targets.push_back(3.0 * x + 1.0);
	}
	// realizability oracle: an exact linear fit has zero residual
	const oracle::Ar1Fit line = [&] {
		// reuse the 2x2 normal equations: regress y on (1, x)
		Matrix a(train.size(), 2);
		for (std::size_t k = 0; k < train.size(); ++k) {
			a(k, 0) = 1.0;
			a(k, 1) = train.inputs[k][0];
		}
		const auto c = oracle::normal_equations_ridge(a, train.targets, {0.0, 0.0});
		return oracle::Ar1Fit{c[0], c[1]};
	}();
	for (std::size_t k = 0; k < train.size(); ++k) {
		const double fit = line.intercept + line.phi * train.inputs[k][0];
		REQUIRE(std::abs(fit - train.targets[k]) <= 1e-9);
	}

	TrainPolicy policy;
	policy.restarts = 3;
	policy.max_epochs = 80000;
	policy.patience = 4000;
	policy.learning_rate = 0.25;
	policy.seed = 5;
	const MlpModel model = train_mlp(train, train, 5, policy);
	std::vector<double> pred(train.size());
	for (std::size_t k = 0; k < train.size(); ++k) pred[k] = model.predict(train.inputs[k]);
	CHECK(mape(train.targets, pred) <= 1.0);
}

TEST_CASE("mlp: multi-start equals the best of its single restarts") {
	Rng rng(21);
	const SupervisedSet train = random_set(rng, 25, 1);
	const SupervisedSet valid = random_set(rng, 10, 1);
	TrainPolicy policy = quick_policy(77);
	policy.restarts = 2;

	const MlpModel multi = train_mlp(train, valid, 3, policy);
	const MlpRestartResult r0 = train_mlp_single(train, valid, 3, policy, derive_seed(77, 0));
	const MlpRestartResult r1 = train_mlp_single(train, valid, 3, policy, derive_seed(77, 1));
	REQUIRE(r0.ok);
	REQUIRE(r1.ok);
	const MlpModel& best = r0.validation_mape <= r1.validation_mape ? r0.model : r1.model;
	CHECK(mlp_model_to_text(multi) == mlp_model_to_text(best));
}

TEST_CASE("mlp: zero network predicts its output bias") {
	MlpModel model;
	model.input_dim = 2;
	model.hidden_units = 3;
	model.input_weights.assign(6, 0.0);
	model.hidden_bias.assign(3, 0.0);
	model.output_weights.assign(3, 0.0);
	model.output_bias = 4.0;
	model.input_scaler.shift = {0.0, 0.0};
	model.input_scaler.scale = {1.0, 1.0};
	CHECK(model.predict(std::vector<double>{1.0, -2.0}) == 4.0);
	CHECK_THROWS_AS(model.predict(std::vector<double>{1.0}), DimError);
}

TEST_CASE("mlp: early stopping returns the best checkpoint") {
	Rng rng(9);
	const SupervisedSet train = random_set(rng, 30, 1);
	const SupervisedSet valid = random_set(rng, 12, 1);
	TrainPolicy policy = quick_policy(13);
	policy.restarts = 1;

	MlpTrainTrace trace;
	const MlpRestartResult res = train_mlp_single(train, valid, 3, policy, derive_seed(13, 0), &trace, 0);
	REQUIRE(res.ok);
	REQUIRE(!trace.checkpoints.empty());
	double best = std::numeric_limits<double>::infinity();
	for (const MlpCheckpoint& c : trace.checkpoints) best = std::min(best, c.validation_mape);
	CHECK(res.validation_mape == best);
	// nothing after the returned checkpoint beats it
	for (const MlpCheckpoint& c : trace.checkpoints) CHECK(c.validation_mape >= best);
}

TEST_CASE("select_q: singleton, tie-break, determinism") {
	const SupervisedSet train = constant_set(40, 7.0);
	const SupervisedSet valid = constant_set(10, 7.0);
	TrainPolicy policy = quick_policy(3);

	SUBCASE("singleton candidate set") {
		const RbfSelection sel = select_q_rbf(train, valid, {8}, policy);
		CHECK(sel.q == 8);
	}
	SUBCASE("exact tie goes to the smaller q") {
		// constant data: both candidates score a validation MAPE of exactly 0
		const RbfSelection sel = select_q_rbf(train, valid, {10, 5}, policy);
		CHECK(sel.q == 5);
		CHECK(sel.validation_mape == 0.0);
	}
	SUBCASE("same seed, same selection") {
		Rng rng(71);
		const SupervisedSet t2 = random_set(rng, 40, 1);
		const SupervisedSet v2 = random_set(rng, 12, 1);
		const MlpSelection a = select_q_mlp(t2, v2, {2, 4}, policy);
		const MlpSelection b = select_q_mlp(t2, v2, {2, 4}, policy);
		CHECK(a.q == b.q);
		CHECK(mlp_model_to_text(a.model) == mlp_model_to_text(b.model));
	}
	SUBCASE("empty candidates") {
		CHECK_THROWS_AS(select_q_rbf(train, valid, {}, policy), SearchError);
	}
}

TEST_CASE("models reload bitwise through the text format") {
	Rng rng(17);
	const SupervisedSet train = random_set(rng, 30, 2);
	const SupervisedSet valid = random_set(rng, 10, 2);

	const RbfNetModel rbf = train_rbf(train, valid, 6, quick_policy(2));
	const RbfNetModel rbf_back = rbf_model_from_text(rbf_model_to_text(rbf));
	const MlpModel mlp = train_mlp(train, valid, 3, quick_policy(2));
	const MlpModel mlp_back = mlp_model_from_text(mlp_model_to_text(mlp));

	for (int probe = 0; probe < 20; ++probe) {
		const std::vector<double> x{rng.normal(), rng.normal()};
		CHECK(rbf.predict(x) == rbf_back.predict(x));
		CHECK(mlp.predict(x) == mlp_back.predict(x));
	}
}
