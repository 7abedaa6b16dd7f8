#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "sfb/arma.hpp"
#include "sfb/errors.hpp"
#include "sfb/rng.hpp"

using namespace sfb;

namespace {

std::vector<double> ar1_series(std::uint64_t seed, std::size_t n, double phi, double c,
                               double sigma) {
	Rng rng(seed);
	std::vector<double> y(n);
	double prev = c / (1.0 - phi);
	for (std::size_t t = 0; t < n; ++t) {
		prev = c + phi * prev + rng.normal(0.0, sigma);
		y[t] = prev;
	}
	return y;
}

} // namespace

TEST_CASE("white noise (0,0): closed form") {
	Rng rng(1);
	std::vector<double> y(120);
	for (double& v : y) v = rng.normal(10.0, 2.0);
	const ArmaModel model = arma_fit(y, 0, 0);

	const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
	double var = 0.0;
	for (const double v : y) var += (v - mean) * (v - mean);
	var /= static_cast<double>(y.size());

	CHECK(model.intercept == doctest::Approx(mean).epsilon(1e-12));
	CHECK(model.sigma2 == doctest::Approx(var).epsilon(1e-12));
	CHECK(model.aic == doctest::Approx(2.0 * 2 - 2.0 * model.log_likelihood));
}

TEST_CASE("ar(1): simplex fit lands on the closed-form CSS minimizer") {
	const std::vector<double> y = ar1_series(42, 500, 0.8, 2.0, 1.0);
	const ArmaModel model = arma_fit(y, 1, 0);
	const oracle::Ar1Fit exact = oracle::css_ar1_closed_form(y);

	CHECK(std::abs(model.ar[0] - exact.phi) <= 1e-5);
	CHECK(std::abs(model.intercept - exact.intercept) <= 1e-4);

	// +- 2 asymptotic standard errors around the truth
	const double se = std::sqrt((1.0 - 0.8 * 0.8) / 500.0);
	CHECK(model.ar[0] >= 0.8 - 2.0 * se);
	CHECK(model.ar[0] <= 0.8 + 2.0 * se);
}

TEST_CASE("precondition: series must be long enough for the order") {
	std::vector<double> y(25, 1.0);
	CHECK_THROWS_AS(arma_fit(y, 1, 1), InsufficientDataError);
}

TEST_CASE("select_order: singleton grid and AIC minimality") {
	const std::vector<double> y = ar1_series(7, 300, 0.6, 1.0, 1.0);

	const ArmaModel only = arma_select_order(y, 0, 0);
	CHECK(only.p() == 0);
	CHECK(only.q() == 0);

	ArmaSelectionLog log;
	const ArmaModel best = arma_select_order(y, 2, 2, &log);
	CHECK(log.attempted == 9);
	for (int p = 0; p <= 2; ++p)
		for (int q = 0; q <= 2; ++q) {
			const ArmaModel candidate = arma_fit(y, p, q);
			CHECK(best.aic <= candidate.aic + 1e-9);
		}
}

TEST_CASE("select_order: recovers ar(1) on a seeded draw") {
	const std::vector<double> y = ar1_series(1234, 500, 0.8, 0.0, 1.0);
	const ArmaModel best = arma_select_order(y, 2, 2);
	CHECK(best.p() == 1);
	CHECK(best.q() == 0);
}

TEST_CASE("forecast: mean model is flat at the intercept") {
	ArmaModel model;
	model.intercept = 3.25;
	const std::vector<double> hist{1.0, 2.0, 3.0};
	const std::vector<double> f = model.forecast(hist, 5);
	REQUIRE(f.size() == 5);
	for (const double v : f) CHECK(v == 3.25);
}

TEST_CASE("forecast: pure ar(1) without intercept is phi^h times the last value") {
	ArmaModel model;
	model.ar = {0.8};
	const std::vector<double> hist{1.0, -0.5, 2.0};
	const std::vector<double> f = model.forecast(hist, 6);
	double expect = 2.0;
	for (int k = 0; k < 6; ++k) {
		expect *= 0.8;
		CHECK(f[static_cast<std::size_t>(k)] == doctest::Approx(expect).epsilon(1e-15));
	}
}

TEST_CASE("forecast: converges monotonically toward the unconditional mean") {
	ArmaModel model;
	model.ar = {0.7};
	model.intercept = 3.0;
	const double target = 3.0 / (1.0 - 0.7);
	const std::vector<double> hist{20.0, 18.0, 22.0};
	const std::vector<double> f = model.forecast(hist, 40);
	double last_gap = std::abs(f[0] - target);
	for (std::size_t k = 1; k < f.size(); ++k) {
		const double gap = std::abs(f[k] - target);
		CHECK(gap <= last_gap + 1e-12);
		last_gap = gap;
	}
	CHECK(last_gap < 1e-4);
}

TEST_CASE("forecast equals the one-step recursion applied recursively") {
	const std::vector<double> y = ar1_series(5, 80, 0.5, 1.0, 1.0);
	const ArmaModel model = arma_fit(y, 1, 1);
	const std::vector<double> path = model.forecast(y, 6);

	// manual recursion with zero future innovations
	const std::vector<double> resid = css_residuals(y, model.intercept, model.ar, model.ma);
	std::vector<double> extended(y.begin(), y.end());
	std::vector<double> eps(resid.begin(), resid.end());
	for (int k = 0; k < 6; ++k) {
		const std::size_t t = extended.size();
		double f = model.intercept + model.ar[0] * extended[t - 1] + model.ma[0] * eps[t - 1];
		CHECK(f == path[static_cast<std::size_t>(k)]);
		extended.push_back(f);
		eps.push_back(0.0);
	}
}

TEST_CASE("explosive data: roots reflected back and flagged") {
	std::vector<double> y(40);
	double v = 0.01;
	for (double& x : y) {
		x = v;
		v *= 1.5;
	}
	const ArmaModel model = arma_fit(y, 1, 0);
	CHECK(model.root_reflected);
	CHECK(std::abs(model.ar[0]) <= 1.0 - 1e-7);
}

TEST_CASE("aic bookkeeping") {
	const std::vector<double> y = ar1_series(3, 200, 0.5, 0.0, 1.0);
	const ArmaModel model = arma_fit(y, 1, 1);
	CHECK(model.aic == doctest::Approx(2.0 * (1 + 1 + 2) - 2.0 * model.log_likelihood));
	CHECK(model.sigma2 > 0.0);
}
