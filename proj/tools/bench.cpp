// Timing comparison between the serial reference paths and the
// OpenMP-parallel kernels: Gram construction, SVR grid search, and a
// batch of experiment cells.

#include <cstdio>
#include <vector>

#include <omp.h>

#include "sfb/harness.hpp"
#include "sfb/kernels.hpp"
#include "sfb/rng.hpp"
#include "sfb/svr.hpp"
#include "sfb/synth.hpp"

namespace {

double now() { return omp_get_wtime(); }

void report(const char* name, double serial, double parallel) {
	std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name, serial,
	            parallel, serial / parallel);
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, sfb::Rng& rng) {
	std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
	for (auto& x : xs)
		for (double& v : x) v = rng.normal();
	return xs;
}

void bench_gram(int max_threads) {
	sfb::Rng rng(7);
	const auto xs = random_points(1200, 8, rng);
	sfb::KernelSpec spec;
	spec.kind = sfb::KernelKind::GaussianRbf;
	spec.bandwidth_sq = 4.0;

	double t = now();
	const sfb::Matrix ref = sfb::gram_reference(spec, xs);
	const double serial = now() - t;

	omp_set_num_threads(max_threads);
	t = now();
	const sfb::Matrix par = sfb::gram(spec, xs);
	const double parallel = now() - t;

	// identical by construction
	for (std::size_t i = 0; i < ref.data.size(); ++i)
		if (ref.data[i] != par.data[i]) {
			std::printf("gram mismatch at %zu\n", i);
			return;
		}
	report("gram 1200x1200", serial, parallel);
}

sfb::SupervisedSet lagged_set(const sfb::TimeSeries& ts, std::size_t from, std::size_t to) {
	const std::span<const double> slice(ts.values.data() + from, to - from);
	return sfb::embed(slice, 1);
}

void bench_grid_search(int max_threads) {
	sfb::SynthSpec spec;
	spec.n = 180;
	spec.noise = {sfb::SynthNoise::Kind::White, 40.0, 0.0};
	for (std::size_t m = 0; m < 12; ++m) spec.seasonal[m] = 150.0 * ((m % 3) ? 1.0 : -1.0);
	const sfb::TimeSeries ts = sfb::synth_generate(spec).series;
	const sfb::SupervisedSet train = lagged_set(ts, 0, 120);
	const sfb::SupervisedSet valid = lagged_set(ts, 119, 180);
	const auto grid = sfb::build_svr_grid(sfb::KernelKind::GaussianRbf, train);

	omp_set_num_threads(1);
	double t = now();
	const auto serial_result = sfb::svr_grid_search(train, valid, grid);
	const double serial = now() - t;

	omp_set_num_threads(max_threads);
	t = now();
	const auto parallel_result = sfb::svr_grid_search(train, valid, grid);
	const double parallel = now() - t;

	if (serial_result.validation_mape != parallel_result.validation_mape)
		std::printf("grid search mismatch\n");
	report("svr grid search (45 cand)", serial, parallel);
}

void bench_cells(int max_threads) {
	sfb::SynthBatchConfig batch;
	batch.regions = 6;
	batch.months = 120;
	const auto dataset = sfb::synth_batch(batch);

	sfb::ExperimentConfig config;
	config.horizons = {1, 3};
	config.models = {sfb::ModelKind::Arma, sfb::ModelKind::SvrGaussian, sfb::ModelKind::RbfNetwork};
	config.arma = {2, 1};
	config.fast_mode = true;

	omp_set_num_threads(1);
	double t = now();
	const auto serial_result = sfb::run_experiment(dataset, config);
	const double serial = now() - t;

	omp_set_num_threads(max_threads);
	t = now();
	const auto parallel_result = sfb::run_experiment(dataset, config);
	const double parallel = now() - t;

	if (serial_result.records.size() != parallel_result.records.size())
		std::printf("cell batch mismatch\n");
	report("experiment cells (36)", serial, parallel);
}

} // namespace

int main() {
	const int max_threads = omp_get_max_threads();
	std::printf("threads: %d\n", max_threads);
	bench_gram(max_threads);
	bench_grid_search(max_threads);
	bench_cells(max_threads);
	return 0;
}
