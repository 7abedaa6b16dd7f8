#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sfb/dataset.hpp"
#include "sfb/kernels.hpp"
#include "sfb/scaling.hpp"

namespace sfb {

struct SvrHyper {
	double cost = 1.0;    // C > 0
	double epsilon = 0.1; // tube radius, >= 0
	KernelSpec kernel;
};

/// Trained epsilon-SVR. dual_coeffs holds beta_i = alpha_i - alpha_i^* for
/// every training point, with non-support entries snapped to exact zero;
/// support_inputs keeps standardized copies of the points with beta != 0.
struct SvrModel {
	std::vector<double> dual_coeffs;
	double bias = 0.0;
	std::vector<std::vector<double>> support_inputs;
	std::vector<std::size_t> support_indices;
	SvrHyper hyper;
	std::size_t n_sv = 0;
	AffineScaler input_scaler;

	double predict(std::span<const double> x) const;
};

/// Solver snapshot handed to the debug hook once per pair update.
struct SvrDualState {
	std::span<const double> alpha;
	std::span<const double> alpha_star;
	std::span<const double> gradient; // minimization-form gradient over (alpha, alpha_star)
	double dual_objective = 0.0;      // maximization form, non-decreasing across updates
};

struct SvrTrainOptions {
	std::size_t max_pair_updates = 100000;
	std::function<void(const SvrDualState&)> on_iteration; // debug hook, may be empty
};

/// Train by SMO-style coordinate ascent on the dual with maximal-violating
/// pair selection. Inputs are standardized internally; targets are not.
/// Converged when the KKT violation is <= tol AND the duality gap is
/// <= max(1e-6, 1e-6*|dual|); otherwise throws ConvergenceError carrying
/// the final gap.
SvrModel svr_train(const SupervisedSet& data, const SvrHyper& hyper, double tol = 1e-3,
                   const SvrTrainOptions& options = {});

struct SvrSearchResult {
	SvrHyper hyper;
	SvrModel model;
	double validation_mape = 0.0;
};

/// Exhaustive enumeration of the grid; candidates train concurrently and
/// the winner is the lowest validation MAPE with ties broken by smaller C,
/// then smaller epsilon, then grid order.
SvrSearchResult svr_grid_search(const SupervisedSet& train, const SupervisedSet& valid,
                                const std::vector<SvrHyper>& grid);

struct SvrGridDefaults {
	std::vector<double> costs{0.1, 1.0, 10.0, 100.0, 1000.0};
	std::vector<double> epsilon_rel{0.001, 0.01, 0.1};  // x std of training targets
	std::vector<double> bandwidth_rel{0.1, 1.0, 10.0};  // x median pairwise squared distance
	std::vector<double> offsets{0.0, 1.0};              // a2 for linear/polynomial
	std::vector<int> degrees{2, 3};
};

/// Data-driven grid for one kernel family (bandwidths and epsilons scale
/// with the training block).
std::vector<SvrHyper> build_svr_grid(KernelKind kind, const SupervisedSet& train,
                                     const SvrGridDefaults& defaults = {});

/// Median pairwise squared Euclidean distance of standardized inputs;
/// falls back to 1 when all points coincide.
double median_pairwise_squared_distance(const std::vector<std::vector<double>>& xs);

} // namespace sfb
