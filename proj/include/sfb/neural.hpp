#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sfb/dataset.hpp"
#include "sfb/scaling.hpp"

namespace sfb {

struct TrainPolicy {
	int restarts = 5;
	int max_epochs = 5000;
	int patience = 20; // validation checks without improvement
	double learning_rate = 0.01;
	std::uint64_t seed = 0;
	int check_interval = 10; // epochs between validation checks
};

/// Gaussian-bump network: y = bias + sum_j weights[j] *
/// exp(-||x' - centroids[j]||^2 / (2 spreads[j]^2)) on standardized x'.
struct RbfNetModel {
	std::vector<std::vector<double>> centroids;
	std::vector<double> spreads;
	std::vector<double> weights;
	double bias = 0.0;
	AffineScaler input_scaler;

	std::size_t hidden_units() const { return centroids.size(); }
	double predict(std::span<const double> x) const;
};

/// One sigmoid hidden layer, linear output. The output layer is stored in
/// raw target scale.
struct MlpModel {
	std::size_t input_dim = 0;
	std::size_t hidden_units = 0;
	std::vector<double> input_weights; // p x q, w[i*q + j]
	std::vector<double> hidden_bias;   // q
	std::vector<double> output_weights;
	double output_bias = 0.0;
	AffineScaler input_scaler;

	double predict(std::span<const double> x) const;
};

/// Seeded k-means centroids (best within-cluster SSE over policy.restarts
/// restarts), nearest-centroid spreads, then the output layer by
/// ridge-regularized least squares -- deterministic given policy.seed.
RbfNetModel train_rbf(const SupervisedSet& train, const SupervisedSet& valid, int q,
                      const TrainPolicy& policy);

struct MlpCheckpoint {
	int restart = 0;
	int epoch = 0;
	double validation_mape = 0.0;
};
struct MlpTrainTrace {
	std::vector<MlpCheckpoint> checkpoints;
};

/// Full-batch gradient descent on MSE (standardized inputs, z-scored
/// targets) with halving on loss increase and validation-based early
/// stopping; best model across restarts wins.
MlpModel train_mlp(const SupervisedSet& train, const SupervisedSet& valid, int q,
                   const TrainPolicy& policy, MlpTrainTrace* trace = nullptr);

struct MlpRestartResult {
	MlpModel model;
	double validation_mape = 0.0;
	bool ok = false;
};

/// One restart with an explicit seed. train_mlp(restarts = R) is exactly
/// the best of these over derive_seed(policy.seed, r), r = 0..R-1.
MlpRestartResult train_mlp_single(const SupervisedSet& train, const SupervisedSet& valid, int q,
                                  const TrainPolicy& policy, std::uint64_t restart_seed,
                                  MlpTrainTrace* trace = nullptr, int restart_index = 0);

// Flat-parameter loss/gradient, exposed for the finite-difference check.
// Layout: input weights (p*q, input-major), hidden biases (q), output
// weights (q), output bias.
std::size_t mlp_param_count(std::size_t p, std::size_t q);
double mlp_loss(std::span<const double> params, std::size_t p, std::size_t q,
                const std::vector<std::vector<double>>& inputs, std::span<const double> targets);
void mlp_gradient(std::span<const double> params, std::size_t p, std::size_t q,
                  const std::vector<std::vector<double>>& inputs, std::span<const double> targets,
                  std::span<double> grad);

struct RbfSelection {
	int q = 0;
	RbfNetModel model;
	double validation_mape = 0.0;
};
struct MlpSelection {
	int q = 0;
	MlpModel model;
	double validation_mape = 0.0;
};

/// Lowest validation MAPE over the candidate hidden-layer sizes; ties go
/// to the smallest q.
RbfSelection select_q_rbf(const SupervisedSet& train, const SupervisedSet& valid,
                          const std::vector<int>& candidates, const TrainPolicy& policy);
MlpSelection select_q_mlp(const SupervisedSet& train, const SupervisedSet& valid,
                          const std::vector<int>& candidates, const TrainPolicy& policy);

} // namespace sfb
