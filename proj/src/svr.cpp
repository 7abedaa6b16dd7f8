#include "sfb/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "sfb/csv.hpp"
#include "sfb/errors.hpp"
#include "sfb/metrics.hpp"

namespace sfb {

namespace {

constexpr double kIndefiniteFloor = 1e-12;

/// The dual of the epsilon-tube problem, written over 2n box variables
/// a = (alpha, alpha_star) with implicit labels y_s = +1 for s < n and -1
/// otherwise:  minimize 1/2 a'Qa + p'a  s.t.  sum_s y_s a_s = 0,
/// 0 <= a_s <= C,  where Q(s,t) = y_s y_t K(s mod n, t mod n).
class SmoSolver {
public:
	SmoSolver(const Matrix& k, std::span<const double> targets, double cost, double epsilon)
	    : k_(k), n_(targets.size()), cost_(cost) {
		a_.assign(2 * n_, 0.0);
		p_.resize(2 * n_);
		for (std::size_t s = 0; s < n_; ++s) {
			p_[s] = epsilon - targets[s];
			p_[s + n_] = epsilon + targets[s];
		}
		g_ = p_; // gradient at a = 0
		epsilon_ = epsilon;
	}

	struct Pair {
		std::ptrdiff_t i = -1;
		std::ptrdiff_t j = -1;
		double violation = -std::numeric_limits<double>::infinity();
	};

	double label(std::size_t s) const { return s < n_ ? 1.0 : -1.0; }
	double q_entry(std::size_t s, std::size_t t) const {
		return label(s) * label(t) * k_(s % n_, t % n_);
	}

	Pair select_pair() const {
		Pair best;
		double up = -std::numeric_limits<double>::infinity();
		double low = std::numeric_limits<double>::infinity();
		for (std::size_t s = 0; s < 2 * n_; ++s) {
			const double y = label(s);
			const double val = -y * g_[s];
			const bool in_up = (y > 0 && a_[s] < cost_) || (y < 0 && a_[s] > 0.0);
			const bool in_low = (y > 0 && a_[s] > 0.0) || (y < 0 && a_[s] < cost_);
			if (in_up && val > up) {
				up = val;
				best.i = static_cast<std::ptrdiff_t>(s);
			}
			if (in_low && val < low) {
				low = val;
				best.j = static_cast<std::ptrdiff_t>(s);
			}
		}
		if (best.i >= 0 && best.j >= 0) best.violation = up - low;
		return best;
	}

	void update_pair(std::size_t i, std::size_t j) {
		const double yi = label(i);
		const double yj = label(j);
		const double old_ai = a_[i];
		const double old_aj = a_[j];
		double quad = q_entry(i, i) + q_entry(j, j) - 2.0 * yi * yj * q_entry(i, j);
		if (quad <= 0.0) quad = kIndefiniteFloor;

		if (yi != yj) {
			const double delta = (-g_[i] - g_[j]) / quad;
			const double diff = a_[i] - a_[j];
			a_[i] += delta;
			a_[j] += delta;
			if (diff > 0.0) {
				if (a_[j] < 0.0) {
					a_[j] = 0.0;
					a_[i] = diff;
				}
			} else {
				if (a_[i] < 0.0) {
					a_[i] = 0.0;
					a_[j] = -diff;
				}
			}
			if (diff > 0.0) {
				if (a_[i] > cost_) {
					a_[i] = cost_;
					a_[j] = cost_ - diff;
				}
			} else {
				if (a_[j] > cost_) {
					a_[j] = cost_;
					a_[i] = cost_ + diff;
				}
			}
		} else {
			const double delta = (g_[i] - g_[j]) / quad;
			const double sum = a_[i] + a_[j];
			a_[i] -= delta;
			a_[j] += delta;
			if (sum > cost_) {
				if (a_[i] > cost_) {
					a_[i] = cost_;
					a_[j] = sum - cost_;
				}
			} else {
				if (a_[j] < 0.0) {
					a_[j] = 0.0;
					a_[i] = sum;
				}
			}
			if (sum > cost_) {
				if (a_[j] > cost_) {
					a_[j] = cost_;
					a_[i] = sum - cost_;
				}
			} else {
				if (a_[i] < 0.0) {
					a_[i] = 0.0;
					a_[j] = sum;
				}
			}
		}

		const double di = a_[i] - old_ai;
		const double dj = a_[j] - old_aj;
		// rank-two gradient refresh; row pointers avoid the modulo in the loop
		const double* row_i = &k_.data[(i % n_) * n_];
		const double* row_j = &k_.data[(j % n_) * n_];
		for (std::size_t s = 0; s < 2 * n_; ++s) {
			const double y = label(s);
			g_[s] += y * (label(i) * row_i[s % n_] * di + label(j) * row_j[s % n_] * dj);
		}
	}

	// minimization-form objective from the cached gradient
	double objective_min() const {
		double f = 0.0;
		for (std::size_t s = 0; s < 2 * n_; ++s) f += a_[s] * (g_[s] + p_[s]);
		return 0.5 * f;
	}

	double dual_objective() const { return -objective_min(); }

	std::vector<double> betas() const {
		std::vector<double> b(n_);
		for (std::size_t t = 0; t < n_; ++t) b[t] = a_[t] - a_[t + n_];
		return b;
	}

	// f(x_s) - bias, recovered from the gradient cache
	double expansion_at(std::size_t s) const { return g_[s] - p_[s]; }

	double bias() const {
		double ub = std::numeric_limits<double>::infinity();
		double lb = -std::numeric_limits<double>::infinity();
		double sum_free = 0.0;
		std::size_t n_free = 0;
		for (std::size_t s = 0; s < 2 * n_; ++s) {
			const double y = label(s);
			const double yg = y * g_[s];
			if (a_[s] >= cost_) {
				if (y < 0)
					ub = std::min(ub, yg);
				else
					lb = std::max(lb, yg);
			} else if (a_[s] <= 0.0) {
				if (y > 0)
					ub = std::min(ub, yg);
				else
					lb = std::max(lb, yg);
			} else {
				++n_free;
				sum_free += yg;
			}
		}
		const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
		return -rho;
	}

	// duality gap = primal(beta, bias) - dual(a); slacks from residuals
	double gap(std::span<const double> targets) const {
		const double b = bias();
		double w_norm_sq = 0.0;
		double slack_sum = 0.0;
		for (std::size_t t = 0; t < n_; ++t) {
			const double beta = a_[t] - a_[t + n_];
			const double fx = expansion_at(t);
			w_norm_sq += beta * fx;
			const double resid = std::abs(fx + b - targets[t]);
			slack_sum += std::max(0.0, resid - epsilon_);
		}
		const double primal = 0.5 * w_norm_sq + cost_ * slack_sum;
		return primal - dual_objective();
	}

	double gap_target() const { return std::max(1e-6, 1e-6 * std::abs(dual_objective())); }

	// drop the common mass of (alpha_i, alpha_i*); beta and the gradient are
	// unchanged and the epsilon term of the dual can only improve
	void complementarity_cleanup() {
		for (std::size_t t = 0; t < n_; ++t) {
			const double m = std::min(a_[t], a_[t + n_]);
			if (m > 0.0) {
				a_[t] -= m;
				a_[t + n_] -= m;
			}
		}
	}

	SvrDualState state() const {
		return {std::span<const double>(a_.data(), n_), std::span<const double>(a_.data() + n_, n_),
		        std::span<const double>(g_.data(), 2 * n_), dual_objective()};
	}

private:
	const Matrix& k_;
	std::size_t n_;
	double cost_;
	double epsilon_;
	std::vector<double> a_;
	std::vector<double> p_;
	std::vector<double> g_;
};

} // namespace

double SvrModel::predict(std::span<const double> x) const {
	if (!input_scaler.shift.empty() && x.size() != input_scaler.shift.size())
		throw DimError("svr predict: input has dimension " + std::to_string(x.size()) +
		               ", model expects " + std::to_string(input_scaler.shift.size()));
	const std::vector<double> xs = input_scaler.apply(x);
	double y = bias;
	for (std::size_t k = 0; k < support_inputs.size(); ++k)
		y += dual_coeffs[support_indices[k]] *
		     detail::kernel_eval_unchecked(hyper.kernel, support_inputs[k], xs);
	return y;
}

SvrModel svr_train(const SupervisedSet& data, const SvrHyper& hyper, double tol,
                   const SvrTrainOptions& options) {
	if (data.size() < 2) throw InsufficientDataError("svr: need at least 2 training pairs");
	if (!(tol > 0.0)) throw Error("svr: tol must be > 0");
	if (!(hyper.cost > 0.0)) throw Error("svr: C must be > 0");
	if (hyper.epsilon < 0.0) throw Error("svr: epsilon must be >= 0");
	detail::validate_kernel_spec(hyper.kernel);

	const AffineScaler scaler = AffineScaler::fit(data.inputs);
	const std::vector<std::vector<double>> xs = scaler.apply_all(data.inputs);
	const Matrix k = gram(hyper.kernel, xs);

	SmoSolver solver(k, data.targets, hyper.cost, hyper.epsilon);
	bool converged = false;
	double last_gap = std::numeric_limits<double>::infinity();
	for (std::size_t iter = 0;; ++iter) {
		const auto pair = solver.select_pair();
		const bool at_floor = pair.violation <= 1e-14;
		if (pair.violation <= tol || iter >= options.max_pair_updates || at_floor) {
			last_gap = solver.gap(data.targets);
			if (last_gap <= solver.gap_target()) {
				converged = true;
				break;
			}
			if (iter >= options.max_pair_updates || at_floor) break;
		}
		solver.update_pair(static_cast<std::size_t>(pair.i), static_cast<std::size_t>(pair.j));
		if (options.on_iteration) options.on_iteration(solver.state());
	}
	solver.complementarity_cleanup();
	if (!converged) {
		last_gap = solver.gap(data.targets);
		if (last_gap > solver.gap_target())
			throw ConvergenceError("svr: solver stopped with duality gap " + format_double(last_gap),
			                       last_gap);
	}

	SvrModel model;
	model.hyper = hyper;
	model.input_scaler = scaler;
	model.bias = solver.bias();
	model.dual_coeffs = solver.betas();
	const double sv_threshold = 1e-8 * hyper.cost;
	for (std::size_t t = 0; t < model.dual_coeffs.size(); ++t) {
		if (std::abs(model.dual_coeffs[t]) <= sv_threshold) {
			model.dual_coeffs[t] = 0.0;
		} else {
			model.support_indices.push_back(t);
			model.support_inputs.push_back(xs[t]);
		}
	}
	model.n_sv = model.support_indices.size();
	return model;
}

SvrSearchResult svr_grid_search(const SupervisedSet& train, const SupervisedSet& valid,
                                const std::vector<SvrHyper>& grid) {
	if (grid.empty()) throw SearchError("svr grid search: empty grid");
	if (train.size() == 0 || valid.size() == 0)
		throw InsufficientDataError("svr grid search: empty train or validation set");

	struct Candidate {
		bool ok = false;
		SvrModel model;
		double mape = 0.0;
	};
	std::vector<Candidate> results(grid.size());

#pragma omp parallel for schedule(dynamic)
	for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(grid.size()); ++idx) {
		Candidate& c = results[idx];
		try {
			c.model = svr_train(train, grid[idx]);
			std::vector<double> predicted(valid.size());
			for (std::size_t v = 0; v < valid.size(); ++v)
				predicted[v] = c.model.predict(valid.inputs[v]);
			c.mape = mape(valid.targets, predicted);
			c.ok = true;
		} catch (const Error&) {
			c.ok = false; // failed candidates are simply skipped
		}
	}

	std::ptrdiff_t best = -1;
	for (std::size_t idx = 0; idx < grid.size(); ++idx) {
		if (!results[idx].ok) continue;
		if (best < 0) {
			best = static_cast<std::ptrdiff_t>(idx);
			continue;
		}
		const Candidate& c = results[idx];
		const Candidate& b = results[best];
		const auto key = [&](const Candidate& cand, const SvrHyper& h) {
			return std::make_tuple(cand.mape, h.cost, h.epsilon);
		};
		if (key(c, grid[idx]) < key(b, grid[best])) best = static_cast<std::ptrdiff_t>(idx);
	}
	if (best < 0) throw SearchError("svr grid search: every candidate failed to converge");
	return {grid[best], std::move(results[best].model), results[best].mape};
}

double median_pairwise_squared_distance(const std::vector<std::vector<double>>& xs) {
	std::vector<double> d2;
	d2.reserve(xs.size() * (xs.size() - 1) / 2);
	for (std::size_t i = 0; i < xs.size(); ++i)
		for (std::size_t j = i + 1; j < xs.size(); ++j)
			d2.push_back(squared_distance(xs[i], xs[j]));
	if (d2.empty()) return 1.0;
	std::sort(d2.begin(), d2.end());
	const double median = d2.size() % 2 == 1 ? d2[d2.size() / 2]
	                                         : 0.5 * (d2[d2.size() / 2 - 1] + d2[d2.size() / 2]);
	return median > 0.0 ? median : 1.0;
}

std::vector<SvrHyper> build_svr_grid(KernelKind kind, const SupervisedSet& train,
                                     const SvrGridDefaults& defaults) {
	if (train.size() == 0) throw InsufficientDataError("svr grid: empty training set");

	double target_sd = 0.0;
	{
		double mean = 0.0;
		for (const double t : train.targets) mean += t;
		mean /= static_cast<double>(train.size());
		for (const double t : train.targets) target_sd += (t - mean) * (t - mean);
		target_sd = std::sqrt(target_sd / static_cast<double>(train.size()));
	}
	if (target_sd <= 0.0) target_sd = 1.0;

	std::vector<SvrHyper> grid;
	const auto push = [&](const KernelSpec& spec) {
		for (const double c : defaults.costs)
			for (const double er : defaults.epsilon_rel)
				grid.push_back({c, er * target_sd, spec});
	};

	switch (kind) {
	case KernelKind::Linear:
		for (const double a2 : defaults.offsets) push({KernelKind::Linear, 1.0, a2, 2, 1.0});
		break;
	case KernelKind::Polynomial:
		for (const int h : defaults.degrees)
			for (const double a2 : defaults.offsets)
				push({KernelKind::Polynomial, 1.0, a2, h, 1.0});
		break;
	case KernelKind::GaussianRbf: {
		const AffineScaler scaler = AffineScaler::fit(train.inputs);
		const double med = median_pairwise_squared_distance(scaler.apply_all(train.inputs));
		for (const double rel : defaults.bandwidth_rel)
			push({KernelKind::GaussianRbf, 1.0, 0.0, 2, rel * med});
		break;
	}
	}
	return grid;
}

} // namespace sfb
