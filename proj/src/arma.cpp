#include "sfb/arma.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "sfb/errors.hpp"
#include "sfb/linalg.hpp"

namespace sfb {

namespace {

constexpr double kRootMargin = 1e-6;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double mean_of(std::span<const double> v) {
	return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double css_sum_of_squares(std::span<const double> y, double mean, double c,
                          std::span<const double> ar, std::span<const double> ma,
                          std::vector<double>& resid) {
	const std::size_t n = y.size();
	resid.assign(n, 0.0);
	double ssq = 0.0;
	for (std::size_t t = 0; t < n; ++t) {
		double e = y[t] - c;
		for (std::size_t i = 0; i < ar.size(); ++i) {
			const std::ptrdiff_t u = static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(i) - 1;
			e -= ar[i] * (u >= 0 ? y[static_cast<std::size_t>(u)] : mean);
		}
		for (std::size_t j = 0; j < ma.size(); ++j) {
			const std::ptrdiff_t u = static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(j) - 1;
			if (u >= 0) e -= ma[j] * resid[static_cast<std::size_t>(u)];
		}
		resid[t] = e;
		ssq += e * e;
		if (!std::isfinite(ssq)) return std::numeric_limits<double>::infinity();
	}
	return ssq;
}

// --- Nelder-Mead, deterministic, derivative free ------------------------

struct SimplexPoint {
	std::vector<double> x;
	double f = 0.0;
};

std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& f,
                                std::vector<double> x0, const std::vector<double>& steps,
                                int max_evals) {
	const std::size_t dim = x0.size();
	std::vector<SimplexPoint> s(dim + 1);
	s[0] = {x0, f(x0)};
	for (std::size_t i = 0; i < dim; ++i) {
		std::vector<double> x = x0;
		x[i] += steps[i];
		s[i + 1] = {x, f(x)};
	}
	int evals = static_cast<int>(dim) + 1;

	while (evals < max_evals) {
		std::sort(s.begin(), s.end(),
		          [](const SimplexPoint& a, const SimplexPoint& b) { return a.f < b.f; });
		const double spread = std::abs(s.back().f - s.front().f);
		if (spread <= 1e-12 * (1.0 + std::abs(s.front().f))) break;

		std::vector<double> centroid(dim, 0.0);
		for (std::size_t i = 0; i < dim; ++i) {
			for (std::size_t j = 0; j < dim; ++j) centroid[j] += s[i].x[j];
		}
		for (double& v : centroid) v /= static_cast<double>(dim);

		const auto blend = [&](double coef) {
			std::vector<double> x(dim);
			for (std::size_t j = 0; j < dim; ++j)
				x[j] = centroid[j] + coef * (centroid[j] - s.back().x[j]);
			return x;
		};

		std::vector<double> xr = blend(1.0);
		const double fr = f(xr);
		++evals;
		if (fr < s.front().f) {
			std::vector<double> xe = blend(2.0);
			const double fe = f(xe);
			++evals;
			s.back() = fe < fr ? SimplexPoint{xe, fe} : SimplexPoint{xr, fr};
			continue;
		}
		if (fr < s[dim - 1].f) {
			s.back() = {xr, fr};
			continue;
		}
		const bool outside = fr < s.back().f;
		std::vector<double> xc = blend(outside ? 0.5 : -0.5);
		const double fc = f(xc);
		++evals;
		if (fc < (outside ? fr : s.back().f)) {
			s.back() = {xc, fc};
			continue;
		}
		// shrink toward the best vertex
		for (std::size_t i = 1; i <= dim; ++i) {
			for (std::size_t j = 0; j < dim; ++j)
				s[i].x[j] = s[0].x[j] + 0.5 * (s[i].x[j] - s[0].x[j]);
			s[i].f = f(s[i].x);
			++evals;
		}
	}
	std::sort(s.begin(), s.end(),
	          [](const SimplexPoint& a, const SimplexPoint& b) { return a.f < b.f; });
	return s.front().x;
}

// --- stationarity / invertibility via companion eigenvalues --------------

// inverse characteristic roots of x^m - a_1 x^{m-1} - ... - a_m
std::vector<std::complex<double>> inverse_roots(std::span<const double> a) {
	const std::size_t m = a.size();
	if (m == 0) return {};
	Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
	                                                  static_cast<Eigen::Index>(m));
	for (std::size_t j = 0; j < m; ++j) companion(0, static_cast<Eigen::Index>(j)) = a[j];
	for (std::size_t i = 1; i < m; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
	Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
	std::vector<std::complex<double>> roots(m);
	for (std::size_t i = 0; i < m; ++i) roots[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
	return roots;
}

// coefficients a_i of x^m - a_1 x^{m-1} - ... - a_m from its roots
std::vector<double> coeffs_from_inverse_roots(const std::vector<std::complex<double>>& roots) {
	std::vector<std::complex<double>> poly{1.0}; // monic expansion
	for (const auto& r : roots) {
		std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
		for (std::size_t i = 0; i < poly.size(); ++i) {
			next[i] += poly[i];
			next[i + 1] -= poly[i] * r;
		}
		poly = std::move(next);
	}
	std::vector<double> a(roots.size());
	for (std::size_t i = 0; i < roots.size(); ++i) a[i] = -poly[i + 1].real();
	return a;
}

// reflect explosive inverse roots into the unit disc, then keep everything
// at least kRootMargin away from the circle
bool stabilize(std::vector<double>& a) {
	if (a.empty()) return false;
	auto roots = inverse_roots(a);
	bool touched = false;
	for (auto& r : roots) {
		double mod = std::abs(r);
		if (mod <= 1.0 - kRootMargin) continue;
		touched = true;
		if (mod > 1.0) {
			r = 1.0 / std::conj(r);
			mod = std::abs(r);
		}
		if (mod > 1.0 - kRootMargin) r *= (1.0 - kRootMargin) / mod;
	}
	if (touched) a = coeffs_from_inverse_roots(roots);
	return touched;
}

std::vector<double> ols(const std::vector<std::vector<double>>& rows, std::span<const double> y) {
	Matrix a(rows.size(), rows.front().size());
	for (std::size_t i = 0; i < rows.size(); ++i)
		for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
	return solve_least_squares(std::move(a), std::vector<double>(y.begin(), y.end()));
}

// Hannan-Rissanen two-stage start values: long-AR residuals, then one OLS
// regression of y on its own lags and the lagged residuals
std::vector<double> hannan_rissanen(std::span<const double> y, int p, int q, double mean) {
	const std::size_t n = y.size();
	std::vector<double> start(1 + p + q, 0.0);
	start[0] = mean;
	try {
		const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(p + q + 5), n / 5);
		std::vector<double> eps(n, 0.0);
		if (q > 0 && m >= 1) {
			std::vector<std::vector<double>> rows;
			std::vector<double> rhs;
			for (std::size_t t = m; t < n; ++t) {
				std::vector<double> row{1.0};
				for (std::size_t i = 1; i <= m; ++i) row.push_back(y[t - i]);
				rows.push_back(std::move(row));
				rhs.push_back(y[t]);
			}
			const std::vector<double> coef = ols(rows, rhs);
			for (std::size_t t = m; t < n; ++t) {
				double fit = coef[0];
				for (std::size_t i = 1; i <= m; ++i) fit += coef[i] * y[t - i];
				eps[t] = y[t] - fit;
			}
		}
		const std::size_t t0 = std::max<std::size_t>(static_cast<std::size_t>(p),
		                                             q > 0 ? m + static_cast<std::size_t>(q) : 0);
		std::vector<std::vector<double>> rows;
		std::vector<double> rhs;
		for (std::size_t t = t0; t < n; ++t) {
			std::vector<double> row{1.0};
			for (int i = 1; i <= p; ++i) row.push_back(y[t - static_cast<std::size_t>(i)]);
			for (int j = 1; j <= q; ++j) row.push_back(eps[t - static_cast<std::size_t>(j)]);
			rows.push_back(std::move(row));
			rhs.push_back(y[t]);
		}
		if (rows.size() > static_cast<std::size_t>(1 + p + q)) {
			const std::vector<double> coef = ols(rows, rhs);
			for (std::size_t i = 0; i < coef.size(); ++i) start[i] = coef[i];
		}
	} catch (const Error&) {
		// keep the flat start; the simplex still searches from here
	}
	return start;
}

} // namespace

std::vector<double> css_residuals(std::span<const double> series, double intercept,
                                  std::span<const double> ar, std::span<const double> ma) {
	std::vector<double> resid;
	css_sum_of_squares(series, mean_of(series), intercept, ar, ma, resid);
	return resid;
}

ArmaModel arma_fit(std::span<const double> series, int p, int q) {
	if (p < 0 || q < 0) throw Error("arma: negative order");
	const std::size_t n = series.size();
	if (n < 10 * static_cast<std::size_t>(p + q + 1))
		throw InsufficientDataError("arma(" + std::to_string(p) + "," + std::to_string(q) +
		                            "): need n >= " + std::to_string(10 * (p + q + 1)) + ", got " +
		                            std::to_string(n));

	const double mean = mean_of(series);
	ArmaModel model;
	model.ar.resize(static_cast<std::size_t>(p));
	model.ma.resize(static_cast<std::size_t>(q));

	std::vector<double> resid;
	if (p == 0 && q == 0) {
		model.intercept = mean; // closed form: CSS minimizer is the sample mean
	} else {
		const std::vector<double> start = hannan_rissanen(series, p, q, mean);
		const auto objective = [&](std::span<const double> params) {
			std::vector<double> r;
			return css_sum_of_squares(series, mean, params[0],
			                          params.subspan(1, static_cast<std::size_t>(p)),
			                          params.subspan(1 + static_cast<std::size_t>(p)), r);
		};

		double sd = 0.0;
		for (const double v : series) sd += (v - mean) * (v - mean);
		sd = std::sqrt(sd / static_cast<double>(n));
		std::vector<double> steps(start.size(), 0.1);
		steps[0] = std::max(0.1 * sd, 1e-3);

		std::vector<double> best = nelder_mead(objective, start, steps, 400 * static_cast<int>(start.size()));
		best = nelder_mead(objective, best, steps, 400 * static_cast<int>(start.size())); // polish

		model.intercept = best[0];
		for (int i = 0; i < p; ++i) model.ar[static_cast<std::size_t>(i)] = best[1 + static_cast<std::size_t>(i)];
		for (int j = 0; j < q; ++j)
			model.ma[static_cast<std::size_t>(j)] = best[1 + static_cast<std::size_t>(p + j)];

		const bool ar_fixed = stabilize(model.ar);
		std::vector<double> neg_ma(model.ma.size());
		for (std::size_t j = 0; j < model.ma.size(); ++j) neg_ma[j] = -model.ma[j];
		const bool ma_fixed = stabilize(neg_ma);
		if (ma_fixed)
			for (std::size_t j = 0; j < model.ma.size(); ++j) model.ma[j] = -neg_ma[j];
		model.root_reflected = ar_fixed || ma_fixed;
	}

	const double ssq = css_sum_of_squares(series, mean, model.intercept, model.ar, model.ma, resid);
	if (!std::isfinite(ssq)) throw FitError("arma: non-finite residual sum of squares");
	model.sigma2 = ssq / static_cast<double>(n);
	if (model.sigma2 <= 0.0) model.sigma2 = 1e-300; // constant series; keep the likelihood finite
	model.log_likelihood =
	    -0.5 * static_cast<double>(n) * (std::log(kTwoPi * model.sigma2) + 1.0);
	const int k = p + q + 2;
	model.aic = 2.0 * k - 2.0 * model.log_likelihood;
	return model;
}

ArmaModel arma_select_order(std::span<const double> series, int p_max, int q_max,
                            ArmaSelectionLog* log) {
	if (p_max < 0 || q_max < 0) throw Error("arma: negative order bound");
	struct Candidate {
		bool ok = false;
		ArmaModel model;
	};
	const int np = p_max + 1;
	const int nq = q_max + 1;
	std::vector<Candidate> fits(static_cast<std::size_t>(np * nq));

#pragma omp parallel for schedule(dynamic)
	for (int flat = 0; flat < np * nq; ++flat) {
		const int p = flat / nq;
		const int q = flat % nq;
		try {
			fits[static_cast<std::size_t>(flat)].model = arma_fit(series, p, q);
			fits[static_cast<std::size_t>(flat)].ok = true;
		} catch (const Error&) {
			fits[static_cast<std::size_t>(flat)].ok = false;
		}
	}

	int best = -1;
	int failed = 0;
	for (int flat = 0; flat < np * nq; ++flat) {
		if (!fits[static_cast<std::size_t>(flat)].ok) {
			++failed;
			continue;
		}
		if (best < 0) {
			best = flat;
			continue;
		}
		const ArmaModel& c = fits[static_cast<std::size_t>(flat)].model;
		const ArmaModel& b = fits[static_cast<std::size_t>(best)].model;
		if (c.aic < b.aic - 1e-12) {
			best = flat;
		} else if (c.aic <= b.aic + 1e-12) {
			const auto key = [](const ArmaModel& m) { return std::make_pair(m.p() + m.q(), m.p()); };
			if (key(c) < key(b)) best = flat;
		}
	}
	if (log) {
		log->attempted = np * nq;
		log->failed = failed;
	}
	if (best < 0) throw SelectError("arma: every candidate order failed to fit");
	return fits[static_cast<std::size_t>(best)].model;
}

std::vector<double> ArmaModel::forecast(std::span<const double> history, int h) const {
	if (h < 1) throw Error("arma forecast: horizon must be >= 1");
	const std::size_t need = static_cast<std::size_t>(std::max(p(), q()));
	if (history.size() < need)
		throw InsufficientDataError("arma forecast: history shorter than max(p,q)");

	const double mean = mean_of(history);
	const std::vector<double> resid = css_residuals(history, intercept, ar, ma);
	const std::size_t n = history.size();

	std::vector<double> out;
	out.reserve(static_cast<std::size_t>(h));
	const auto value_at = [&](std::ptrdiff_t u) {
		if (u < 0) return mean;
		if (u < static_cast<std::ptrdiff_t>(n)) return history[static_cast<std::size_t>(u)];
		return out[static_cast<std::size_t>(u) - n];
	};
	const auto resid_at = [&](std::ptrdiff_t u) {
		if (u < 0 || u >= static_cast<std::ptrdiff_t>(n)) return 0.0; // future innovations are zero
		return resid[static_cast<std::size_t>(u)];
	};

	for (int k = 1; k <= h; ++k) {
		const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(n) + k - 1;
		double f = intercept;
		for (std::size_t i = 0; i < ar.size(); ++i)
			f += ar[i] * value_at(t - static_cast<std::ptrdiff_t>(i) - 1);
		for (std::size_t j = 0; j < ma.size(); ++j)
			f += ma[j] * resid_at(t - static_cast<std::ptrdiff_t>(j) - 1);
		out.push_back(f);
	}
	return out;
}

} // namespace sfb
