#pragma once

#include <span>
#include <vector>

namespace sfb {

/// ARMA(p,q) with intercept, estimated by conditional sum of squares:
/// pre-sample observations sit at the series mean, pre-sample residuals
/// at zero.
struct ArmaModel {
	std::vector<double> ar; // phi_1..phi_p
	std::vector<double> ma; // theta_1..theta_q
	double intercept = 0.0;
	double sigma2 = 0.0;
	double log_likelihood = 0.0;
	double aic = 0.0;
	bool root_reflected = false; // roots were projected back inside the stationary/invertible region

	int p() const { return static_cast<int>(ar.size()); }
	int q() const { return static_cast<int>(ma.size()); }

	/// Recursive point forecasts: future innovations zero, residuals on
	/// `history` recomputed with the fitted parameters. Returns h values.
	std::vector<double> forecast(std::span<const double> history, int h) const;
};

/// CSS residual recursion for the given parameters over `series`.
std::vector<double> css_residuals(std::span<const double> series, double intercept,
                                  std::span<const double> ar, std::span<const double> ma);

/// Fit by Nelder-Mead on the conditional sum of squares, started from
/// Hannan-Rissanen estimates. Requires n >= 10*(p+q+1).
ArmaModel arma_fit(std::span<const double> series, int p, int q);

struct ArmaSelectionLog {
	int attempted = 0;
	int failed = 0;
};

/// Exhaustive AIC scan over the (p,q) grid; failed fits are skipped but
/// counted. Ties within 1e-12 go to smaller p+q, then smaller p.
ArmaModel arma_select_order(std::span<const double> series, int p_max = 12, int q_max = 12,
                            ArmaSelectionLog* log = nullptr);

} // namespace sfb
