#include "sfb/linalg.hpp"

#include <cmath>
#include <string>

#include "sfb/errors.hpp"

namespace sfb {

double dot(std::span<const double> x, std::span<const double> y) {
	double s = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
	return s;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
	double s = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i) {
		const double d = x[i] - y[i];
		s += d * d;
	}
	return s;
}

std::vector<double> solve_least_squares(Matrix a, std::vector<double> b) {
	const std::size_t m = a.rows;
	const std::size_t n = a.cols;
	if (b.size() != m) throw DimError("least squares: rhs length != row count");
	if (m < n) throw DimError("least squares: fewer rows than unknowns");

	// Householder triangularization, reflectors applied to b on the fly.
	for (std::size_t k = 0; k < n; ++k) {
		double norm = 0.0;
		for (std::size_t i = k; i < m; ++i) norm += a(i, k) * a(i, k);
		norm = std::sqrt(norm);
		if (norm == 0.0) throw NumericError("least squares: rank-deficient column " + std::to_string(k));
		if (a(k, k) > 0.0) norm = -norm;

		// v = x - norm*e1, stored in place of column k
		a(k, k) -= norm;
		double vtv = 0.0;
		for (std::size_t i = k; i < m; ++i) vtv += a(i, k) * a(i, k);
		if (vtv == 0.0) throw NumericError("least squares: degenerate reflector");

		for (std::size_t j = k + 1; j < n; ++j) {
			double vta = 0.0;
			for (std::size_t i = k; i < m; ++i) vta += a(i, k) * a(i, j);
			const double f = 2.0 * vta / vtv;
			for (std::size_t i = k; i < m; ++i) a(i, j) -= f * a(i, k);
		}
		double vtb = 0.0;
		for (std::size_t i = k; i < m; ++i) vtb += a(i, k) * b[i];
		const double f = 2.0 * vtb / vtv;
		for (std::size_t i = k; i < m; ++i) b[i] -= f * a(i, k);

		a(k, k) = norm; // R diagonal
	}

	// back substitution on R x = Q^T b
	std::vector<double> x(n, 0.0);
	for (std::size_t kk = n; kk-- > 0;) {
		double s = b[kk];
		for (std::size_t j = kk + 1; j < n; ++j) s -= a(kk, j) * x[j];
		x[kk] = s / a(kk, kk);
	}
	return x;
}

} // namespace sfb
