#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfb {

/// Dense row-major matrix, just enough for the small solves we need.
struct Matrix {
	std::size_t rows = 0;
	std::size_t cols = 0;
	std::vector<double> data;

	Matrix() = default;
	Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

	double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
	double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Least squares min ||Ax - b|| via Householder QR (m >= n, full column rank).
/// A and b are consumed in place.
std::vector<double> solve_least_squares(Matrix a, std::vector<double> b);

double dot(std::span<const double> x, std::span<const double> y);
double squared_distance(std::span<const double> x, std::span<const double> y);

} // namespace sfb
