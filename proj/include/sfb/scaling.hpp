#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace sfb {

/// Per-dimension affine standardization x' = (x - shift) / scale.
/// Fitted on training inputs only; constant dimensions keep scale 1.
struct AffineScaler {
	std::vector<double> shift;
	std::vector<double> scale;

	static AffineScaler fit(const std::vector<std::vector<double>>& xs) {
		AffineScaler s;
		if (xs.empty()) return s;
		const std::size_t dim = xs.front().size();
		s.shift.assign(dim, 0.0);
		s.scale.assign(dim, 1.0);
		const double n = static_cast<double>(xs.size());
		for (std::size_t j = 0; j < dim; ++j) {
			double sum = 0.0;
			for (const auto& x : xs) sum += x[j];
			const double mean = sum / n;
			double ss = 0.0;
			for (const auto& x : xs) {
				const double d = x[j] - mean;
				ss += d * d;
			}
			const double sd = std::sqrt(ss / n);
			s.shift[j] = mean;
			s.scale[j] = sd > 1e-12 ? sd : 1.0;
		}
		return s;
	}

	std::vector<double> apply(std::span<const double> x) const {
		std::vector<double> out(x.begin(), x.end());
		for (std::size_t j = 0; j < out.size() && j < shift.size(); ++j)
			out[j] = (out[j] - shift[j]) / scale[j];
		return out;
	}

	std::vector<std::vector<double>> apply_all(const std::vector<std::vector<double>>& xs) const {
		std::vector<std::vector<double>> out;
		out.reserve(xs.size());
		for (const auto& x : xs) out.push_back(apply(x));
		return out;
	}
};

} // namespace sfb
