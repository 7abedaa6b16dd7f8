#include "sfb/kernels.hpp"

#include <cmath>

#include "sfb/errors.hpp"

namespace sfb {

std::string kernel_kind_name(KernelKind kind) {
	switch (kind) {
	case KernelKind::Linear: return "linear";
	case KernelKind::Polynomial: return "polynomial";
	case KernelKind::GaussianRbf: return "gaussian";
	}
	throw Error("unreachable kernel kind");
}

KernelKind kernel_kind_from_name(const std::string& name) {
	if (name == "linear") return KernelKind::Linear;
	if (name == "polynomial") return KernelKind::Polynomial;
	if (name == "gaussian") return KernelKind::GaussianRbf;
	throw Error("unknown kernel '" + name + "'");
}

namespace detail {

double kernel_eval_unchecked(const KernelSpec& spec, std::span<const double> x,
                             std::span<const double> y) noexcept {
	switch (spec.kind) {
	case KernelKind::Linear:
		return spec.a1 * dot(x, y) + spec.a2;
	case KernelKind::Polynomial: {
		const double base = spec.a1 * dot(x, y) + spec.a2;
		double r = base;
		for (int k = 1; k < spec.degree; ++k) r *= base;
		return r;
	}
	case KernelKind::GaussianRbf:
	default:
		return std::exp(-squared_distance(x, y) / spec.bandwidth_sq);
	}
}

void validate_kernel_spec(const KernelSpec& spec) {
	if (spec.kind == KernelKind::Polynomial && spec.degree < 1)
		throw Error("polynomial kernel: degree must be >= 1");
	if (spec.kind == KernelKind::GaussianRbf && !(spec.bandwidth_sq > 0.0))
		throw Error("gaussian kernel: bandwidth must be > 0");
	if (!std::isfinite(spec.a1) || !std::isfinite(spec.a2) || !std::isfinite(spec.bandwidth_sq))
		throw NumericError("kernel: non-finite parameter");
}

void validate_vector(std::span<const double> x) {
	if (x.empty()) throw DimError("kernel: empty vector");
	for (const double v : x)
		if (!std::isfinite(v)) throw NumericError("kernel: non-finite input entry");
}

} // namespace detail

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
	if (x.size() != y.size())
		throw DimError("kernel: dim(x)=" + std::to_string(x.size()) +
		               " dim(y)=" + std::to_string(y.size()));
	detail::validate_kernel_spec(spec);
	detail::validate_vector(x);
	detail::validate_vector(y);
	return detail::kernel_eval_unchecked(spec, x, y);
}

namespace {

void validate_set(const KernelSpec& spec, const std::vector<std::vector<double>>& xs) {
	if (xs.empty()) throw DimError("gram: empty input set");
	detail::validate_kernel_spec(spec);
	const std::size_t dim = xs.front().size();
	for (const auto& x : xs) {
		if (x.size() != dim) throw DimError("gram: mixed input dimensions");
		detail::validate_vector(x);
	}
}

} // namespace

Matrix gram(const KernelSpec& spec, const std::vector<std::vector<double>>& xs) {
	validate_set(spec, xs);
	const std::size_t n = xs.size();
	Matrix g(n, n);
	// lower-triangle rows are independent work items; nothing below throws
#pragma omp parallel for schedule(dynamic, 4)
	for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
		for (std::ptrdiff_t j = 0; j <= i; ++j)
			g(i, j) = detail::kernel_eval_unchecked(spec, xs[i], xs[j]);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i);
	return g;
}

Matrix gram_reference(const KernelSpec& spec, const std::vector<std::vector<double>>& xs) {
	validate_set(spec, xs);
	const std::size_t n = xs.size();
	Matrix g(n, n);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j <= i; ++j)
			g(i, j) = detail::kernel_eval_unchecked(spec, xs[i], xs[j]);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i);
	return g;
}

} // namespace sfb
