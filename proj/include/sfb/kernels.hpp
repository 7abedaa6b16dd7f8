#pragma once

#include <span>
#include <string>
#include <vector>

#include "sfb/linalg.hpp"

namespace sfb {

enum class KernelKind { Linear, Polynomial, GaussianRbf };

std::string kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

/// Kernel family plus its parameters. Unused fields keep their defaults.
struct KernelSpec {
	KernelKind kind = KernelKind::GaussianRbf;
	double a1 = 1.0;           // linear/polynomial gain
	double a2 = 0.0;           // linear/polynomial offset
	int degree = 2;            // polynomial degree, >= 1
	double bandwidth_sq = 1.0; // Gaussian delta^2, > 0
};

/// K(x, y) for the configured kernel.
///   Linear:     a1*<x,y> + a2
///   Polynomial: (a1*<x,y> + a2)^degree
///   Gaussian:   exp(-||x-y||^2 / delta^2)
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// Full Gram matrix, rows computed in parallel. Exactly symmetric: the
/// lower triangle is computed and mirrored.
Matrix gram(const KernelSpec& spec, const std::vector<std::vector<double>>& xs);

/// Plain serial loops, kept as the reference the parallel kernel is
/// tested and benchmarked against.
Matrix gram_reference(const KernelSpec& spec, const std::vector<std::vector<double>>& xs);

namespace detail {
// hot path, inputs already validated
double kernel_eval_unchecked(const KernelSpec& spec, std::span<const double> x,
                             std::span<const double> y) noexcept;
void validate_kernel_spec(const KernelSpec& spec);
void validate_vector(std::span<const double> x);
} // namespace detail

} // namespace sfb
