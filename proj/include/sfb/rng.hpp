#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace sfb {

/// mt19937_64 with hand-rolled distributions so streams are identical
/// across standard-library implementations.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : engine_(seed) {}

	std::uint64_t next() { return engine_(); }

	// uniform on [0,1)
	double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

	// Box-Muller, pair cached
	double normal() {
		if (have_spare_) {
			have_spare_ = false;
			return spare_;
		}
		double u1 = uniform();
		while (u1 <= 0.0) u1 = uniform();
		const double u2 = uniform();
		const double r = std::sqrt(-2.0 * std::log(u1));
		const double a = 6.283185307179586476925286766559 * u2;
		spare_ = r * std::sin(a);
		have_spare_ = true;
		return r * std::cos(a);
	}

	double normal(double mean, double stddev) { return mean + stddev * normal(); }

	// uniform integer in [0, n)
	std::uint64_t below(std::uint64_t n) {
		// rejection-free modulo bias is negligible for our n but reject anyway
		const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
		std::uint64_t v = engine_();
		while (v >= limit) v = engine_();
		return v % n;
	}

private:
	std::mt19937_64 engine_;
	double spare_ = 0.0;
	bool have_spare_ = false;
};

inline std::uint64_t fnv1a64(std::string_view text, std::uint64_t h = 1469598103934665603ull) {
	for (const char c : text) {
		h ^= static_cast<unsigned char>(c);
		h *= 1099511628211ull;
	}
	return h;
}

/// Stable sub-stream seed for restart/cell r of a seeded computation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t r) {
	std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (r + 1);
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
	return z ^ (z >> 31);
}

} // namespace sfb
