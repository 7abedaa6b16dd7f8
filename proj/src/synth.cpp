#include "sfb/synth.hpp"

#include <cmath>
#include <cstdio>

#include "sfb/errors.hpp"
#include "sfb/rng.hpp"

namespace sfb {

SynthResult synth_generate(const SynthSpec& spec) {
	if (spec.n < 24) throw InsufficientDataError("synth: need at least 24 months");
	if (spec.noise.sigma < 0.0) throw Error("synth: noise sigma must be >= 0");

	SynthResult result;
	result.series.region = spec.region;
	result.series.start = spec.start;
	result.series.values.reserve(spec.n);

	Rng rng(spec.seed);
	double eps = 0.0;
	for (std::size_t t = 0; t < spec.n; ++t) {
		const double innovation = spec.noise.sigma > 0.0 ? rng.normal(0.0, spec.noise.sigma) : 0.0;
		eps = spec.noise.kind == SynthNoise::Kind::Ar1 ? spec.noise.phi * eps + innovation
		                                               : innovation;
		double y = spec.base + spec.trend * static_cast<double>(t) + spec.seasonal[t % 12] + eps;
		if (y < 1.0) {
			y = 1.0;
			++result.clipped;
		}
		result.series.values.push_back(y);
	}
	return result;
}

std::vector<TimeSeries> synth_batch(const SynthBatchConfig& config) {
	if (config.regions == 0) throw Error("synth batch: need at least one region");
	std::vector<TimeSeries> out;
	out.reserve(config.regions);
	for (std::size_t i = 0; i < config.regions; ++i) {
		SynthSpec spec;
		char name[32];
		std::snprintf(name, sizeof(name), "region-%02zu", i + 1);
		spec.region = name;
		spec.n = config.months;
		spec.start = config.start;
		spec.base = config.base + config.base_step * static_cast<double>(i);
		spec.trend = config.trend;
		spec.noise = config.noise;
		spec.seed = derive_seed(config.seed, 2 * i + 1);

		Rng amp_rng(derive_seed(config.seed, 2 * i));
		for (std::size_t m = 0; m < 12; ++m) {
			const double phase = 0.5235987755982988 * static_cast<double>((m + i) % 12); // pi/6
			spec.seasonal[m] = config.amplitude * std::sin(phase) +
			                   0.25 * config.amplitude * amp_rng.normal();
		}
		out.push_back(synth_generate(spec).series);
	}
	return out;
}

} // namespace sfb
