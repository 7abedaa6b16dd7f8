#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "sfb/series.hpp"

namespace sfb {

struct SynthNoise {
	enum class Kind { White, Ar1 };
	Kind kind = Kind::White;
	double sigma = 0.0; // innovation standard deviation
	double phi = 0.0;   // AR(1) coefficient, used when kind == Ar1
};

/// Trend + additive monthly pattern + configurable noise, clipped at 1
/// from below so the values behave like arrivals.
struct SynthSpec {
	std::string region = "synthetic";
	std::size_t n = 183;
	YearMonth start{1999, 1};
	double base = 1000.0;
	double trend = 0.0; // per month
	std::array<double, 12> seasonal{}; // added at t mod 12
	SynthNoise noise;
	std::uint64_t seed = 0;
};

struct SynthResult {
	TimeSeries series;
	std::size_t clipped = 0; // observations raised to the floor
};

SynthResult synth_generate(const SynthSpec& spec);

/// A whole synthetic dataset: regions differ in level, seasonal phase and
/// amplitude draw, and noise stream, all derived from one seed.
struct SynthBatchConfig {
	std::size_t regions = 17;
	std::size_t months = 183;
	YearMonth start{1999, 1};
	double base = 1000.0;
	double base_step = 150.0; // level offset per region
	double trend = 1.0;
	double amplitude = 200.0;
	SynthNoise noise{SynthNoise::Kind::White, 50.0, 0.0};
	std::uint64_t seed = 0;
};

std::vector<TimeSeries> synth_batch(const SynthBatchConfig& config);

} // namespace sfb
