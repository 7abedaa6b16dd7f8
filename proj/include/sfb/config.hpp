#pragma once

#include <string>
#include <vector>

#include "sfb/harness.hpp"
#include "sfb/synth.hpp"

namespace sfb {

struct InputSpec {
	enum class Kind { Csv, Synth };
	Kind kind = Kind::Synth;
	std::string csv_path;
	SynthBatchConfig synth;
};

struct RunConfig {
	ExperimentConfig experiment;
	InputSpec input;
};

/// Flat sectioned key=value format; '#' starts a comment. Unknown keys
/// are a ConfigError naming the offending field.
RunConfig parse_run_config(const std::string& text);

std::vector<TimeSeries> load_input(const InputSpec& input);

} // namespace sfb
