#include "sfb/config.hpp"

#include <charconv>
#include <sstream>

#include "sfb/dataset.hpp"
#include "sfb/errors.hpp"

namespace sfb {

namespace {

std::string trim(std::string_view s) {
	std::size_t a = 0;
	std::size_t b = s.size();
	while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
	while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
	return std::string(s.substr(a, b - a));
}

double to_double(const std::string& field, const std::string& value) {
	double v = 0.0;
	const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
	if (res.ec != std::errc() || res.ptr != value.data() + value.size())
		throw ConfigError(field, "not a number: '" + value + "'");
	return v;
}

long to_long(const std::string& field, const std::string& value) {
	long v = 0;
	const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
	if (res.ec != std::errc() || res.ptr != value.data() + value.size())
		throw ConfigError(field, "not an integer: '" + value + "'");
	return v;
}

std::vector<std::string> split_list(const std::string& value) {
	std::vector<std::string> out;
	std::string cur;
	std::istringstream ss(value);
	while (std::getline(ss, cur, ',')) {
		const std::string t = trim(cur);
		if (!t.empty()) out.push_back(t);
	}
	return out;
}

std::vector<double> to_doubles(const std::string& field, const std::string& value) {
	std::vector<double> out;
	for (const std::string& item : split_list(value)) out.push_back(to_double(field, item));
	if (out.empty()) throw ConfigError(field, "empty list");
	return out;
}

std::vector<int> to_ints(const std::string& field, const std::string& value) {
	std::vector<int> out;
	for (const std::string& item : split_list(value)) out.push_back(static_cast<int>(to_long(field, item)));
	if (out.empty()) throw ConfigError(field, "empty list");
	return out;
}

YearMonth to_month(const std::string& field, const std::string& value) {
	try {
		return YearMonth::parse(value);
	} catch (const ParseError& e) {
		throw ConfigError(field, e.what());
	}
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
	RunConfig cfg;
	bool saw_dated_train = false;
	bool saw_dated_valid = false;
	DatedBoundaries dated;

	std::istringstream in(text);
	std::string line;
	std::string section;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		const std::size_t hash = line.find('#');
		if (hash != std::string::npos) line.erase(hash);
		const std::string t = trim(line);
		if (t.empty()) continue;
		if (t.front() == '[') {
			if (t.back() != ']') throw ConfigError("line " + std::to_string(line_no), "unterminated section header");
			section = trim(t.substr(1, t.size() - 2));
			continue;
		}
		const std::size_t eq = t.find('=');
		if (eq == std::string::npos)
			throw ConfigError("line " + std::to_string(line_no), "expected key = value");
		const std::string key = trim(t.substr(0, eq));
		const std::string value = trim(t.substr(eq + 1));
		const std::string field = section.empty() ? key : section + "." + key;
		ExperimentConfig& e = cfg.experiment;

		if (section == "experiment") {
			if (key == "horizons") e.horizons = to_ints(field, value);
			else if (key == "models") {
				e.models.clear();
				for (const std::string& id : split_list(value)) {
					try {
						e.models.push_back(model_kind_from_id(id));
					} catch (const Error&) {
						throw ConfigError(field, "unknown model '" + id + "'");
					}
				}
			} else if (key == "lag") e.lag = static_cast<int>(to_long(field, value));
			else if (key == "seed") e.seed = static_cast<std::uint64_t>(to_long(field, value));
			else if (key == "eval_window") e.report.eval_window = static_cast<std::size_t>(to_long(field, value));
			else if (key == "mode") {
				if (value == "full") e.fast_mode = false;
				else if (value == "fast") e.fast_mode = true;
				else throw ConfigError(field, "expected 'full' or 'fast'");
			} else if (key == "dm_loss") {
				if (value == "ape") e.report.loss = DmLoss::AbsolutePercentage;
				else if (value == "squared") e.report.loss = DmLoss::Squared;
				else throw ConfigError(field, "expected 'ape' or 'squared'");
			} else if (key == "dm_critical_small") e.report.dm.critical_small = to_double(field, value);
			else if (key == "dm_small_n") e.report.dm.small_n = static_cast<std::size_t>(to_long(field, value));
			else if (key == "dm_critical_normal") e.report.dm.critical_normal = to_double(field, value);
			else throw ConfigError(field, "unknown key");
		} else if (section == "split") {
			if (key == "train_frac") e.split.train_frac = to_double(field, value);
			else if (key == "valid_frac") e.split.valid_frac = to_double(field, value);
			else if (key == "test_frac") e.split.test_frac = to_double(field, value);
			else if (key == "train_end") { dated.train_end = to_month(field, value); saw_dated_train = true; }
			else if (key == "valid_end") { dated.valid_end = to_month(field, value); saw_dated_valid = true; }
			else throw ConfigError(field, "unknown key");
		} else if (section == "svr") {
			if (key == "costs") e.svr.costs = to_doubles(field, value);
			else if (key == "epsilon_rel") e.svr.epsilon_rel = to_doubles(field, value);
			else if (key == "bandwidth_rel") e.svr.bandwidth_rel = to_doubles(field, value);
			else if (key == "offsets") e.svr.offsets = to_doubles(field, value);
			else if (key == "degrees") e.svr.degrees = to_ints(field, value);
			else if (key == "tol") e.svr_tol = to_double(field, value);
			else throw ConfigError(field, "unknown key");
		} else if (section == "neural") {
			if (key == "restarts") e.neural.policy.restarts = static_cast<int>(to_long(field, value));
			else if (key == "max_epochs") e.neural.policy.max_epochs = static_cast<int>(to_long(field, value));
			else if (key == "patience") e.neural.policy.patience = static_cast<int>(to_long(field, value));
			else if (key == "learning_rate") e.neural.policy.learning_rate = to_double(field, value);
			else if (key == "check_interval") e.neural.policy.check_interval = static_cast<int>(to_long(field, value));
			else if (key == "q_short") e.neural.q_short = to_ints(field, value);
			else if (key == "q_mid") e.neural.q_mid = to_ints(field, value);
			else if (key == "q_long") e.neural.q_long = to_ints(field, value);
			else if (key.rfind("q_h", 0) == 0) {
				const int h = static_cast<int>(to_long(field, key.substr(3)));
				e.neural.overrides[h] = to_ints(field, value);
			} else throw ConfigError(field, "unknown key");
		} else if (section == "arma") {
			if (key == "p_max") e.arma.p_max = static_cast<int>(to_long(field, value));
			else if (key == "q_max") e.arma.q_max = static_cast<int>(to_long(field, value));
			else throw ConfigError(field, "unknown key");
		} else if (section == "input") {
			InputSpec& i = cfg.input;
			if (key == "kind") {
				if (value == "csv") i.kind = InputSpec::Kind::Csv;
				else if (value == "synth") i.kind = InputSpec::Kind::Synth;
				else throw ConfigError(field, "expected 'csv' or 'synth'");
			} else if (key == "path") i.csv_path = value;
			else if (key == "regions") i.synth.regions = static_cast<std::size_t>(to_long(field, value));
			else if (key == "months") i.synth.months = static_cast<std::size_t>(to_long(field, value));
			else if (key == "start") i.synth.start = to_month(field, value);
			else if (key == "base") i.synth.base = to_double(field, value);
			else if (key == "base_step") i.synth.base_step = to_double(field, value);
			else if (key == "trend") i.synth.trend = to_double(field, value);
			else if (key == "amplitude") i.synth.amplitude = to_double(field, value);
			else if (key == "noise") {
				if (value == "white") i.synth.noise.kind = SynthNoise::Kind::White;
				else if (value == "ar1") i.synth.noise.kind = SynthNoise::Kind::Ar1;
				else throw ConfigError(field, "expected 'white' or 'ar1'");
			} else if (key == "sigma") i.synth.noise.sigma = to_double(field, value);
			else if (key == "phi") i.synth.noise.phi = to_double(field, value);
			else if (key == "seed") i.synth.seed = static_cast<std::uint64_t>(to_long(field, value));
			else throw ConfigError(field, "unknown key");
		} else {
			throw ConfigError(field, "unknown section '" + section + "'");
		}
	}

	if (saw_dated_train != saw_dated_valid)
		throw ConfigError("split", "dated boundaries need both train_end and valid_end");
	if (saw_dated_train) cfg.experiment.dated = dated;
	if (cfg.input.kind == InputSpec::Kind::Csv && cfg.input.csv_path.empty())
		throw ConfigError("input.path", "required when input.kind = csv");

	cfg.experiment.validate();
	return cfg;
}

std::vector<TimeSeries> load_input(const InputSpec& input) {
	if (input.kind == InputSpec::Kind::Csv) return load_csv(input.csv_path);
	return synth_batch(input.synth);
}

} // namespace sfb
