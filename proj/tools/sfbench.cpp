// sfbench: seasonal forecasting benchmark CLI.
//
// Subcommands: describe (descriptive statistics report), synth (generate
// synthetic arrivals data), run (full expanding-window experiment from a
// config file), report (re-derive report CSVs from records.csv).

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "sfb/config.hpp"
#include "sfb/dataset.hpp"
#include "sfb/errors.hpp"
#include "sfb/reportio.hpp"
#include "sfb/synth.hpp"

namespace {

constexpr const char* kVersion = "sfbench 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCellFailures = 4;

void apply_thread_cap() {
	if (const char* env = std::getenv("SFB_THREADS")) {
		const int n = std::atoi(env);
		if (n > 0) omp_set_num_threads(n);
	}
}

void emit(const std::string& path, const std::string& content) {
	if (path == "-")
		std::cout << content;
	else
		sfb::write_file(path, content);
}

int cmd_describe(const std::string& input, const std::string& output) {
	const std::vector<sfb::TimeSeries> dataset = sfb::load_csv(input);
	emit(output, sfb::describe_to_csv(sfb::describe_dataset(dataset)));
	return kExitOk;
}

int cmd_synth(const sfb::SynthBatchConfig& config, const std::string& output) {
	const std::vector<sfb::TimeSeries> dataset = sfb::synth_batch(config);
	emit(output, sfb::series_to_csv(dataset));
	return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& manifest_path,
            const std::string& input_override, const std::string& out_dir) {
	std::string config_text;
	if (!manifest_path.empty()) {
		config_text = sfb::manifest_from_json(sfb::read_file(manifest_path)).config_text;
	} else {
		config_text = sfb::read_file(config_path);
	}
	sfb::RunConfig cfg = sfb::parse_run_config(config_text);
	if (!input_override.empty()) {
		cfg.input.kind = sfb::InputSpec::Kind::Csv;
		cfg.input.csv_path = input_override;
	}

	const std::vector<sfb::TimeSeries> dataset = sfb::load_input(cfg.input);

	const double t0 = omp_get_wtime();
	const sfb::ExperimentResult result = sfb::run_experiment(dataset, cfg.experiment);
	const double seconds = omp_get_wtime() - t0;

	std::filesystem::create_directories(out_dir);
	const auto path = [&](const char* name) { return out_dir + "/" + name; };
	sfb::write_file(path("records.csv"), sfb::records_to_csv(result.records));
	sfb::write_file(path("report.csv"), sfb::report_to_csv(result.report));
	sfb::write_file(path("dm.csv"), sfb::dm_to_csv(result.report));
	sfb::write_file(path("summary.csv"), sfb::summary_to_csv(result.report));

	sfb::Manifest manifest;
	manifest.artifact_version = kVersion;
	manifest.config_text = config_text;
	manifest.cells = result.cells;
	manifest.failures = result.failures;
	manifest.total_seconds = seconds;
	sfb::write_file(path("manifest.json"), sfb::manifest_to_json(manifest));

	if (!result.failures.empty()) {
		std::cerr << result.failures.size() << " cell(s) failed:\n";
		for (const auto& f : result.failures)
			std::cerr << "  " << f.region << " " << f.model_id << " h=" << f.horizon << ": "
			          << f.message << "\n";
		return kExitCellFailures;
	}
	std::cout << "wrote " << out_dir << "/{records,report,dm,summary}.csv + manifest.json in "
	          << seconds << " s\n";
	return kExitOk;
}

int cmd_report(const std::string& records_path, const std::string& out_dir,
               const sfb::ReportOptions& options) {
	const std::vector<sfb::ForecastRecord> records =
	    sfb::records_from_csv(sfb::read_file(records_path));
	const sfb::EvaluationReport report = sfb::assemble_report(records, {}, options);
	std::filesystem::create_directories(out_dir);
	sfb::write_file(out_dir + "/report.csv", sfb::report_to_csv(report));
	sfb::write_file(out_dir + "/dm.csv", sfb::dm_to_csv(report));
	sfb::write_file(out_dir + "/summary.csv", sfb::summary_to_csv(report));
	return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
	apply_thread_cap();

	CLI::App app{"seasonal forecasting benchmark"};
	app.set_version_flag("--version", kVersion);
	app.require_subcommand(1);

	// describe
	auto* describe = app.add_subcommand("describe", "descriptive statistics per region");
	std::string d_input;
	std::string d_output = "-";
	describe->add_option("-i,--input", d_input, "input CSV (date,region,arrivals)")->required();
	describe->add_option("-o,--output", d_output, "output CSV path, '-' for stdout");

	// synth
	auto* synth = app.add_subcommand("synth", "generate synthetic seasonal arrivals data");
	sfb::SynthBatchConfig s_cfg;
	s_cfg.regions = 1;
	std::string s_output = "-";
	std::string s_start = "1999-01";
	std::string s_noise = "white";
	synth->add_option("--regions", s_cfg.regions, "number of regions");
	synth->add_option("--months", s_cfg.months, "series length in months");
	synth->add_option("--start", s_start, "first month, YYYY-MM");
	synth->add_option("--base", s_cfg.base, "base level");
	synth->add_option("--base-step", s_cfg.base_step, "level offset per region");
	synth->add_option("--trend", s_cfg.trend, "trend per month");
	synth->add_option("--amplitude", s_cfg.amplitude, "seasonal amplitude");
	synth->add_option("--noise", s_noise, "noise kind: white | ar1");
	synth->add_option("--sigma", s_cfg.noise.sigma, "innovation standard deviation");
	synth->add_option("--phi", s_cfg.noise.phi, "AR(1) coefficient");
	synth->add_option("--seed", s_cfg.seed, "generator seed");
	synth->add_option("-o,--output", s_output, "output CSV path, '-' for stdout");

	// run
	auto* run = app.add_subcommand("run", "run the forecasting experiment from a config file");
	std::string r_config;
	std::string r_manifest;
	std::string r_input;
	std::string r_out = "out";
	run->add_option("-c,--config", r_config, "experiment config file");
	run->add_option("--from-manifest", r_manifest, "replay the config embedded in a manifest.json");
	run->add_option("-i,--input", r_input, "override: arrivals CSV path");
	run->add_option("-o,--out", r_out, "output directory");

	// report
	auto* report = app.add_subcommand("report", "re-derive report CSVs from records.csv");
	std::string p_records;
	std::string p_out = "out";
	sfb::ReportOptions p_options;
	std::string p_loss = "ape";
	report->add_option("-r,--records", p_records, "records.csv from a previous run")->required();
	report->add_option("-o,--out", p_out, "output directory");
	report->add_option("--eval-window", p_options.eval_window, "score the last N test targets (0 = all)");
	report->add_option("--dm-loss", p_loss, "DM loss: ape | squared");
	report->add_option("--baseline", p_options.baseline_id, "baseline model id");

	CLI11_PARSE(app, argc, argv);

	try {
		if (describe->parsed()) return cmd_describe(d_input, d_output);
		if (synth->parsed()) {
			s_cfg.start = sfb::YearMonth::parse(s_start);
			if (s_noise == "ar1")
				s_cfg.noise.kind = sfb::SynthNoise::Kind::Ar1;
			else if (s_noise != "white")
				throw sfb::ConfigError("noise", "expected 'white' or 'ar1'");
			return cmd_synth(s_cfg, s_output);
		}
		if (run->parsed()) {
			if (r_config.empty() == r_manifest.empty())
				throw sfb::ConfigError("config", "give exactly one of --config or --from-manifest");
			return cmd_run(r_config, r_manifest, r_input, r_out);
		}
		if (report->parsed()) {
			if (p_loss == "squared")
				p_options.loss = sfb::DmLoss::Squared;
			else if (p_loss != "ape")
				throw sfb::ConfigError("dm-loss", "expected 'ape' or 'squared'");
			return cmd_report(p_records, p_out, p_options);
		}
	} catch (const sfb::ConfigError& e) {
		std::cerr << "config error: " << e.what() << "\n";
		return kExitConfig;
	} catch (const sfb::ParseError& e) {
		std::cerr << "data error: " << e.what() << "\n";
		return kExitData;
	} catch (const sfb::GapError& e) {
		std::cerr << "data error: " << e.what() << "\n";
		return kExitData;
	} catch (const sfb::IoError& e) {
		std::cerr << "data error: " << e.what() << "\n";
		return kExitData;
	} catch (const sfb::Error& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	}
	return kExitOk;
}
