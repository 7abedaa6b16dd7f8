#include "sfb/reportio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "sfb/csv.hpp"
#include "sfb/errors.hpp"

namespace sfb {

namespace {

std::string fixed(double v, int decimals) {
	char buf[64];
	std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
	return buf;
}

std::string sanitize(std::string text) {
	for (char& c : text)
		if (c == ',' || c == '\n' || c == '\r') c = ';';
	return text;
}

} // namespace

namespace {

// Shares refer to the most recent calendar year that every region covers
// in full (annual totals). When no such year exists, the whole overlap is
// used instead.
int last_complete_year(const std::vector<TimeSeries>& dataset) {
	int year = std::numeric_limits<int>::max();
	for (const TimeSeries& ts : dataset) {
		if (ts.values.empty()) return 0;
		const YearMonth first = ts.start;
		const YearMonth last = ts.month_at(ts.size() - 1);
		const int first_full = first.month == 1 ? first.year : first.year + 1;
		const int last_full = last.month == 12 ? last.year : last.year - 1;
		if (last_full < first_full) return 0;
		year = std::min(year, last_full);
		if (first_full > year) return 0;
	}
	return year;
}

double sum_in_year(const TimeSeries& ts, int year) {
	double sum = 0.0;
	for (int m = 1; m <= 12; ++m) {
		const int idx = YearMonth{year, m}.index() - ts.start.index();
		sum += ts.values[static_cast<std::size_t>(idx)];
	}
	return sum;
}

} // namespace

std::vector<DescribeRow> describe_dataset(const std::vector<TimeSeries>& dataset) {
	if (dataset.empty()) throw EmptySeriesError("describe: no series");
	double national = 0.0;
	for (const TimeSeries& ts : dataset)
		for (const double v : ts.values) national += v;
	if (!(national > 0.0)) throw EmptySeriesError("describe: national total is zero");

	const int share_year = last_complete_year(dataset);
	double year_national = 0.0;
	if (share_year > 0)
		for (const TimeSeries& ts : dataset) year_national += sum_in_year(ts, share_year);

	std::vector<DescribeRow> rows;
	rows.reserve(dataset.size());
	for (const TimeSeries& ts : dataset) {
		DescribeRow row{ts.region, ts.size(), describe(ts, national)};
		if (share_year > 0 && year_national > 0.0)
			row.stats.share = 100.0 * sum_in_year(ts, share_year) / year_national;
		rows.push_back(std::move(row));
	}
	std::sort(rows.begin(), rows.end(), [](const DescribeRow& a, const DescribeRow& b) {
		if (a.stats.share != b.stats.share) return a.stats.share > b.stats.share;
		return a.region < b.region;
	});
	double cum = 0.0;
	for (DescribeRow& r : rows) {
		cum += r.stats.share;
		r.stats.cumulative_share = cum;
	}
	return rows;
}

std::string describe_to_csv(const std::vector<DescribeRow>& rows) {
	std::string out = "#schema=sfb.describe.v1\n";
	out += "region,months,min,max,mean,std_dev,cv,share,cumulative_share\n";
	for (const DescribeRow& r : rows) {
		out += sanitize(r.region) + ',' + std::to_string(r.months) + ',';
		out += fixed(r.stats.min, 1) + ',' + fixed(r.stats.max, 1) + ',';
		out += fixed(r.stats.mean, 1) + ',' + fixed(r.stats.std_dev, 1) + ',';
		out += fixed(r.stats.cv, 1) + ',';
		out += fixed(r.stats.share, 2) + ',' + fixed(r.stats.cumulative_share, 2) + '\n';
	}
	return out;
}

std::string records_to_csv(std::span<const ForecastRecord> records) {
	std::string out = "#schema=sfb.records.v1\n";
	out += "region,model,horizon,origin,target,y_actual,y_hat,error\n";
	for (const ForecastRecord& r : records) {
		out += sanitize(r.region) + ',' + r.model_id + ',' + std::to_string(r.horizon) + ',';
		out += r.origin.str() + ',' + r.target().str() + ',';
		out += format_double(r.y_actual) + ',' + format_double(r.y_hat) + ',' +
		       format_double(r.error) + '\n';
	}
	return out;
}

std::vector<ForecastRecord> records_from_csv(const std::string& text) {
	std::istringstream in(text);
	std::string line;
	if (!std::getline(in, line) || line.rfind("#schema=sfb.records.", 0) != 0)
		throw ParseError("records csv: missing schema line");
	if (!std::getline(in, line) || line != "region,model,horizon,origin,target,y_actual,y_hat,error")
		throw ParseError("records csv: bad header");
	std::vector<ForecastRecord> out;
	std::size_t line_no = 2;
	while (std::getline(in, line)) {
		++line_no;
		if (line.empty()) continue;
		const auto f = split_csv_line(line);
		if (f.size() != 8) throw ParseError("records csv row " + std::to_string(line_no) + ": expected 8 fields");
		ForecastRecord r;
		r.region = std::string(f[0]);
		r.model_id = std::string(f[1]);
		r.horizon = static_cast<int>(parse_double_strict(f[2], line_no));
		r.origin = YearMonth::parse(f[3]);
		const YearMonth target = YearMonth::parse(f[4]);
		if (target != r.origin.plus(r.horizon))
			throw ParseError("records csv row " + std::to_string(line_no) + ": target does not match origin+horizon");
		r.y_actual = parse_double_strict(f[5], line_no);
		r.y_hat = parse_double_strict(f[6], line_no);
		r.error = parse_double_strict(f[7], line_no);
		out.push_back(std::move(r));
	}
	return out;
}

std::string report_to_csv(const EvaluationReport& report) {
	std::string out = "#schema=sfb.report.v1\n";
	out += "region,model,horizon,n,mape,rmape,plae,failed,failure\n";
	for (const CellScores& c : report.cells) {
		out += sanitize(c.region) + ',' + c.model_id + ',' + std::to_string(c.horizon) + ',';
		out += std::to_string(c.n) + ',';
		if (c.failed) {
			out += ",,,1," + sanitize(c.failure) + '\n';
		} else {
			out += format_double(c.mape) + ',' + format_double(c.rmape) + ',' +
			       format_double(c.plae) + ",0,\n";
		}
	}
	return out;
}

std::string dm_to_csv(const EvaluationReport& report) {
	std::string out = "#schema=sfb.dm.v1\n";
	out += "region,model_a,model_b,horizon,statistic,bandwidth,loss,n,significant,status\n";
	for (const DmRow& row : report.dm) {
		out += sanitize(row.region) + ',' + row.model_a + ',' + row.model_b + ',' +
		       std::to_string(row.horizon) + ',';
		if (row.result) {
			out += format_double(row.result->statistic) + ',' + std::to_string(row.result->bandwidth) +
			       ',' + dm_loss_name(row.result->loss) + ',' + std::to_string(row.result->n) + ',' +
			       (row.result->significant_5pct ? "1" : "0") + ',';
		} else {
			out += ",,,,0,";
		}
		out += row.status + '\n';
	}
	return out;
}

std::string summary_to_csv(const EvaluationReport& report) {
	std::string out = "#schema=sfb.summary.v1\n";
	out += "family,horizon,cells,mean_rmape,median_rmape\n";
	for (const FamilySummaryRow& row : report.summary) {
		out += row.family + ',' + std::to_string(row.horizon) + ',' + std::to_string(row.cells) +
		       ',' + format_double(row.mean_rmape) + ',' + format_double(row.median_rmape) + '\n';
	}
	return out;
}

std::string manifest_to_json(const Manifest& manifest) {
	nlohmann::json j;
	j["schema"] = "sfb.manifest.v1";
	j["artifact_version"] = manifest.artifact_version;
	j["config_text"] = manifest.config_text;
	j["total_seconds"] = manifest.total_seconds;
	j["cells"] = nlohmann::json::array();
	for (const CellSummary& c : manifest.cells) {
		nlohmann::json jc;
		jc["region"] = c.region;
		jc["model"] = c.model;
		jc["horizon"] = c.horizon;
		jc["seed"] = c.seed;
		jc["selections"] = c.selections;
		jc["seconds"] = c.seconds;
		jc["failed"] = c.failed;
		if (c.failed) jc["error"] = c.error;
		j["cells"].push_back(std::move(jc));
	}
	j["failures"] = nlohmann::json::array();
	for (const CellFailureInfo& f : manifest.failures) {
		j["failures"].push_back({{"region", f.region},
		                         {"model", f.model_id},
		                         {"horizon", f.horizon},
		                         {"message", f.message}});
	}
	return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
	nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
	if (j.is_discarded()) throw ParseError("manifest: invalid json");
	if (j.value("schema", "") != "sfb.manifest.v1") throw ParseError("manifest: unknown schema");
	Manifest m;
	m.artifact_version = j.value("artifact_version", "");
	m.config_text = j.value("config_text", "");
	m.total_seconds = j.value("total_seconds", 0.0);
	for (const auto& jc : j.value("cells", nlohmann::json::array())) {
		CellSummary c;
		c.region = jc.value("region", "");
		c.model = jc.value("model", "");
		c.horizon = jc.value("horizon", 1);
		c.seed = jc.value("seed", std::uint64_t{0});
		c.selections = jc.value("selections", std::vector<std::string>{});
		c.seconds = jc.value("seconds", 0.0);
		c.failed = jc.value("failed", false);
		c.error = jc.value("error", "");
		m.cells.push_back(std::move(c));
	}
	for (const auto& jf : j.value("failures", nlohmann::json::array()))
		m.failures.push_back({jf.value("region", ""), jf.value("model", ""), jf.value("horizon", 1),
		                      jf.value("message", "")});
	return m;
}

void write_file(const std::string& path, const std::string& content) {
	std::ofstream out(path, std::ios::binary);
	if (!out) throw IoError("cannot write " + path);
	out << content;
	if (!out) throw IoError("write failed for " + path);
}

std::string read_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) throw IoError("cannot read " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

} // namespace sfb
