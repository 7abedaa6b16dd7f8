#include "sfb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sfb/csv.hpp"
#include "sfb/errors.hpp"

namespace sfb {

namespace {

struct Row {
	YearMonth date;
	double value;
	std::size_t line_no;
};

} // namespace

std::vector<TimeSeries> read_series_csv(std::istream& in) {
	std::string line;
	if (!std::getline(in, line)) throw ParseError("empty input");
	if (!line.empty() && line.back() == '\r') line.pop_back();
	if (line != "date,region,arrivals")
		throw ParseError("bad header '" + line + "', expected 'date,region,arrivals'");

	std::map<std::string, std::vector<Row>> by_region;
	std::size_t line_no = 1;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') line.pop_back();
		if (line.empty()) continue;
		const auto fields = split_csv_line(line);
		if (fields.size() != 3)
			throw ParseError("row " + std::to_string(line_no) + ": expected 3 fields, got " +
			                 std::to_string(fields.size()));
		YearMonth date;
		try {
			date = YearMonth::parse(fields[0]);
		} catch (const ParseError& e) {
			throw ParseError("row " + std::to_string(line_no) + ": " + e.what());
		}
		if (fields[1].empty()) throw ParseError("row " + std::to_string(line_no) + ": empty region");
		const double value = parse_double_strict(fields[2], line_no);
		if (!std::isfinite(value) || value < 0.0)
			throw ParseError("row " + std::to_string(line_no) + ": arrivals must be finite and >= 0");
		by_region[std::string(fields[1])].push_back({date, value, line_no});
	}
	if (by_region.empty()) throw ParseError("no data rows");

	std::vector<TimeSeries> out;
	out.reserve(by_region.size());
	for (auto& [region, rows] : by_region) {
		std::stable_sort(rows.begin(), rows.end(),
		                 [](const Row& a, const Row& b) { return a.date < b.date; });
		TimeSeries ts;
		ts.region = region;
		ts.start = rows.front().date;
		ts.values.reserve(rows.size());
		YearMonth expect = ts.start;
		for (const Row& r : rows) {
			if (r.date == expect) {
				ts.values.push_back(r.value);
				expect = expect.plus(1);
				continue;
			}
			if (r.date < expect)
				throw ParseError("row " + std::to_string(r.line_no) + ": duplicate month " +
				                 r.date.str() + " for region " + region);
			throw GapError("region " + region + ": missing month " + expect.str());
		}
		out.push_back(std::move(ts));
	}
	return out;
}

std::vector<TimeSeries> load_csv(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw IoError("cannot open " + path);
	return read_series_csv(in);
}

std::string series_to_csv(std::span<const TimeSeries> all) {
	std::string out = "date,region,arrivals\n";
	for (const TimeSeries& ts : all) {
		for (std::size_t i = 0; i < ts.size(); ++i) {
			out += ts.month_at(i).str();
			out += ',';
			out += ts.region;
			out += ',';
			out += format_double(ts.values[i]);
			out += '\n';
		}
	}
	return out;
}

DescriptiveStats describe(const TimeSeries& series, double national_total) {
	if (series.values.empty()) throw EmptySeriesError("describe: empty series " + series.region);
	if (!(national_total > 0.0)) throw Error("describe: national total must be > 0");

	DescriptiveStats s;
	s.min = series.values.front();
	s.max = series.values.front();
	double sum = 0.0;
	for (const double v : series.values) {
		s.min = std::min(s.min, v);
		s.max = std::max(s.max, v);
		sum += v;
	}
	const double n = static_cast<double>(series.size());
	s.mean = sum / n;
	double ss = 0.0;
	for (const double v : series.values) {
		const double d = v - s.mean;
		ss += d * d;
	}
	s.std_dev = std::sqrt(ss / n);
	s.cv = s.mean > 0.0 ? 100.0 * s.std_dev / s.mean : 0.0;
	s.share = 100.0 * sum / national_total;
	return s;
}

Partition partition(std::size_t n, const SplitSpec& spec) {
	const double fr[3] = {spec.train_frac, spec.valid_frac, spec.test_frac};
	for (const double f : fr)
		if (!(f > 0.0 && f < 1.0)) throw PartitionError("split fractions must lie in (0,1)");
	if (std::abs(fr[0] + fr[1] + fr[2] - 1.0) > 1e-9)
		throw PartitionError("split fractions must sum to 1");

	const auto train = static_cast<std::size_t>(std::lround(spec.train_frac * static_cast<double>(n)));
	const auto valid = static_cast<std::size_t>(std::lround(spec.valid_frac * static_cast<double>(n)));
	if (train == 0 || valid == 0 || train + valid >= n)
		throw PartitionError("split leaves an empty block for n=" + std::to_string(n));
	return {train, train + valid, n};
}

Partition partition(const TimeSeries& series, const SplitSpec& spec) {
	return partition(series.size(), spec);
}

Partition partition(const TimeSeries& series, const DatedBoundaries& dated) {
	const int first = series.start.index();
	const int train_end = dated.train_end.index() - first + 1;
	const int valid_end = dated.valid_end.index() - first + 1;
	const int n = static_cast<int>(series.size());
	if (train_end < 1 || valid_end <= train_end || valid_end >= n)
		throw PartitionError("dated boundaries leave an empty block for region " + series.region);
	return {static_cast<std::size_t>(train_end), static_cast<std::size_t>(valid_end), series.size()};
}

SupervisedSet embed(std::span<const double> slice, std::size_t lag_count) {
	if (lag_count < 1) throw InsufficientDataError("embed: lag count must be >= 1");
	if (slice.size() <= lag_count)
		throw InsufficientDataError("embed: need more than " + std::to_string(lag_count) +
		                            " observations, got " + std::to_string(slice.size()));
	SupervisedSet set;
	set.lag_count = lag_count;
	const std::size_t pairs = slice.size() - lag_count;
	set.inputs.reserve(pairs);
	set.targets.reserve(pairs);
	for (std::size_t t = lag_count; t < slice.size(); ++t) {
		std::vector<double> x(lag_count);
		for (std::size_t i = 0; i < lag_count; ++i) x[i] = slice[t - 1 - i];
		set.inputs.push_back(std::move(x));
		set.targets.push_back(slice[t]);
	}
	return set;
}

} // namespace sfb
