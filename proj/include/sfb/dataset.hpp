#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sfb/series.hpp"

namespace sfb {

/// Chronological train/validation/test fractions. Must sum to 1.
struct SplitSpec {
	double train_frac = 0.52;
	double valid_frac = 0.33;
	double test_frac = 0.15;
};

/// Explicit split boundaries (last month of each block). When given,
/// these override fractional splitting.
struct DatedBoundaries {
	YearMonth train_end{2006, 12};
	YearMonth valid_end{2011, 12};
};

/// Contiguous index blocks: train [0, train_end), validation
/// [train_end, valid_end), test [valid_end, size).
struct Partition {
	std::size_t train_end = 0;
	std::size_t valid_end = 0;
	std::size_t size = 0;

	std::size_t train_len() const { return train_end; }
	std::size_t valid_len() const { return valid_end - train_end; }
	std::size_t test_len() const { return size - valid_end; }
};

/// Lag-embedded (input, target) pairs. inputs[k] holds the lag_count most
/// recent values before the target, most recent first.
struct SupervisedSet {
	std::vector<std::vector<double>> inputs;
	std::vector<double> targets;
	std::size_t lag_count = 0;

	std::size_t size() const { return targets.size(); }
};

struct DescriptiveStats {
	double min = 0.0;
	double max = 0.0;
	double mean = 0.0;
	double std_dev = 0.0; // population
	double cv = 0.0;      // percent
	double share = 0.0;   // percent of national total
	double cumulative_share = 0.0;
};

std::vector<TimeSeries> load_csv(const std::string& path);
std::vector<TimeSeries> read_series_csv(std::istream& in);
std::string series_to_csv(std::span<const TimeSeries> all);

DescriptiveStats describe(const TimeSeries& series, double national_total);

Partition partition(std::size_t n, const SplitSpec& spec);
Partition partition(const TimeSeries& series, const SplitSpec& spec);
Partition partition(const TimeSeries& series, const DatedBoundaries& dated);

SupervisedSet embed(std::span<const double> slice, std::size_t lag_count);

} // namespace sfb
