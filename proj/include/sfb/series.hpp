#pragma once

#include <span>
#include <string>
#include <vector>

#include "sfb/yearmonth.hpp"

namespace sfb {

/// Monthly series of non-negative observations for one region.
/// Timestamps are implied: observation i falls on start.plus(i).
struct TimeSeries {
	std::string region;
	YearMonth start;
	std::vector<double> values;

	std::size_t size() const { return values.size(); }
	YearMonth month_at(std::size_t i) const { return start.plus(static_cast<int>(i)); }
	std::span<const double> view() const { return values; }
};

} // namespace sfb
