#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "sfb/errors.hpp"

namespace sfb {

/// Calendar month, the time stamp of every observation.
struct YearMonth {
	int year = 1999;
	int month = 1; // 1..12

	auto operator<=>(const YearMonth&) const = default;

	// months since year 0, used for gap checks and offsets
	int index() const { return year * 12 + (month - 1); }

	YearMonth plus(int months) const {
		const int idx = index() + months;
		return {idx / 12, idx % 12 + 1};
	}

	std::string str() const;
	static YearMonth parse(std::string_view text); // "YYYY-MM"
};

} // namespace sfb
