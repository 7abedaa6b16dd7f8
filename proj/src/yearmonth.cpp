#include "sfb/yearmonth.hpp"

#include <charconv>
#include <cstdio>

namespace sfb {

std::string YearMonth::str() const {
	char buf[16];
	std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
	return buf;
}

YearMonth YearMonth::parse(std::string_view text) {
	const auto fail = [&] { throw ParseError("bad date '" + std::string(text) + "', expected YYYY-MM"); };
	if (text.size() != 7 || text[4] != '-') fail();
	int y = 0;
	int m = 0;
	auto r1 = std::from_chars(text.data(), text.data() + 4, y);
	auto r2 = std::from_chars(text.data() + 5, text.data() + 7, m);
	if (r1.ec != std::errc() || r1.ptr != text.data() + 4) fail();
	if (r2.ec != std::errc() || r2.ptr != text.data() + 7) fail();
	if (m < 1 || m > 12) fail();
	return {y, m};
}

} // namespace sfb
