#include "sfb/csv.hpp"

#include <charconv>
#include <system_error>

#include "sfb/errors.hpp"

namespace sfb {

std::string format_double(double v) {
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof(buf), v);
	return std::string(buf, res.ptr);
}

double parse_double_strict(std::string_view field, std::size_t row_for_error) {
	double v = 0.0;
	const char* first = field.data();
	const char* last = field.data() + field.size();
	const auto res = std::from_chars(first, last, v);
	if (res.ec != std::errc() || res.ptr != last || field.empty())
		throw ParseError("row " + std::to_string(row_for_error) + ": not a plain number: '" +
		                 std::string(field) + "'");
	return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
	std::vector<std::string_view> out;
	std::size_t pos = 0;
	while (true) {
		const std::size_t comma = line.find(',', pos);
		if (comma == std::string_view::npos) {
			out.push_back(line.substr(pos));
			break;
		}
		out.push_back(line.substr(pos, comma - pos));
		pos = comma + 1;
	}
	return out;
}

} // namespace sfb
