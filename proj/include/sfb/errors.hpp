#pragma once

#include <stdexcept>
#include <string>

namespace sfb {

struct Error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

// data ingestion
struct ParseError : Error { using Error::Error; };
struct GapError : Error { using Error::Error; };
struct EmptySeriesError : Error { using Error::Error; };
struct PartitionError : Error { using Error::Error; };
struct InsufficientDataError : Error { using Error::Error; };

// numerics
struct DimError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };

struct ConvergenceError : Error {
	ConvergenceError(const std::string& what, double gap) : Error(what), final_gap(gap) {}
	double final_gap = 0.0;
};
struct SearchError : Error { using Error::Error; };
struct DegenerateClusterError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };
struct SelectError : Error { using Error::Error; };

// metrics
struct ZeroActualError : Error { using Error::Error; };
struct DegenerateBaselineError : Error { using Error::Error; };
struct AlignmentError : Error { using Error::Error; };
struct VarianceError : Error { using Error::Error; };

// harness / cli
struct CellError : Error {
	CellError(const std::string& what, std::size_t origin) : Error(what), origin_index(origin) {}
	std::size_t origin_index = 0;
};
struct ConfigError : Error {
	ConfigError(const std::string& field, const std::string& what)
	    : Error(field + ": " + what), field_name(field) {}
	std::string field_name;
};
struct IoError : Error { using Error::Error; };

} // namespace sfb
