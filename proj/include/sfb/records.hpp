#pragma once

#include <string>

#include "sfb/yearmonth.hpp"

namespace sfb {

/// One out-of-sample forecast: model `model_id` stood at `origin` (the
/// last observed month) and predicted `horizon` months ahead.
struct ForecastRecord {
	std::string region;
	std::string model_id;
	int horizon = 1;
	YearMonth origin;
	double y_actual = 0.0;
	double y_hat = 0.0;
	double error = 0.0; // y_actual - y_hat

	YearMonth target() const { return origin.plus(horizon); }
};

} // namespace sfb
