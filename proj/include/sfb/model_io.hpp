#pragma once

#include <string>

#include "sfb/neural.hpp"
#include "sfb/svr.hpp"

namespace sfb {

// Versioned line-oriented text formats. Doubles are written in shortest
// round-trip form, so reload -> predict is bitwise identical.

std::string svr_model_to_text(const SvrModel& model);
SvrModel svr_model_from_text(const std::string& text);

std::string rbf_model_to_text(const RbfNetModel& model);
RbfNetModel rbf_model_from_text(const std::string& text);

std::string mlp_model_to_text(const MlpModel& model);
MlpModel mlp_model_from_text(const std::string& text);

} // namespace sfb
