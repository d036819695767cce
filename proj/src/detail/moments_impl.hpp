#pragma once

#include <vector>

#include "detail/pipeline.hpp"
#include "lpinfer/bootmoments.hpp"

namespace lpinfer::detail {

// Moment computations on an existing pipeline with residuals in
// sorted-window layout ([lo2, hi2)). Defined in bootmoments.cpp.
BootstrapMoments gp_moments_impl(Pipeline& pipe, const std::vector<double>& eps);
BootstrapMoments lp_moments_impl(Pipeline& pipe, const std::vector<double>& eps);
BootstrapMoments mlp_moments_impl(Pipeline& pipe, const std::vector<double>& eps);

}  // namespace lpinfer::detail
