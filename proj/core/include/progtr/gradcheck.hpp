#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "progtr/params.hpp"
#include "progtr/rng.hpp"

namespace progtr::ad {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    std::size_t coords_checked = 0;
    std::vector<std::string> offenders; // params with any coordinate above tol
    bool ok(double tol) const { return max_rel_err < tol; }
};

/// Central finite differences against backward(). `f` must run the full
/// forward+backward deterministically (fresh tape) and return the loss; it
/// reads parameter values and accumulates grads into `params`.
///
/// If max_coords_per_param > 0, that many coordinates are sampled per
/// parameter (without replacement) using `rng`; 0 means every coordinate.
GradCheckReport gradient_check(const std::function<double(ParameterSet&)>& f, ParameterSet& params,
                               double eps = 1e-5, std::size_t max_coords_per_param = 0,
                               RngStream* rng = nullptr, double tol = 1e-4);

} // namespace progtr::ad
