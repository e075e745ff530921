#include "progtr/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace progtr::ad {

namespace {

// relative error with an absolute floor so near-zero pairs do not blow up
double rel_err(double a, double b) {
    double denom = std::max({std::abs(a), std::abs(b), 1e-8});
    return std::abs(a - b) / denom;
}

} // namespace

GradCheckReport gradient_check(const std::function<double(ParameterSet&)>& f, ParameterSet& params,
                               double eps, std::size_t max_coords_per_param, RngStream* rng,
                               double tol) {
    GradCheckReport report;

    params.zero_grads();
    f(params);
    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) analytic.push_back(params[i].grad);
    params.zero_grads();

    for (std::size_t i = 0; i < params.size(); ++i) {
        Parameter& p = params[i];
        std::size_t n = p.value.size();
        std::vector<std::size_t> coords;
        if (max_coords_per_param == 0 || n <= max_coords_per_param) {
            coords.resize(n);
            for (std::size_t k = 0; k < n; ++k) coords[k] = k;
        } else {
            // sample without replacement via partial Fisher-Yates
            std::vector<std::size_t> all(n);
            for (std::size_t k = 0; k < n; ++k) all[k] = k;
            for (std::size_t k = 0; k < max_coords_per_param; ++k) {
                std::size_t j = k + static_cast<std::size_t>(rng->below(n - k));
                std::swap(all[k], all[j]);
            }
            coords.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(max_coords_per_param));
        }
        bool offending = false;
        for (std::size_t k : coords) {
            double orig = p.value[k];
            p.value[k] = orig + eps;
            double lp = f(params);
            params.zero_grads();
            p.value[k] = orig - eps;
            double lm = f(params);
            params.zero_grads();
            p.value[k] = orig;
            double numeric = (lp - lm) / (2.0 * eps);
            double err = rel_err(analytic[i][k], numeric);
            ++report.coords_checked;
            if (err > report.max_rel_err) {
                report.max_rel_err = err;
                report.worst_param = p.name;
                report.worst_index = k;
            }
            if (err >= tol) offending = true;
        }
        if (offending) report.offenders.push_back(p.name);
    }
    return report;
}

} // namespace progtr::ad
