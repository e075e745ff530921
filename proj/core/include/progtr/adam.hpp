#pragma once

#include <cstdint>
#include <vector>

#include "progtr/params.hpp"

namespace progtr::ad {

/// Adam with bias correction. Moment slots are matched to parameters by
/// position, so the group handed to step() must keep the same composition
/// across the optimizer's lifetime.
class Adam {
public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    /// Applies one update from the accumulated grads, then zeroes them.
    void step(const std::vector<Parameter*>& group);
    void step(ParameterSet& params);

    std::int64_t step_count() const { return t_; }
    double lr() const { return lr_; }

private:
    double lr_, beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

/// All parameters of a set, in creation order.
std::vector<Parameter*> collect(ParameterSet& ps);
/// Concatenation across several sets (multi-user joint optimizer).
std::vector<Parameter*> collect(const std::vector<ParameterSet*>& sets);

} // namespace progtr::ad
