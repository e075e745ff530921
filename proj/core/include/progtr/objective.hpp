#pragma once

#include <vector>

#include "progtr/tape.hpp"

namespace progtr {

struct LossWeights {
    std::vector<double> alpha; // one weight per channel use
    double lambda = 1e3;
    double p_max = 1.0;
};

/// Batch-mean of -sum_i [d log d_hat + (1-d) log(1-d_hat)], natural log,
/// probabilities clamped to [1e-12, 1-1e-12].
ad::Var bce_step_loss(ad::Tape& t, ad::Var d, ad::Var d_hat);

/// Batch-mean of ||d - d_hat||^2 (sum over the b components).
ad::Var mse_step_loss(ad::Tape& t, ad::Var d, ad::Var d_hat);

/// Batch-mean |x|^2 of a [batch,2] symbol tensor.
ad::Var mean_power(ad::Tape& t, ad::Var x);

/// lambda * sum_t relu(mean_power[t] - p_max); zero subgradient at the cap.
ad::Var power_penalty(ad::Tape& t, const std::vector<ad::Var>& mean_power, const LossWeights& lw);

/// sum_t alpha_t * step_losses[t] + power_penalty.
ad::Var progtr_loss(ad::Tape& t, const std::vector<ad::Var>& step_losses,
                    const std::vector<ad::Var>& mean_power, const LossWeights& lw);

/// sum over users.
ad::Var multiuser_loss(ad::Tape& t, const std::vector<ad::Var>& per_user);

} // namespace progtr
