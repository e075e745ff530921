#include "progtr/objective.hpp"

#include "progtr/errors.hpp"

namespace progtr {

using ad::Tape;
using ad::Var;

Var bce_step_loss(Tape& t, Var d, Var d_hat) {
    return t.bce(d, d_hat);
}

Var mse_step_loss(Tape& t, Var d, Var d_hat) {
    Var diff = t.sub(d, d_hat);
    Var sq = t.mul(diff, diff);
    int batch = sq.value().rows();
    return t.affine(t.sum(sq), 1.0 / static_cast<double>(batch), 0.0);
}

Var mean_power(Tape& t, Var x) {
    Var sq = t.mul(x, x);
    int batch = sq.value().rows();
    return t.affine(t.sum(sq), 1.0 / static_cast<double>(batch), 0.0);
}

Var power_penalty(Tape& t, const std::vector<Var>& mean_power, const LossWeights& lw) {
    std::vector<Var> overs;
    overs.reserve(mean_power.size());
    for (Var mp : mean_power) {
        overs.push_back(t.relu(t.affine(mp, 1.0, -lw.p_max)));
    }
    Var total = overs.size() == 1 ? overs[0] : t.add_list(overs);
    return t.affine(total, lw.lambda, 0.0);
}

Var progtr_loss(Tape& t, const std::vector<Var>& step_losses, const std::vector<Var>& mean_power,
                const LossWeights& lw) {
    if (step_losses.size() != lw.alpha.size()) {
        throw DimensionError("progtr_loss: alpha count != step count");
    }
    if (step_losses.size() != mean_power.size()) {
        throw DimensionError("progtr_loss: power count != step count");
    }
    std::vector<Var> terms;
    terms.reserve(step_losses.size() + 1);
    for (std::size_t i = 0; i < step_losses.size(); ++i) {
        terms.push_back(t.affine(step_losses[i], lw.alpha[i], 0.0));
    }
    terms.push_back(power_penalty(t, mean_power, lw));
    return t.add_list(terms);
}

Var multiuser_loss(Tape& t, const std::vector<Var>& per_user) {
    if (per_user.empty()) throw DimensionError("multiuser_loss: empty user list");
    return per_user.size() == 1 ? per_user[0] : t.add_list(per_user);
}

} // namespace progtr
