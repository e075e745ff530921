#include "progtr/adam.hpp"

#include <cmath>

#include "progtr/errors.hpp"

namespace progtr::ad {

void Adam::step(const std::vector<Parameter*>& group) {
    if (m_.empty()) {
        m_.reserve(group.size());
        v_.reserve(group.size());
        for (const Parameter* p : group) {
            m_.push_back(Tensor(p->value.shape()));
            v_.push_back(Tensor(p->value.shape()));
        }
    }
    if (m_.size() != group.size()) {
        throw DimensionError("adam: parameter group changed after first step");
    }
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < group.size(); ++i) {
        Parameter& p = *group[i];
        Tensor& m = m_[i];
        Tensor& v = v_[i];
        for (std::size_t k = 0; k < p.value.size(); ++k) {
            double g = p.grad[k];
            m[k] = beta1_ * m[k] + (1.0 - beta1_) * g;
            v[k] = beta2_ * v[k] + (1.0 - beta2_) * g * g;
            double mhat = m[k] / bc1;
            double vhat = v[k] / bc2;
            p.value[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
        p.grad.fill(0.0);
    }
}

void Adam::step(ParameterSet& params) {
    step(collect(params));
}

std::vector<Parameter*> collect(ParameterSet& ps) {
    std::vector<Parameter*> out;
    out.reserve(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) out.push_back(&ps[i]);
    return out;
}

std::vector<Parameter*> collect(const std::vector<ParameterSet*>& sets) {
    std::vector<Parameter*> out;
    for (ParameterSet* ps : sets) {
        for (std::size_t i = 0; i < ps->size(); ++i) out.push_back(&(*ps)[i]);
    }
    return out;
}

} // namespace progtr::ad
