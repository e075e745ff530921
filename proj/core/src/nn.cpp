#include "progtr/nn.hpp"

#include <cmath>

namespace progtr::nn {

Tensor init_weight(int fan_in, int fan_out, RngStream& rng) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Tensor w({fan_in, fan_out});
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-bound, bound);
    return w;
}

Var dense_forward(Tape& t, Var x, Var W, Var bias) {
    return t.add_rowvec(t.matmul(x, W), bias);
}

Dense Dense::create(ParameterSet& ps, const std::string& prefix, int in, int out, RngStream& rng) {
    Dense d;
    d.W = &ps.add(prefix + ".W", init_weight(in, out, rng));
    d.b = &ps.add(prefix + ".b", Tensor({out}));
    return d;
}

Var Dense::forward(Tape& t, Var x) const {
    return dense_forward(t, x, t.param(*W), t.param(*b));
}

GruCell GruCell::create(ParameterSet& ps, const std::string& prefix, int in, int state, RngStream& rng) {
    GruCell c;
    c.in = in;
    c.state = state;
    c.Wz = &ps.add(prefix + ".Wz", init_weight(in, state, rng));
    c.Uz = &ps.add(prefix + ".Uz", init_weight(state, state, rng));
    c.bz = &ps.add(prefix + ".bz", Tensor({state}));
    c.Wr = &ps.add(prefix + ".Wr", init_weight(in, state, rng));
    c.Ur = &ps.add(prefix + ".Ur", init_weight(state, state, rng));
    c.br = &ps.add(prefix + ".br", Tensor({state}));
    c.Wc = &ps.add(prefix + ".Wc", init_weight(in, state, rng));
    c.Uc = &ps.add(prefix + ".Uc", init_weight(state, state, rng));
    c.bc = &ps.add(prefix + ".bc", Tensor({state}));
    return c;
}

Var GruCell::forward(Tape& t, Var x, Var h_prev) const {
    Var z = t.sigmoid(t.add_rowvec(t.add(t.matmul(x, t.param(*Wz)), t.matmul(h_prev, t.param(*Uz))),
                                   t.param(*bz)));
    Var r = t.sigmoid(t.add_rowvec(t.add(t.matmul(x, t.param(*Wr)), t.matmul(h_prev, t.param(*Ur))),
                                   t.param(*br)));
    Var rh = t.mul(r, h_prev);
    Var c = t.tanh(t.add_rowvec(t.add(t.matmul(x, t.param(*Wc)), t.matmul(rh, t.param(*Uc))),
                                t.param(*bc)));
    Var one_minus_z = t.affine(z, -1.0, 1.0);
    return t.add(t.mul(one_minus_z, h_prev), t.mul(z, c));
}

GruStack GruStack::create(ParameterSet& ps, const std::string& prefix, int in, int state, int n_layers,
                          RngStream& rng) {
    GruStack s;
    for (int k = 0; k < n_layers; ++k) {
        int layer_in = (k == 0) ? in : state;
        s.layers.push_back(GruCell::create(ps, prefix + ".gru" + std::to_string(k), layer_in, state, rng));
    }
    return s;
}

Var GruStack::forward(Tape& t, Var x, std::vector<Var>& hs) const {
    Var cur = x;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        hs[k] = layers[k].forward(t, cur, hs[k]);
        cur = hs[k];
    }
    return cur;
}

std::vector<Var> GruStack::initial_state(Tape& t, int batch) const {
    std::vector<Var> hs;
    hs.reserve(layers.size());
    for (const GruCell& c : layers) {
        hs.push_back(t.constant(Tensor({batch, c.state}), "h0"));
    }
    return hs;
}

} // namespace progtr::nn
