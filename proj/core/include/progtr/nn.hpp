#pragma once

#include <string>
#include <vector>

#include "progtr/params.hpp"
#include "progtr/rng.hpp"
#include "progtr/tape.hpp"

namespace progtr::nn {

using ad::Parameter;
using ad::ParameterSet;
using ad::Tape;
using ad::Tensor;
using ad::Var;

/// Weights ~ U(-1/sqrt(fan_in), +1/sqrt(fan_in)), biases zero.
Tensor init_weight(int fan_in, int fan_out, RngStream& rng);

/// y = x W + bias, recorded on the tape.
Var dense_forward(Tape& t, Var x, Var W, Var bias);

/// Fully connected layer: holds pointers into a ParameterSet.
struct Dense {
    Parameter* W = nullptr;
    Parameter* b = nullptr;

    static Dense create(ParameterSet& ps, const std::string& prefix, int in, int out, RngStream& rng);
    Var forward(Tape& t, Var x) const;
};

/// One gated recurrent cell. Update convention (fixed project-wide):
///   z = sigmoid(x Wz + h Uz + bz)
///   r = sigmoid(x Wr + h Ur + br)
///   c = tanh(x Wc + (r .* h) Uc + bc)
///   h' = (1 - z) .* h + z .* c
/// so with all-zero parameters h' = 0.5 h.
struct GruCell {
    Parameter *Wz = nullptr, *Uz = nullptr, *bz = nullptr;
    Parameter *Wr = nullptr, *Ur = nullptr, *br = nullptr;
    Parameter *Wc = nullptr, *Uc = nullptr, *bc = nullptr;
    int in = 0, state = 0;

    static GruCell create(ParameterSet& ps, const std::string& prefix, int in, int state, RngStream& rng);
    Var forward(Tape& t, Var x, Var h_prev) const;
};

/// Stack of GRU cells; layer k feeds layer k+1's input.
struct GruStack {
    std::vector<GruCell> layers;

    static GruStack create(ParameterSet& ps, const std::string& prefix, int in, int state, int n_layers,
                           RngStream& rng);
    /// hs holds one state Var per layer; replaced with the new states.
    Var forward(Tape& t, Var x, std::vector<Var>& hs) const;
    int state_size() const { return layers.empty() ? 0 : layers.front().state; }
    /// Zero initial states for a given batch size.
    std::vector<Var> initial_state(Tape& t, int batch) const;
};

} // namespace progtr::nn
