#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "progtr/params.hpp"
#include "progtr/tensor.hpp"

namespace progtr::ad {

class Tape;
using NodeId = std::int32_t;

/// Lightweight handle to a tape node.
class Var {
public:
    Var() = default;
    const Tensor& value() const;
    NodeId id() const { return id_; }
    Tape* tape() const { return tape_; }
    bool valid() const { return tape_ != nullptr; }

private:
    friend class Tape;
    Var(Tape* t, NodeId id) : tape_(t), id_(id) {}
    Tape* tape_ = nullptr;
    NodeId id_ = -1;
};

/// Reverse-mode tape. Nodes are appended in execution order (which is a
/// topological order by construction); backward() walks them in exact
/// reverse. Forward values are finite-checked as they are produced, and a
/// NaN/Inf anywhere raises NumericError naming the offending node.
///
/// One tape records one forward pass; tapes are not thread-safe and are
/// meant to be cleared (or discarded) per training iteration.
class Tape {
public:
    using BackwardFn = std::function<void(Tape&, NodeId)>;

    // ---- leaves ----
    Var constant(Tensor v, const char* label = "const");
    Var param(Parameter& p);

    // ---- primitives ----
    Var matmul(Var a, Var b);              // [m,k] x [k,n] -> [m,n]
    Var add(Var a, Var b);                 // same shape
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);                 // elementwise
    Var add_rowvec(Var a, Var bias);       // [m,n] + [n], broadcast over rows
    Var affine(Var a, double k, double c); // k*a + c elementwise
    Var sigmoid(Var a);                    // input clamped to [-30,30]
    Var tanh(Var a);                       // input clamped to [-30,30]
    Var relu(Var a);                       // subgradient 0 at the kink
    Var sum(Var a);                        // -> scalar
    Var mean(Var a);                       // -> scalar
    Var concat_cols(const std::vector<Var>& xs);
    Var add_list(const std::vector<Var>& xs);
    Var complex_scale(Var x, double h_re, double h_im); // [B,2] times constant h
    Var bce(Var target, Var probs);        // batch-mean, sum over columns; probs clamped to [1e-12, 1-1e-12]

    /// Escape hatch for ops with bespoke Jacobians (the amplifier model uses
    /// it, and tests inject faults through it).
    Var custom(const std::vector<Var>& inputs, Tensor out, BackwardFn back, const char* name);

    /// Populate gradients of `loss` (must be scalar) w.r.t. every node, then
    /// accumulate into the grad of every Parameter leaf.
    void backward(Var loss);

    const Tensor& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    /// Gradient buffer for a node, allocated (zeroed) on first touch.
    Tensor& grad(NodeId id);
    bool has_grad(NodeId id) const { return !grads_[static_cast<std::size_t>(id)].shape().empty(); }

    std::size_t node_count() const { return nodes_.size(); }
    void clear();

    /// Forward finite-checking; on by default.
    bool check_finite = true;

private:
    struct Node {
        const char* op;
        std::string label; // param name or caller label, may be empty
        Tensor value;
        std::vector<NodeId> inputs;
        BackwardFn back; // empty for leaves
        Parameter* param = nullptr;
    };

    Var push(const char* op, Tensor value, std::vector<NodeId> inputs, BackwardFn back,
             std::string label = {}, Parameter* param = nullptr);
    std::string describe(NodeId id) const;
    [[noreturn]] void fail_numeric(NodeId id, const char* where) const;

    std::vector<Node> nodes_;
    std::vector<Tensor> grads_; // parallel to nodes_, empty shape = unallocated
    std::vector<NodeId> param_leaves_;
};

} // namespace progtr::ad
