#include "progtr/tape.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "progtr/errors.hpp"

namespace progtr::ad {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

CMap as_mat(const Tensor& t) {
    return CMap(t.data(), t.rows(), t.cols());
}

MMap as_mat(Tensor& t) {
    return MMap(t.data(), t.rows(), t.cols());
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
}

constexpr double kActClamp = 30.0;
constexpr double kProbEps = 1e-12;

} // namespace

const Tensor& Var::value() const {
    return tape_->value(id_);
}

Var Tape::push(const char* op, Tensor value, std::vector<NodeId> inputs, BackwardFn back,
               std::string label, Parameter* param) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    if (check_finite && !value.all_finite()) {
        Node probe{op, std::move(label), std::move(value), std::move(inputs), nullptr, param};
        nodes_.push_back(std::move(probe));
        grads_.emplace_back();
        fail_numeric(id, "forward");
    }
    nodes_.push_back(Node{op, std::move(label), std::move(value), std::move(inputs), std::move(back), param});
    grads_.emplace_back();
    if (param != nullptr) param_leaves_.push_back(id);
    return Var(this, id);
}

std::string Tape::describe(NodeId id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    std::ostringstream os;
    os << "node " << id << " op=" << n.op;
    if (!n.label.empty()) os << " (" << n.label << ")";
    os << " shape=" << n.value.shape_str();
    return os.str();
}

void Tape::fail_numeric(NodeId id, const char* where) const {
    throw NumericError(std::string("non-finite value in ") + where + " at " + describe(id));
}

Tensor& Tape::grad(NodeId id) {
    Tensor& g = grads_[static_cast<std::size_t>(id)];
    if (g.shape().empty()) {
        g = Tensor(nodes_[static_cast<std::size_t>(id)].value.shape());
    }
    return g;
}

void Tape::clear() {
    nodes_.clear();
    grads_.clear();
    param_leaves_.clear();
}

Var Tape::constant(Tensor v, const char* label) {
    return push("const", std::move(v), {}, nullptr, label);
}

Var Tape::param(Parameter& p) {
    return push("param", p.value, {}, nullptr, p.name, &p);
}

Var Tape::matmul(Var a, Var b) {
    const Tensor& av = value(a.id());
    const Tensor& bv = value(b.id());
    if (av.cols() != bv.rows()) {
        throw DimensionError("matmul: inner dims " + av.shape_str() + " x " + bv.shape_str());
    }
    Tensor out({av.rows(), bv.cols()});
    as_mat(out).noalias() = as_mat(av) * as_mat(bv);
    NodeId ia = a.id(), ib = b.id();
    return push("matmul", std::move(out), {ia, ib}, [ia, ib](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        as_mat(t.grad(ia)).noalias() += as_mat(g) * as_mat(t.value(ib)).transpose();
        as_mat(t.grad(ib)).noalias() += as_mat(t.value(ia)).transpose() * as_mat(g);
    });
}

Var Tape::add(Var a, Var b) {
    const Tensor& av = value(a.id());
    const Tensor& bv = value(b.id());
    require_same_shape(av, bv, "add");
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = av.data()[i] + bv.data()[i];
    NodeId ia = a.id(), ib = b.id();
    return push("add", std::move(out), {ia, ib}, [ia, ib](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        Tensor& ga = t.grad(ia);
        Tensor& gb = t.grad(ib);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga.data()[i] += g.data()[i];
            gb.data()[i] += g.data()[i];
        }
    });
}

Var Tape::sub(Var a, Var b) {
    const Tensor& av = value(a.id());
    const Tensor& bv = value(b.id());
    require_same_shape(av, bv, "sub");
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = av.data()[i] - bv.data()[i];
    NodeId ia = a.id(), ib = b.id();
    return push("sub", std::move(out), {ia, ib}, [ia, ib](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        Tensor& ga = t.grad(ia);
        Tensor& gb = t.grad(ib);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga.data()[i] += g.data()[i];
            gb.data()[i] -= g.data()[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    const Tensor& av = value(a.id());
    const Tensor& bv = value(b.id());
    require_same_shape(av, bv, "mul");
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = av.data()[i] * bv.data()[i];
    NodeId ia = a.id(), ib = b.id();
    return push("mul", std::move(out), {ia, ib}, [ia, ib](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        const Tensor& av = t.value(ia);
        const Tensor& bv = t.value(ib);
        Tensor& ga = t.grad(ia);
        Tensor& gb = t.grad(ib);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga.data()[i] += g.data()[i] * bv.data()[i];
            gb.data()[i] += g.data()[i] * av.data()[i];
        }
    });
}

Var Tape::add_rowvec(Var a, Var bias) {
    const Tensor& av = value(a.id());
    const Tensor& bv = value(bias.id());
    if (bv.size() != static_cast<std::size_t>(av.cols())) {
        throw DimensionError("add_rowvec: " + av.shape_str() + " + " + bv.shape_str());
    }
    Tensor out(av.shape());
    int rows = av.rows(), cols = av.cols();
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out.data()[static_cast<std::size_t>(r) * cols + c] =
                av.data()[static_cast<std::size_t>(r) * cols + c] + bv.data()[c];
        }
    }
    NodeId ia = a.id(), ib = bias.id();
    return push("add_rowvec", std::move(out), {ia, ib}, [ia, ib](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        Tensor& ga = t.grad(ia);
        Tensor& gb = t.grad(ib);
        int rows = g.rows(), cols = g.cols();
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) {
                double gv = g.data()[static_cast<std::size_t>(r) * cols + c];
                ga.data()[static_cast<std::size_t>(r) * cols + c] += gv;
                gb.data()[c] += gv;
            }
        }
    });
}

Var Tape::affine(Var a, double k, double c) {
    const Tensor& av = value(a.id());
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = k * av.data()[i] + c;
    NodeId ia = a.id();
    return push("affine", std::move(out), {ia}, [ia, k](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        Tensor& ga = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) ga.data()[i] += k * g.data()[i];
    });
}

Var Tape::sigmoid(Var a) {
    const Tensor& av = value(a.id());
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double x = std::clamp(av.data()[i], -kActClamp, kActClamp);
        out.data()[i] = 1.0 / (1.0 + std::exp(-x));
    }
    NodeId ia = a.id();
    return push("sigmoid", std::move(out), {ia}, [ia](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        const Tensor& y = t.value(self);
        Tensor& ga = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double s = y.data()[i];
            ga.data()[i] += g.data()[i] * s * (1.0 - s);
        }
    });
}

Var Tape::tanh(Var a) {
    const Tensor& av = value(a.id());
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double x = std::clamp(av.data()[i], -kActClamp, kActClamp);
        out.data()[i] = std::tanh(x);
    }
    NodeId ia = a.id();
    return push("tanh", std::move(out), {ia}, [ia](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        const Tensor& y = t.value(self);
        Tensor& ga = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double th = y.data()[i];
            ga.data()[i] += g.data()[i] * (1.0 - th * th);
        }
    });
}

Var Tape::relu(Var a) {
    const Tensor& av = value(a.id());
    Tensor out(av.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = av.data()[i] > 0.0 ? av.data()[i] : 0.0;
    NodeId ia = a.id();
    return push("relu", std::move(out), {ia}, [ia](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        const Tensor& x = t.value(ia);
        Tensor& ga = t.grad(ia);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (x.data()[i] > 0.0) ga.data()[i] += g.data()[i];
        }
    });
}

Var Tape::sum(Var a) {
    const Tensor& av = value(a.id());
    double acc = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) acc += av.data()[i];
    NodeId ia = a.id();
    return push("sum", Tensor::scalar(acc), {ia}, [ia](Tape& t, NodeId self) {
        double g = t.grad(self).data()[0];
        Tensor& ga = t.grad(ia);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g;
    });
}

Var Tape::mean(Var a) {
    const Tensor& av = value(a.id());
    double acc = 0.0;
    for (std::size_t i = 0; i < av.size(); ++i) acc += av.data()[i];
    double inv = 1.0 / static_cast<double>(av.size());
    NodeId ia = a.id();
    return push("mean", Tensor::scalar(acc * inv), {ia}, [ia, inv](Tape& t, NodeId self) {
        double g = t.grad(self).data()[0] * inv;
        Tensor& ga = t.grad(ia);
        for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g;
    });
}

Var Tape::concat_cols(const std::vector<Var>& xs) {
    if (xs.empty()) throw DimensionError("concat_cols: empty input list");
    int rows = value(xs[0].id()).rows();
    int total = 0;
    std::vector<NodeId> ids;
    std::vector<int> widths;
    ids.reserve(xs.size());
    widths.reserve(xs.size());
    for (const Var& x : xs) {
        const Tensor& v = value(x.id());
        if (v.rows() != rows) {
            throw DimensionError("concat_cols: row mismatch " + v.shape_str());
        }
        ids.push_back(x.id());
        widths.push_back(v.cols());
        total += v.cols();
    }
    Tensor out({rows, total});
    int off = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const Tensor& v = value(ids[k]);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < widths[k]; ++c) {
                out.at(r, off + c) = v.at(r, c);
            }
        }
        off += widths[k];
    }
    return push("concat_cols", std::move(out), ids, [ids, widths](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        int rows = g.rows();
        int off = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            Tensor& gi = t.grad(ids[k]);
            for (int r = 0; r < rows; ++r) {
                for (int c = 0; c < widths[k]; ++c) {
                    gi.at(r, c) += g.at(r, off + c);
                }
            }
            off += widths[k];
        }
    });
}

Var Tape::add_list(const std::vector<Var>& xs) {
    if (xs.empty()) throw DimensionError("add_list: empty input list");
    const Tensor& first = value(xs[0].id());
    Tensor out(first.shape());
    out.fill(0.0);
    std::vector<NodeId> ids;
    ids.reserve(xs.size());
    for (const Var& x : xs) {
        const Tensor& v = value(x.id());
        require_same_shape(first, v, "add_list");
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += v.data()[i];
        ids.push_back(x.id());
    }
    return push("add_list", std::move(out), ids, [ids](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        for (NodeId id : ids) {
            Tensor& gi = t.grad(id);
            for (std::size_t i = 0; i < g.size(); ++i) gi.data()[i] += g.data()[i];
        }
    });
}

Var Tape::complex_scale(Var x, double h_re, double h_im) {
    const Tensor& xv = value(x.id());
    if (xv.cols() != 2) throw DimensionError("complex_scale: want [B,2], got " + xv.shape_str());
    int rows = xv.rows();
    Tensor out({rows, 2});
    for (int r = 0; r < rows; ++r) {
        double re = xv.at(r, 0), im = xv.at(r, 1);
        out.at(r, 0) = h_re * re - h_im * im;
        out.at(r, 1) = h_re * im + h_im * re;
    }
    NodeId ix = x.id();
    return push("complex_scale", std::move(out), {ix}, [ix, h_re, h_im](Tape& t, NodeId self) {
        const Tensor& g = t.grad(self);
        Tensor& gx = t.grad(ix);
        int rows = g.rows();
        // adjoint of multiplication by h is multiplication by conj(h)
        for (int r = 0; r < rows; ++r) {
            double gr = g.at(r, 0), gi = g.at(r, 1);
            gx.at(r, 0) += h_re * gr + h_im * gi;
            gx.at(r, 1) += h_re * gi - h_im * gr;
        }
    });
}

Var Tape::bce(Var target, Var probs) {
    const Tensor& tv = value(target.id());
    const Tensor& pv = value(probs.id());
    require_same_shape(tv, pv, "bce");
    int rows = pv.rows();
    double acc = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        double p = std::clamp(pv.data()[i], kProbEps, 1.0 - kProbEps);
        double y = tv.data()[i];
        acc += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
    }
    double inv_rows = 1.0 / static_cast<double>(rows);
    NodeId it = target.id(), ip = probs.id();
    return push("bce", Tensor::scalar(acc * inv_rows), {it, ip},
                [it, ip, inv_rows](Tape& t, NodeId self) {
                    double g = t.grad(self).data()[0] * inv_rows;
                    const Tensor& tv = t.value(it);
                    const Tensor& pv = t.value(ip);
                    Tensor& gp = t.grad(ip);
                    for (std::size_t i = 0; i < pv.size(); ++i) {
                        double p = std::clamp(pv.data()[i], kProbEps, 1.0 - kProbEps);
                        double y = tv.data()[i];
                        gp.data()[i] += g * (-(y / p) + (1.0 - y) / (1.0 - p));
                    }
                });
}

Var Tape::custom(const std::vector<Var>& inputs, Tensor out, BackwardFn back, const char* name) {
    std::vector<NodeId> ids;
    ids.reserve(inputs.size());
    for (const Var& v : inputs) ids.push_back(v.id());
    return push(name, std::move(out), std::move(ids), std::move(back));
}

void Tape::backward(Var loss) {
    if (loss.tape() != this) throw DimensionError("backward: var from a different tape");
    const Tensor& lv = value(loss.id());
    if (lv.size() != 1) {
        throw DimensionError("backward: loss must be scalar, got " + lv.shape_str());
    }
    grad(loss.id()).data()[0] = 1.0;
    for (NodeId id = loss.id(); id >= 0; --id) {
        Node& n = nodes_[static_cast<std::size_t>(id)];
        if (!n.back) continue;
        if (!has_grad(id)) continue; // node does not feed the loss
        n.back(*this, id);
    }
    if (check_finite) {
        for (NodeId id = 0; id <= loss.id(); ++id) {
            if (has_grad(id) && !grads_[static_cast<std::size_t>(id)].all_finite()) {
                fail_numeric(id, "backward");
            }
        }
    }
    for (NodeId id : param_leaves_) {
        if (!has_grad(id)) continue;
        Node& n = nodes_[static_cast<std::size_t>(id)];
        const Tensor& g = grads_[static_cast<std::size_t>(id)];
        if (n.param->grad.shape().empty()) {
            n.param->grad = Tensor(n.param->value.shape());
        }
        for (std::size_t i = 0; i < g.size(); ++i) n.param->grad.data()[i] += g.data()[i];
    }
}

} // namespace progtr::ad
