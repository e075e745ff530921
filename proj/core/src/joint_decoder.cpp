#include "progtr/joint_decoder.hpp"

#include <algorithm>
#include <numeric>

#include "progtr/errors.hpp"

namespace progtr {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

} // namespace

JointDecoder JointDecoder::for_scheme(const MultiUseScheme& s) {
    JointDecoder d;
    d.b_ = s.b;
    d.T_ = s.T;
    int k = s.constellation.bits_per_axis;
    for (int t = 0; t < s.T; ++t) {
        const std::vector<int>& idx = s.use_bits[static_cast<std::size_t>(t)];
        for (int axis = 0; axis < 2; ++axis) {
            Atom a;
            a.use = t;
            a.coord = axis;
            a.bits.assign(idx.begin() + axis * k, idx.begin() + (axis + 1) * k);
            a.pred.resize(static_cast<std::size_t>(1) << k);
            for (std::size_t label = 0; label < a.pred.size(); ++label) {
                double level = s.constellation.axis_level[label];
                a.pred[label] = axis == 0 ? std::complex<double>(level, 0.0)
                                          : std::complex<double>(0.0, level);
            }
            d.atoms_.push_back(std::move(a));
        }
    }
    d.build_components();
    return d;
}

JointDecoder JointDecoder::for_scheme_transformed(
    const MultiUseScheme& s,
    const std::function<std::complex<double>(std::complex<double>)>& transform) {
    JointDecoder d;
    d.b_ = s.b;
    d.T_ = s.T;
    int bps = s.constellation.bits_per_symbol();
    for (int t = 0; t < s.T; ++t) {
        Atom a;
        a.use = t;
        a.coord = 2;
        a.bits = s.use_bits[static_cast<std::size_t>(t)];
        a.pred.resize(static_cast<std::size_t>(1) << bps);
        for (std::size_t label = 0; label < a.pred.size(); ++label) {
            a.pred[label] = transform(s.constellation.points[label]);
        }
        d.atoms_.push_back(std::move(a));
    }
    d.build_components();
    return d;
}

void JointDecoder::build_components() {
    if (atoms_.empty()) throw DimensionError("joint decoder: empty atom table");
    comps_.resize(static_cast<std::size_t>(T_));
    solo_.resize(static_cast<std::size_t>(T_));
    latest_use_.assign(static_cast<std::size_t>(T_), std::vector<int>(static_cast<std::size_t>(b_), -1));

    auto components_for = [&](int use_lo, int use_hi) {
        UnionFind uf(b_);
        std::vector<bool> touched(static_cast<std::size_t>(b_), false);
        for (const Atom& a : atoms_) {
            if (a.use < use_lo || a.use > use_hi) continue;
            for (int bit : a.bits) touched[static_cast<std::size_t>(bit)] = true;
            for (std::size_t j = 1; j < a.bits.size(); ++j) uf.unite(a.bits[0], a.bits[j]);
        }
        std::vector<Component> comps;
        std::vector<int> comp_of(static_cast<std::size_t>(b_), -1);
        for (int bit = 0; bit < b_; ++bit) {
            if (!touched[static_cast<std::size_t>(bit)]) continue;
            int root = uf.find(bit);
            if (comp_of[static_cast<std::size_t>(root)] < 0) {
                comp_of[static_cast<std::size_t>(root)] = static_cast<int>(comps.size());
                comps.emplace_back();
            }
            comps[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(root)])].bits.push_back(bit);
        }
        for (std::size_t ai = 0; ai < atoms_.size(); ++ai) {
            const Atom& a = atoms_[ai];
            if (a.use < use_lo || a.use > use_hi) continue;
            int ci = comp_of[static_cast<std::size_t>(uf.find(a.bits[0]))];
            CompAtom ca;
            ca.atom_id = static_cast<int>(ai);
            Component& comp = comps[static_cast<std::size_t>(ci)];
            for (int bit : a.bits) {
                auto it = std::find(comp.bits.begin(), comp.bits.end(), bit);
                ca.bit_pos.push_back(static_cast<int>(it - comp.bits.begin()));
            }
            comp.atoms.push_back(std::move(ca));
        }
        return comps;
    };

    for (int t = 0; t < T_; ++t) {
        comps_[static_cast<std::size_t>(t)] = components_for(0, t);
        solo_[static_cast<std::size_t>(t)] = components_for(t, t);
        for (const Atom& a : atoms_) {
            if (a.use > t) continue;
            for (int bit : a.bits) {
                int& lu = latest_use_[static_cast<std::size_t>(t)][static_cast<std::size_t>(bit)];
                lu = std::max(lu, a.use);
            }
        }
    }
}

double JointDecoder::atom_distance(const Atom& a, int label, std::complex<double> y) const {
    const std::complex<double>& p = a.pred[static_cast<std::size_t>(label)];
    switch (a.coord) {
    case 0: {
        double d = y.real() - p.real();
        return d * d;
    }
    case 1: {
        double d = y.imag() - p.imag();
        return d * d;
    }
    default: {
        double dr = y.real() - p.real();
        double di = y.imag() - p.imag();
        return dr * dr + di * di;
    }
    }
}

void JointDecoder::decode(const std::complex<double>* received, int upto_t, int* bits_out) const {
    if (upto_t < 0 || upto_t >= T_) throw DimensionError("joint decoder: use index out of range");
    for (int i = 0; i < b_; ++i) bits_out[i] = -1;
    for (const Component& comp : comps_[static_cast<std::size_t>(upto_t)]) {
        std::size_t n_assign = static_cast<std::size_t>(1) << comp.bits.size();
        // distance tables per atom so the assignment loop is lookups only
        std::vector<std::vector<double>> table(comp.atoms.size());
        for (std::size_t ai = 0; ai < comp.atoms.size(); ++ai) {
            const Atom& a = atoms_[static_cast<std::size_t>(comp.atoms[ai].atom_id)];
            table[ai].resize(a.pred.size());
            for (std::size_t label = 0; label < a.pred.size(); ++label) {
                table[ai][label] = atom_distance(a, static_cast<int>(label), received[a.use]);
            }
        }
        std::size_t best = 0;
        double best_metric = 0.0;
        for (std::size_t assign = 0; assign < n_assign; ++assign) {
            double metric = 0.0;
            for (std::size_t ai = 0; ai < comp.atoms.size(); ++ai) {
                const CompAtom& ca = comp.atoms[ai];
                int label = 0;
                for (int pos : ca.bit_pos) label = (label << 1) | static_cast<int>((assign >> pos) & 1u);
                metric += table[ai][static_cast<std::size_t>(label)];
            }
            if (assign == 0 || metric < best_metric) {
                best_metric = metric;
                best = assign;
            }
        }
        for (std::size_t j = 0; j < comp.bits.size(); ++j) {
            bits_out[comp.bits[j]] = static_cast<int>((best >> j) & 1u);
        }
    }
}

void JointDecoder::decode_per_use(const std::complex<double>* received, int upto_t,
                                  int* bits_out) const {
    if (upto_t < 0 || upto_t >= T_) throw DimensionError("joint decoder: use index out of range");
    for (int i = 0; i < b_; ++i) bits_out[i] = -1;
    std::vector<int> tmp(static_cast<std::size_t>(b_));
    for (int t = upto_t; t >= 0; --t) {
        // isolated decode of use t; keep bits whose latest carrier is t
        for (int i = 0; i < b_; ++i) tmp[static_cast<std::size_t>(i)] = -1;
        for (const Component& comp : solo_[static_cast<std::size_t>(t)]) {
            std::size_t n_assign = static_cast<std::size_t>(1) << comp.bits.size();
            std::size_t best = 0;
            double best_metric = 0.0;
            for (std::size_t assign = 0; assign < n_assign; ++assign) {
                double metric = 0.0;
                for (const CompAtom& ca : comp.atoms) {
                    const Atom& a = atoms_[static_cast<std::size_t>(ca.atom_id)];
                    int label = 0;
                    for (int pos : ca.bit_pos) label = (label << 1) | static_cast<int>((assign >> pos) & 1u);
                    metric += atom_distance(a, label, received[a.use]);
                }
                if (assign == 0 || metric < best_metric) {
                    best_metric = metric;
                    best = assign;
                }
            }
            for (std::size_t j = 0; j < comp.bits.size(); ++j) {
                tmp[static_cast<std::size_t>(comp.bits[j])] = static_cast<int>((best >> j) & 1u);
            }
        }
        for (int i = 0; i < b_; ++i) {
            if (latest_use_[static_cast<std::size_t>(upto_t)][static_cast<std::size_t>(i)] == t) {
                bits_out[i] = tmp[static_cast<std::size_t>(i)];
            }
        }
    }
}

} // namespace progtr
