#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "progtr/scheme.hpp"

namespace progtr {

/// Exact maximum-likelihood sequence decoder for a MultiUseScheme:
/// argmin over payloads of sum_{tau<=t} |y[tau] - s[tau](payload)|^2.
///
/// The metric splits into independent "atoms" (per-axis terms for plain QAM,
/// whole symbols when a nonlinearity couples the axes). Bits are grouped
/// into connected components via shared atoms and each component is searched
/// exhaustively, which reproduces the full joint argmin without enumerating
/// all 2^b payloads.
class JointDecoder {
public:
    /// Per-axis atoms; candidates are the scheme's own constellation points.
    static JointDecoder for_scheme(const MultiUseScheme& s);
    /// Whole-use atoms with a transform applied to every candidate symbol
    /// (amplifier distortion of a scaled or predistorted constellation).
    static JointDecoder for_scheme_transformed(
        const MultiUseScheme& s,
        const std::function<std::complex<double>(std::complex<double>)>& transform);

    int b() const { return b_; }
    int T() const { return T_; }

    /// Joint decode from received[0..upto_t]; bits not sent by use upto_t
    /// come back as -1.
    void decode(const std::complex<double>* received, int upto_t, int* bits_out) const;

    /// Ablation: each bit taken from an isolated demodulation of the latest
    /// use that carries it (no cross-use metric).
    void decode_per_use(const std::complex<double>* received, int upto_t, int* bits_out) const;

private:
    struct Atom {
        int use;
        int coord; // 0 = re, 1 = im, 2 = both
        std::vector<int> bits;
        std::vector<std::complex<double>> pred; // indexed by MSB-first label
    };
    struct CompAtom {
        int atom_id;
        std::vector<int> bit_pos; // position of each atom bit inside the component
    };
    struct Component {
        std::vector<int> bits; // payload bit indices
        std::vector<CompAtom> atoms;
    };

    void build_components();
    double atom_distance(const Atom& a, int label, std::complex<double> y) const;

    int b_ = 0, T_ = 0;
    std::vector<Atom> atoms_;
    std::vector<std::vector<Component>> comps_; // [t] -> components for uses <= t
    std::vector<std::vector<Component>> solo_;  // [t] -> components of use t alone
    std::vector<std::vector<int>> latest_use_;  // [t][bit] -> latest use <= t carrying bit, or -1
};

} // namespace progtr
