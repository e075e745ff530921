#include "progtr/channel.hpp"

#include <cmath>

#include "progtr/errors.hpp"

namespace progtr {

using ad::Tape;
using ad::Tensor;
using ad::Var;

double snr_to_noise_var(double snr_db, double p_max) {
    if (p_max <= 0.0) throw DimensionError("snr_to_noise_var: p_max must be positive");
    return p_max / std::pow(10.0, snr_db / 10.0);
}

Tensor draw_noise(int batch, double noise_var, RngStream& rng) {
    if (noise_var < 0.0) throw DimensionError("draw_noise: negative variance");
    Tensor n({batch, 2});
    double sigma_dim = std::sqrt(noise_var / 2.0);
    for (int r = 0; r < batch; ++r) {
        n.at(r, 0) = sigma_dim * rng.normal();
        n.at(r, 1) = sigma_dim * rng.normal();
    }
    return n;
}

Var awgn_apply(Tape& t, Var x, std::complex<double> h, double noise_var, RngStream& rng) {
    Var hx = t.complex_scale(x, h.real(), h.imag());
    if (noise_var == 0.0) return hx;
    int batch = hx.value().rows();
    return t.add(hx, t.constant(draw_noise(batch, noise_var, rng), "noise"));
}

Var twta_distort(Tape& t, Var x, const TwtaParams& p) {
    const Tensor& xv = t.value(x.id());
    if (xv.cols() != 2) throw DimensionError("twta_distort: want [B,2], got " + xv.shape_str());
    int batch = xv.rows();
    // Cartesian form: with q = |x|^2, out = s(q) R(Psi(q)) x where
    // s(q) = a_r / (1 + b_r q) so A(rho) = s * rho. Smooth at the origin.
    Tensor out({batch, 2});
    for (int r = 0; r < batch; ++r) {
        double re = xv.at(r, 0), im = xv.at(r, 1);
        double q = re * re + im * im;
        double s = p.alpha_rho / (1.0 + p.beta_rho * q);
        double psi = p.alpha_psi * q / (1.0 + p.beta_psi * q);
        double cp = std::cos(psi), sp = std::sin(psi);
        out.at(r, 0) = s * (cp * re - sp * im);
        out.at(r, 1) = s * (sp * re + cp * im);
    }
    ad::NodeId ix = x.id();
    TwtaParams pp = p;
    return t.custom(
        {x}, std::move(out),
        [ix, pp](Tape& tp, ad::NodeId self) {
            const Tensor& g = tp.grad(self);
            const Tensor& xv = tp.value(ix);
            Tensor& gx = tp.grad(ix);
            int batch = xv.rows();
            for (int r = 0; r < batch; ++r) {
                double re = xv.at(r, 0), im = xv.at(r, 1);
                double q = re * re + im * im;
                double denom_s = 1.0 + pp.beta_rho * q;
                double denom_p = 1.0 + pp.beta_psi * q;
                double s = pp.alpha_rho / denom_s;
                double psi = pp.alpha_psi * q / denom_p;
                double ds_dq = -pp.alpha_rho * pp.beta_rho / (denom_s * denom_s);
                double dpsi_dq = pp.alpha_psi / (denom_p * denom_p);
                double cp = std::cos(psi), sp = std::sin(psi);
                double u = cp * re - sp * im; // rotated coordinates
                double v = sp * re + cp * im;
                // d out_re / d(re,im) etc.; q contributes through s and psi
                double j11 = ds_dq * 2.0 * re * u + s * (cp - v * dpsi_dq * 2.0 * re);
                double j12 = ds_dq * 2.0 * im * u + s * (-sp - v * dpsi_dq * 2.0 * im);
                double j21 = ds_dq * 2.0 * re * v + s * (sp + u * dpsi_dq * 2.0 * re);
                double j22 = ds_dq * 2.0 * im * v + s * (cp + u * dpsi_dq * 2.0 * im);
                double gr = g.at(r, 0), gi = g.at(r, 1);
                gx.at(r, 0) += j11 * gr + j21 * gi;
                gx.at(r, 1) += j12 * gr + j22 * gi;
            }
        },
        "twta");
}

Var mac_combine(Tape& t, const std::vector<Var>& xs, const std::vector<std::complex<double>>& hs,
                double noise_var, RngStream& rng) {
    if (xs.empty() || xs.size() != hs.size()) {
        throw DimensionError("mac_combine: need matching non-empty xs/hs");
    }
    std::vector<Var> scaled;
    scaled.reserve(xs.size());
    for (std::size_t m = 0; m < xs.size(); ++m) {
        scaled.push_back(t.complex_scale(xs[m], hs[m].real(), hs[m].imag()));
    }
    Var sum = scaled.size() == 1 ? scaled[0] : t.add_list(scaled);
    if (noise_var == 0.0) return sum;
    int batch = sum.value().rows();
    return t.add(sum, t.constant(draw_noise(batch, noise_var, rng), "noise"));
}

Var channel_apply(Tape& t, const ChannelSpec& spec, const std::vector<Var>& xs, double noise_var,
                  RngStream& rng) {
    if (xs.size() != spec.h.size()) {
        throw DimensionError("channel_apply: user count mismatch");
    }
    switch (spec.variant) {
    case ChannelVariant::awgn:
        return awgn_apply(t, xs.at(0), spec.h.at(0), noise_var, rng);
    case ChannelVariant::twta_awgn: {
        Var amplified = twta_distort(t, xs.at(0), spec.twta);
        return awgn_apply(t, amplified, spec.h.at(0), noise_var, rng);
    }
    case ChannelVariant::mac_awgn:
        return mac_combine(t, xs, spec.h, noise_var, rng);
    }
    throw DimensionError("channel_apply: unknown variant");
}

double twta_amplitude(double rho, const TwtaParams& p) {
    return p.alpha_rho * rho / (1.0 + p.beta_rho * rho * rho);
}

double twta_phase(double rho, const TwtaParams& p) {
    double q = rho * rho;
    return p.alpha_psi * q / (1.0 + p.beta_psi * q);
}

std::complex<double> twta_apply(std::complex<double> x, const TwtaParams& p) {
    double rho = std::abs(x);
    if (rho == 0.0) return {0.0, 0.0};
    double a = twta_amplitude(rho, p);
    double phi = std::arg(x) + twta_phase(rho, p);
    return std::polar(a, phi);
}

double twta_peak_input(const TwtaParams& p) { return 1.0 / std::sqrt(p.beta_rho); }

double twta_peak_output(const TwtaParams& p) { return p.alpha_rho / (2.0 * std::sqrt(p.beta_rho)); }

} // namespace progtr
