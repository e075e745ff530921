#pragma once

#include <complex>
#include <vector>

#include "progtr/rng.hpp"
#include "progtr/tape.hpp"

namespace progtr {

enum class ChannelVariant { awgn, twta_awgn, mac_awgn };

/// Saleh-model amplifier: AM/AM A(rho) = a_r rho / (1 + b_r rho^2),
/// AM/PM Psi(rho) = a_p rho^2 / (1 + b_p rho^2).
struct TwtaParams {
    double alpha_rho = 2.1587;
    double beta_rho = 1.1517;
    double alpha_psi = 4.003;
    double beta_psi = 9.1040;
};

struct ChannelSpec {
    ChannelVariant variant = ChannelVariant::awgn;
    std::vector<std::complex<double>> h = {{1.0, 0.0}}; // one entry per Tx
    TwtaParams twta;

    int num_users() const { return static_cast<int>(h.size()); }
};

/// Total complex noise variance for SNR = p_max / sigma^2; each real
/// dimension carries sigma^2 / 2.
double snr_to_noise_var(double snr_db, double p_max);

/// Draw circular complex Gaussian noise as a [batch,2] tensor.
ad::Tensor draw_noise(int batch, double noise_var, RngStream& rng);

/// y = h x + n. Noise enters as a tape constant (not differentiated).
ad::Var awgn_apply(ad::Tape& t, ad::Var x, std::complex<double> h, double noise_var, RngStream& rng);

/// Amplifier distortion of a [batch,2] symbol batch; smooth everywhere
/// including the origin (Jacobian -> alpha_rho * I as x -> 0).
ad::Var twta_distort(ad::Tape& t, ad::Var x, const TwtaParams& p);

/// y = sum_m h_m x_m + n with a single noise draw.
ad::Var mac_combine(ad::Tape& t, const std::vector<ad::Var>& xs,
                    const std::vector<std::complex<double>>& hs, double noise_var, RngStream& rng);

/// Dispatch on spec.variant; xs holds one symbol batch per user.
ad::Var channel_apply(ad::Tape& t, const ChannelSpec& spec, const std::vector<ad::Var>& xs,
                      double noise_var, RngStream& rng);

// ---- plain (non-tape) helpers, used by baselines and predistortion ----
double twta_amplitude(double rho, const TwtaParams& p); // A(rho)
double twta_phase(double rho, const TwtaParams& p);     // Psi(rho), radians
std::complex<double> twta_apply(std::complex<double> x, const TwtaParams& p);
double twta_peak_input(const TwtaParams& p);  // argmax of A: 1/sqrt(beta_rho)
double twta_peak_output(const TwtaParams& p); // A at the peak: alpha_rho/(2 sqrt(beta_rho))

} // namespace progtr
