#include "progtr/system.hpp"

#include <cmath>

#include "progtr/analog_baseline.hpp"
#include "progtr/errors.hpp"
#include "progtr/predistortion.hpp"

namespace progtr {

using ad::Tape;
using ad::Tensor;

namespace {

Tensor hard_from_soft(const Tensor& soft) {
    Tensor hard(soft.shape());
    // threshold 0.5, ties toward 0
    for (std::size_t i = 0; i < soft.size(); ++i) hard.data()[i] = soft.data()[i] > 0.5 ? 1.0 : 0.0;
    return hard;
}

} // namespace

// ---------------------------------------------------------------- ProgTr

ProgTrSystem::ProgTrSystem(Checkpoint ck) : ck_(std::move(ck)), pairs_(instantiate(ck_)) {}

std::vector<SystemOutput> ProgTrSystem::run(const std::vector<Tensor>& payloads, double snr_db,
                                            RngStream& noise_rng) {
    if (static_cast<int>(payloads.size()) != num_users()) {
        throw IncompatibilityError("progtr system: payload count != user count");
    }
    double noise_var = snr_to_noise_var(snr_db, ck_.p_max);
    std::vector<const Transceiver*> ptrs;
    for (const Transceiver& tr : pairs_) ptrs.push_back(&tr);

    Tape tape;
    Rollout roll = run_link(tape, ptrs, payloads, snr_db, ck_.channel, noise_var, noise_rng);

    std::vector<SystemOutput> out(pairs_.size());
    for (std::size_t m = 0; m < pairs_.size(); ++m) {
        for (int t = 0; t < ck_.config.T; ++t) {
            const Tensor& est = roll.estimates[m][static_cast<std::size_t>(t)].value();
            out[m].soft.push_back(est);
            if (ck_.config.input_kind == InputKind::bits) {
                out[m].hard.push_back(hard_from_soft(est));
            }
        }
    }
    return out;
}

std::vector<std::vector<Tensor>> ProgTrSystem::tx_symbols(const std::vector<Tensor>& payloads,
                                                          double snr_db) const {
    if (static_cast<int>(payloads.size()) != num_users()) {
        throw IncompatibilityError("progtr system: payload count != user count");
    }
    int batch = payloads[0].rows();
    Tape tape;
    Tensor snr_col({batch, 1});
    snr_col.fill(snr_feature(snr_db));
    ad::Var snr_feat = tape.constant(std::move(snr_col), "snr");

    std::vector<std::vector<Tensor>> out(pairs_.size());
    for (std::size_t m = 0; m < pairs_.size(); ++m) {
        const Transceiver& tr = pairs_[m];
        ad::Var d = tape.constant(payloads[m], "payload");
        std::vector<ad::Var> states = tr.tx_initial_state(tape, batch);
        for (int t = 0; t < ck_.config.T; ++t) {
            out[m].push_back(tr.tx_step(tape, d, snr_feat, states).value());
        }
    }
    return out;
}

// ------------------------------------------------------------- QAM baseline

QamBaselineSystem::QamBaselineSystem(MultiUseScheme scheme, ChannelSpec channel, double p_max,
                                     TwtaMode mode, bool per_use_metric)
    : scheme_(std::move(scheme)), channel_(std::move(channel)), p_max_(p_max), mode_(mode),
      per_use_metric_(per_use_metric), decoder_(JointDecoder::for_scheme(scheme_)) {
    bool twta = channel_.variant == ChannelVariant::twta_awgn;
    if (twta == (mode_ == TwtaMode::none)) {
        throw IncompatibilityError("qam baseline: amplifier mode does not match channel variant");
    }
    if (channel_.variant == ChannelVariant::mac_awgn) {
        throw IncompatibilityError("qam baseline: no multi-user scheme defined");
    }
    if (twta) {
        scale_ = power_scale_factor(scheme_.constellation, channel_.twta);
        const TwtaParams tw = channel_.twta;
        double f = scale_;
        if (mode_ == TwtaMode::scaled) {
            // candidates = amplifier output of the scaled constellation
            decoder_ = JointDecoder::for_scheme_transformed(
                scheme_, [tw, f](std::complex<double> s) { return twta_apply(f * s, tw); });
        } else {
            // predistortion makes the cascade identity on the scaled points
            decoder_ = JointDecoder::for_scheme_transformed(
                scheme_, [f](std::complex<double> s) { return f * s; });
        }
    }
}

std::string QamBaselineSystem::name() const {
    switch (mode_) {
    case TwtaMode::scaled: return scheme_.name + "_scaled";
    case TwtaMode::predistorted: return scheme_.name + "_predistorted";
    default: return scheme_.name;
    }
}

std::vector<std::complex<double>> QamBaselineSystem::tx_symbols(const int* bits) const {
    std::vector<std::complex<double>> syms = scheme_.encode(bits);
    if (mode_ == TwtaMode::scaled) {
        for (auto& s : syms) s *= scale_;
    } else if (mode_ == TwtaMode::predistorted) {
        for (auto& s : syms) s = predistort(scale_ * s, channel_.twta);
    }
    return syms;
}

std::vector<SystemOutput> QamBaselineSystem::run(const std::vector<Tensor>& payloads, double snr_db,
                                                 RngStream& noise_rng) {
    if (payloads.size() != 1) throw IncompatibilityError("qam baseline: single-user only");
    const Tensor& d = payloads[0];
    int batch = d.rows();
    int b = scheme_.b, T = scheme_.T;
    double noise_var = snr_to_noise_var(snr_db, p_max_);
    double sigma_dim = std::sqrt(noise_var / 2.0);
    std::complex<double> h = channel_.h.at(0);

    std::vector<int> bits(static_cast<std::size_t>(b));
    std::vector<std::vector<std::complex<double>>> received(
        static_cast<std::size_t>(batch), std::vector<std::complex<double>>(static_cast<std::size_t>(T)));
    std::vector<std::vector<std::complex<double>>> sent(static_cast<std::size_t>(batch));
    for (int s = 0; s < batch; ++s) {
        for (int i = 0; i < b; ++i) bits[static_cast<std::size_t>(i)] = static_cast<int>(d.at(s, i));
        sent[static_cast<std::size_t>(s)] = tx_symbols(bits.data());
    }
    // use-major noise draws, matching the learned systems' consumption order
    for (int t = 0; t < T; ++t) {
        for (int s = 0; s < batch; ++s) {
            std::complex<double> x = sent[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
            if (channel_.variant == ChannelVariant::twta_awgn) x = twta_apply(x, channel_.twta);
            x = h * x;
            double nr = sigma_dim * noise_rng.normal();
            double ni = sigma_dim * noise_rng.normal();
            received[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = x + std::complex<double>(nr, ni);
        }
    }

    SystemOutput out;
    for (int t = 0; t < T; ++t) {
        Tensor hard({batch, b});
        Tensor soft({batch, b});
        std::vector<int> dec(static_cast<std::size_t>(b));
        for (int s = 0; s < batch; ++s) {
            if (per_use_metric_) {
                decoder_.decode_per_use(received[static_cast<std::size_t>(s)].data(), t, dec.data());
            } else {
                decoder_.decode(received[static_cast<std::size_t>(s)].data(), t, dec.data());
            }
            for (int i = 0; i < b; ++i) {
                int v = dec[static_cast<std::size_t>(i)];
                hard.at(s, i) = static_cast<double>(v);
                soft.at(s, i) = v < 0 ? 0.5 : static_cast<double>(v);
            }
        }
        out.hard.push_back(std::move(hard));
        out.soft.push_back(std::move(soft));
    }
    std::vector<SystemOutput> res;
    res.push_back(std::move(out));
    return res;
}

// ----------------------------------------------------------- analog baselines

AnalogBaselineSystem::AnalogBaselineSystem(Kind kind, double p_max) : kind_(kind), p_max_(p_max) {}

std::string AnalogBaselineSystem::name() const {
    return kind_ == Kind::uncoded ? "uncoded" : "repetition";
}

std::vector<SystemOutput> AnalogBaselineSystem::run(const std::vector<Tensor>& payloads,
                                                    double snr_db, RngStream& noise_rng) {
    if (payloads.size() != 1) throw IncompatibilityError("analog baseline: single-user only");
    const Tensor& d = payloads[0];
    int batch = d.rows();
    double noise_var = snr_to_noise_var(snr_db, p_max_);
    double sigma_dim = std::sqrt(noise_var / 2.0);

    Tensor soft({batch, b()});
    for (int s = 0; s < batch; ++s) {
        std::complex<double> x = kind_ == Kind::uncoded
                                     ? uncoded_encode(d.at(s, 0), d.at(s, 1), p_max_)
                                     : repetition_encode(d.at(s, 0), p_max_);
        std::complex<double> y = x + std::complex<double>(sigma_dim * noise_rng.normal(),
                                                          sigma_dim * noise_rng.normal());
        if (kind_ == Kind::uncoded) {
            double d0, d1;
            uncoded_mmse(y, noise_var, p_max_, d0, d1);
            soft.at(s, 0) = d0;
            soft.at(s, 1) = d1;
        } else {
            soft.at(s, 0) = repetition_mmse(y, noise_var, p_max_);
        }
    }
    SystemOutput out;
    out.soft.push_back(std::move(soft));
    std::vector<SystemOutput> res;
    res.push_back(std::move(out));
    return res;
}

// ----------------------------------------------------------------- factory

std::unique_ptr<System> make_baseline_system(const std::string& name, int b, int T,
                                             const ChannelSpec& channel, double p_max) {
    std::string base = name;
    QamBaselineSystem::TwtaMode mode = QamBaselineSystem::TwtaMode::none;
    auto strip = [&base](const std::string& suffix) {
        if (base.size() > suffix.size() &&
            base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
            base.resize(base.size() - suffix.size());
            return true;
        }
        return false;
    };
    if (strip("_scaled")) mode = QamBaselineSystem::TwtaMode::scaled;
    else if (strip("_predistorted")) mode = QamBaselineSystem::TwtaMode::predistorted;

    if (base == "uncoded") {
        if (b != 2 || T != 1) throw IncompatibilityError("uncoded baseline is b=2, T=1");
        return std::make_unique<AnalogBaselineSystem>(AnalogBaselineSystem::Kind::uncoded, p_max);
    }
    if (base == "repetition") {
        if (b != 1 || T != 1) throw IncompatibilityError("repetition baseline is b=1, T=1");
        return std::make_unique<AnalogBaselineSystem>(AnalogBaselineSystem::Kind::repetition, p_max);
    }

    MultiUseScheme scheme;
    if (base == "qam16_split") {
        scheme = make_scheme_t2b8(SchemeVariant::qam16_split, p_max);
    } else if (base == "qam16_seq") {
        scheme = make_scheme_t4b16(SchemeVariant::qam16_seq, p_max);
    } else if (base == "qam256_interleaved") {
        if (T == 2) {
            scheme = make_scheme_t2b8(SchemeVariant::qam256_interleaved, p_max);
        } else {
            scheme = make_scheme_t4b16(SchemeVariant::qam256_interleaved, p_max);
        }
    } else {
        throw ConfigError("unknown baseline: " + name);
    }
    if (scheme.b != b || scheme.T != T) {
        throw IncompatibilityError("baseline " + name + " is b=" + std::to_string(scheme.b) +
                                   ", T=" + std::to_string(scheme.T));
    }
    return std::make_unique<QamBaselineSystem>(std::move(scheme), channel, p_max, mode);
}

} // namespace progtr
