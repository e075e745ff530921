#pragma once

#include <memory>
#include <string>
#include <vector>

#include "progtr/checkpoint.hpp"
#include "progtr/joint_decoder.hpp"
#include "progtr/scheme.hpp"
#include "progtr/transceiver.hpp"

namespace progtr {

/// Per-user result of one evaluation batch.
struct SystemOutput {
    /// Bits mode: [batch,b] hard decisions per use; 0/1, or -1 for bits a
    /// baseline has not transmitted yet.
    std::vector<ad::Tensor> hard;
    /// Soft estimates per use: probabilities (bits) or real values; erased
    /// bits carry 0.5.
    std::vector<ad::Tensor> soft;
};

/// Anything that can be swept over SNR: a trained model or a classical
/// scheme. One run() consumes exactly T * batch * 2 normal draws from the
/// noise stream in use-major order, so systems sharing a stream see paired
/// noise realizations.
class System {
public:
    virtual ~System() = default;
    virtual std::string name() const = 0;
    virtual InputKind kind() const = 0;
    virtual int b() const = 0;
    virtual int T() const = 0;
    virtual int num_users() const { return 1; }
    virtual double p_max() const { return 1.0; }
    virtual std::vector<SystemOutput> run(const std::vector<ad::Tensor>& payloads, double snr_db,
                                          RngStream& noise_rng) = 0;
};

/// Trained model loaded from a checkpoint.
class ProgTrSystem : public System {
public:
    explicit ProgTrSystem(Checkpoint ck);

    std::string name() const override { return "progtr:" + ck_.scenario; }
    InputKind kind() const override { return ck_.config.input_kind; }
    int b() const override { return ck_.config.b; }
    int T() const override { return ck_.config.T; }
    int num_users() const override { return static_cast<int>(pairs_.size()); }
    double p_max() const override { return ck_.p_max; }
    std::vector<SystemOutput> run(const std::vector<ad::Tensor>& payloads, double snr_db,
                                  RngStream& noise_rng) override;

    /// Noiseless Tx outputs per user per use for constellation dumps.
    std::vector<std::vector<ad::Tensor>> tx_symbols(const std::vector<ad::Tensor>& payloads,
                                                    double snr_db) const;
    const Checkpoint& checkpoint() const { return ck_; }

private:
    Checkpoint ck_;
    std::vector<Transceiver> pairs_;
};

/// Digital baseline: multi-use QAM scheme + exact joint ML decoding, with
/// the amplifier handling chosen by mode when the channel is twta_awgn.
class QamBaselineSystem : public System {
public:
    enum class TwtaMode { none, scaled, predistorted };

    QamBaselineSystem(MultiUseScheme scheme, ChannelSpec channel, double p_max, TwtaMode mode,
                      bool per_use_metric = false);

    std::string name() const override;
    InputKind kind() const override { return InputKind::bits; }
    int b() const override { return scheme_.b; }
    int T() const override { return scheme_.T; }
    double p_max() const override { return p_max_; }
    std::vector<SystemOutput> run(const std::vector<ad::Tensor>& payloads, double snr_db,
                                  RngStream& noise_rng) override;

    /// Symbols actually transmitted for a payload (after scaling or
    /// predistortion).
    std::vector<std::complex<double>> tx_symbols(const int* bits) const;

private:
    MultiUseScheme scheme_;
    ChannelSpec channel_;
    double p_max_;
    TwtaMode mode_;
    bool per_use_metric_;
    double scale_ = 1.0; // applied before the amplifier in scaled/predistorted modes
    JointDecoder decoder_;
};

/// Analog baselines for the continuous experiments (b=2 uncoded, b=1
/// repetition; T=1).
class AnalogBaselineSystem : public System {
public:
    enum class Kind { uncoded, repetition };

    AnalogBaselineSystem(Kind kind, double p_max);

    std::string name() const override;
    InputKind kind() const override { return InputKind::reals; }
    int b() const override { return kind_ == Kind::uncoded ? 2 : 1; }
    int T() const override { return 1; }
    double p_max() const override { return p_max_; }
    std::vector<SystemOutput> run(const std::vector<ad::Tensor>& payloads, double snr_db,
                                  RngStream& noise_rng) override;

private:
    Kind kind_;
    double p_max_;
};

/// Baseline factory for the CLI: name in {qam16_split, qam256_interleaved,
/// qam16_seq, uncoded, repetition}, with "_scaled" / "_predistorted"
/// suffixes selecting the amplifier handling on a twta channel.
std::unique_ptr<System> make_baseline_system(const std::string& name, int b, int T,
                                             const ChannelSpec& channel, double p_max);

} // namespace progtr
