#include <benchmark/benchmark.h>

#include "progtr/joint_decoder.hpp"
#include "progtr/objective.hpp"
#include "progtr/scheme.hpp"
#include "progtr/trainer.hpp"
#include "progtr/transceiver.hpp"

using namespace progtr;

static void BM_TapeGemm(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    RngStream rng(7, "bench", 0);
    ad::ParameterSet ps;
    ad::Tensor w({n, n});
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.normal();
    ps.add("w", w);
    ad::Tensor x({256, n});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    for (auto _ : state) {
        ad::Tape t;
        ad::Var y = t.matmul(t.constant(x, "x"), t.param(ps.at("w")));
        ad::Var loss = t.mean(t.mul(y, y));
        t.backward(loss);
        ps.zero_grads();
        benchmark::DoNotOptimize(loss.value()[0]);
    }
}
BENCHMARK(BM_TapeGemm)->Arg(64)->Arg(128);

static void BM_GruStackStep(benchmark::State& state) {
    RngStream rng(7, "bench", 1);
    TransceiverConfig cfg;
    cfg.b = 8;
    cfg.T = 2;
    Transceiver pair = Transceiver::create(cfg, rng);
    ad::Tensor d({256, 8});
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = rng.coin();
    ad::Tensor snr({256, 1});
    snr.fill(snr_feature(15.0));
    for (auto _ : state) {
        ad::Tape t;
        auto states = pair.tx_initial_state(t, 256);
        ad::Var x = pair.tx_step(t, t.constant(d, "d"), t.constant(snr, "snr"), states);
        benchmark::DoNotOptimize(x.value()[0]);
    }
}
BENCHMARK(BM_GruStackStep);

static void BM_TrainIteration(benchmark::State& state) {
    RngStream rng(7, "bench", 2);
    TransceiverConfig cfg;
    cfg.b = 8;
    cfg.T = 2;
    Transceiver pair = Transceiver::create(cfg, rng);
    LossWeights lw;
    lw.alpha = {10.0, 25.0};
    ad::Tensor d({256, 8});
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = rng.coin();
    ChannelSpec ch;
    for (auto _ : state) {
        RngStream noise(7, "bench.noise", 3);
        ad::Tape t;
        Rollout roll = run_link(t, pair, d, 15.0, ch, snr_to_noise_var(15.0, 1.0), noise);
        std::vector<ad::Var> sl;
        ad::Var dd = t.constant(d, "payload");
        for (int u = 0; u < 2; ++u) sl.push_back(bce_step_loss(t, dd, roll.estimates[0][u]));
        ad::Var loss = progtr_loss(t, sl, roll.mean_powers[0], lw);
        t.backward(loss);
        pair.params().zero_grads();
        benchmark::DoNotOptimize(loss.value()[0]);
    }
}
BENCHMARK(BM_TrainIteration)->Unit(benchmark::kMillisecond);

static void BM_JointDecode(benchmark::State& state) {
    MultiUseScheme scheme = make_scheme_t2b8(SchemeVariant::qam16_split, 1.0);
    JointDecoder dec = JointDecoder::for_scheme(scheme);
    RngStream rng(7, "bench", 4);
    std::vector<int> bits(8);
    for (auto& v : bits) v = static_cast<int>(rng.coin());
    auto sent = scheme.encode(bits.data());
    std::vector<std::complex<double>> y(sent.begin(), sent.end());
    std::vector<int> decoded(8);
    for (auto _ : state) {
        dec.decode(y.data(), 1, decoded.data());
        benchmark::DoNotOptimize(decoded[0]);
    }
}
BENCHMARK(BM_JointDecode);

BENCHMARK_MAIN();
