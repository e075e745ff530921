#include "progtr/metrics.hpp"

#include <cmath>

#include "progtr/errors.hpp"
#include "progtr/source.hpp"

namespace progtr {

using ad::Tensor;

namespace {

std::uint64_t stream_key(std::size_t snr_index, long shard_index) {
    return (static_cast<std::uint64_t>(snr_index) << 40) | static_cast<std::uint64_t>(shard_index);
}

struct Welford {
    double sum = 0.0, sum_sq = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
    double stderr_of_mean() const {
        if (n < 2) return 0.0;
        double m = mean();
        double var = sum_sq / static_cast<double>(n) - m * m;
        return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
    }
};

/// Drives sys.run over shards/chunks with the documented stream layout and
/// hands every chunk's (payload, output) to the sink.
template <typename Sink>
void sweep(System& sys, const EvalOptions& opt, Sink&& sink) {
    int M = sys.num_users();
    SourceKind src = source_for(sys.kind());
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        double snr_db = opt.snr_grid[si];
        long done = 0;
        long shard_index = 0;
        while (done < opt.n_samples) {
            long shard_n = std::min(kEvalShard, opt.n_samples - done);
            RngStream payload_rng(opt.seed, "eval.payload", stream_key(si, shard_index));
            RngStream noise_rng(opt.seed, "eval.noise", stream_key(si, shard_index));
            long shard_done = 0;
            while (shard_done < shard_n) {
                int batch = static_cast<int>(std::min<long>(kEvalBatch, shard_n - shard_done));
                std::vector<Tensor> payloads;
                payloads.reserve(static_cast<std::size_t>(M));
                for (int m = 0; m < M; ++m) {
                    payloads.push_back(sample_batch(src, sys.b(), batch, payload_rng));
                }
                std::vector<SystemOutput> outs = sys.run(payloads, snr_db, noise_rng);
                sink(si, snr_db, payloads[static_cast<std::size_t>(opt.user)],
                     outs[static_cast<std::size_t>(opt.user)]);
                shard_done += batch;
            }
            done += shard_n;
            ++shard_index;
        }
    }
}

} // namespace

std::vector<MetricPoint> ber_curve(System& sys, const EvalOptions& opt) {
    if (sys.kind() != InputKind::bits) {
        throw IncompatibilityError("ber_curve: system does not carry bits");
    }
    int T = sys.T(), b = sys.b();
    std::vector<std::vector<Welford>> acc(opt.snr_grid.size(),
                                          std::vector<Welford>(static_cast<std::size_t>(T)));
    sweep(sys, opt, [&](std::size_t si, double, const Tensor& d, const SystemOutput& out) {
        if (out.hard.size() != static_cast<std::size_t>(T)) {
            throw IncompatibilityError("ber_curve: system produced no hard decisions");
        }
        int batch = d.rows();
        for (int t = 0; t < T; ++t) {
            const Tensor& hard = out.hard[static_cast<std::size_t>(t)];
            for (int s = 0; s < batch; ++s) {
                double errs = 0.0;
                for (int i = 0; i < b; ++i) {
                    double h = hard.at(s, i);
                    if (h < 0.0) {
                        errs += 0.5; // bit not transmitted yet
                    } else if (h != d.at(s, i)) {
                        errs += 1.0;
                    }
                }
                acc[si][static_cast<std::size_t>(t)].add(errs / static_cast<double>(b));
            }
        }
    });
    std::vector<MetricPoint> points;
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        for (int t = 0; t < T; ++t) {
            const Welford& w = acc[si][static_cast<std::size_t>(t)];
            points.push_back({opt.snr_grid[si], t + 1, "ber", w.mean(), w.stderr_of_mean(), w.n});
        }
    }
    return points;
}

std::vector<MetricPoint> mse_curve(System& sys, const EvalOptions& opt) {
    if (sys.kind() != InputKind::reals) {
        throw IncompatibilityError("mse_curve: system does not carry reals");
    }
    int T = sys.T(), b = sys.b();
    std::vector<std::vector<Welford>> total(opt.snr_grid.size(),
                                            std::vector<Welford>(static_cast<std::size_t>(T)));
    std::vector<std::vector<std::vector<Welford>>> per_var(
        opt.snr_grid.size(), std::vector<std::vector<Welford>>(
                                 static_cast<std::size_t>(T),
                                 std::vector<Welford>(static_cast<std::size_t>(b))));
    sweep(sys, opt, [&](std::size_t si, double, const Tensor& d, const SystemOutput& out) {
        int batch = d.rows();
        for (int t = 0; t < T; ++t) {
            const Tensor& est = out.soft[static_cast<std::size_t>(t)];
            for (int s = 0; s < batch; ++s) {
                double tot = 0.0;
                for (int i = 0; i < b; ++i) {
                    double diff = d.at(s, i) - est.at(s, i);
                    double sq = diff * diff;
                    tot += sq;
                    per_var[si][static_cast<std::size_t>(t)][static_cast<std::size_t>(i)].add(sq);
                }
                total[si][static_cast<std::size_t>(t)].add(tot);
            }
        }
    });
    std::vector<MetricPoint> points;
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        for (int t = 0; t < T; ++t) {
            const Welford& w = total[si][static_cast<std::size_t>(t)];
            points.push_back({opt.snr_grid[si], t + 1, "mse", w.mean(), w.stderr_of_mean(), w.n});
            for (int i = 0; i < b; ++i) {
                const Welford& wv = per_var[si][static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
                points.push_back({opt.snr_grid[si], t + 1, "mse_var" + std::to_string(i), wv.mean(),
                                  wv.stderr_of_mean(), wv.n});
            }
        }
    }
    return points;
}

namespace {

struct ColumnCollector {
    std::vector<std::vector<double>> d_cols;                   // [b][n]
    std::vector<std::vector<std::vector<double>>> est_cols;    // [T][b][n]
    void init(int b, int T) {
        d_cols.assign(static_cast<std::size_t>(b), {});
        est_cols.assign(static_cast<std::size_t>(T),
                        std::vector<std::vector<double>>(static_cast<std::size_t>(b)));
    }
    void add(const Tensor& d, const SystemOutput& out, int b, int T) {
        int batch = d.rows();
        for (int s = 0; s < batch; ++s) {
            for (int i = 0; i < b; ++i) d_cols[static_cast<std::size_t>(i)].push_back(d.at(s, i));
        }
        for (int t = 0; t < T; ++t) {
            const Tensor& est = out.soft[static_cast<std::size_t>(t)];
            for (int s = 0; s < batch; ++s) {
                for (int i = 0; i < b; ++i) {
                    est_cols[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)].push_back(est.at(s, i));
                }
            }
        }
    }
};

} // namespace

std::vector<MetricPoint> mi_curve(System& sys, const EvalOptions& opt) {
    int T = sys.T(), b = sys.b();
    bool discrete = sys.kind() == InputKind::bits;
    std::vector<MetricPoint> points;
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        EvalOptions one = opt;
        one.snr_grid = {opt.snr_grid[si]};
        ColumnCollector col;
        col.init(b, T);
        sweep(sys, one, [&](std::size_t, double, const Tensor& d, const SystemOutput& out) {
            col.add(d, out, b, T);
        });
        for (int t = 0; t < T; ++t) {
            MiResult r = mutual_information(col.d_cols, discrete,
                                            col.est_cols[static_cast<std::size_t>(t)], false, opt.mi);
            points.push_back({opt.snr_grid[si], t + 1, "mi", r.bits, 0.0, opt.n_samples});
        }
    }
    return points;
}

std::vector<BmiPoint> bmi_curve(System& sys, const EvalOptions& opt) {
    if (sys.kind() != InputKind::bits) {
        throw IncompatibilityError("bmi_curve: system does not carry bits");
    }
    int T = sys.T(), b = sys.b();
    std::vector<BmiPoint> points;
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        EvalOptions one = opt;
        one.snr_grid = {opt.snr_grid[si]};
        ColumnCollector col;
        col.init(b, T);
        sweep(sys, one, [&](std::size_t, double, const Tensor& d, const SystemOutput& out) {
            col.add(d, out, b, T);
        });
        for (int t = 0; t < T; ++t) {
            std::vector<double> m = bmi_matrix(col.d_cols, col.est_cols[static_cast<std::size_t>(t)], opt.mi);
            for (int i = 0; i < b; ++i) {
                for (int j = 0; j < b; ++j) {
                    points.push_back({opt.snr_grid[si], t + 1, i, j,
                                      m[static_cast<std::size_t>(i * b + j)]});
                }
            }
        }
    }
    return points;
}

std::vector<MetricPoint> power_curve(System& sys, const EvalOptions& opt) {
    auto* pt = dynamic_cast<ProgTrSystem*>(&sys);
    if (pt == nullptr) {
        throw IncompatibilityError("power_curve: audits trained models only");
    }
    int T = sys.T();
    int M = sys.num_users();
    SourceKind src = source_for(sys.kind());
    std::vector<std::vector<Welford>> acc(opt.snr_grid.size(),
                                          std::vector<Welford>(static_cast<std::size_t>(T)));
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        long done = 0;
        long shard_index = 0;
        while (done < opt.n_samples) {
            long shard_n = std::min(kEvalShard, opt.n_samples - done);
            RngStream payload_rng(opt.seed, "eval.payload", stream_key(si, shard_index));
            long shard_done = 0;
            while (shard_done < shard_n) {
                int batch = static_cast<int>(std::min<long>(kEvalBatch, shard_n - shard_done));
                std::vector<Tensor> payloads;
                for (int m = 0; m < M; ++m) {
                    payloads.push_back(sample_batch(src, sys.b(), batch, payload_rng));
                }
                auto symbols = pt->tx_symbols(payloads, opt.snr_grid[si]);
                const auto& user_syms = symbols[static_cast<std::size_t>(opt.user)];
                for (int t = 0; t < T; ++t) {
                    const Tensor& x = user_syms[static_cast<std::size_t>(t)];
                    for (int s = 0; s < batch; ++s) {
                        double re = x.at(s, 0), im = x.at(s, 1);
                        acc[si][static_cast<std::size_t>(t)].add(re * re + im * im);
                    }
                }
                shard_done += batch;
            }
            done += shard_n;
            ++shard_index;
        }
    }
    std::vector<MetricPoint> points;
    for (std::size_t si = 0; si < opt.snr_grid.size(); ++si) {
        for (int t = 0; t < T; ++t) {
            const Welford& w = acc[si][static_cast<std::size_t>(t)];
            points.push_back({opt.snr_grid[si], t + 1, "mean_power", w.mean(), w.stderr_of_mean(), w.n});
        }
    }
    return points;
}

} // namespace progtr
