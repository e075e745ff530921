// Command-line front end: train presets or custom configs, evaluate trained
// checkpoints against the classical baselines, and export plot-ready CSVs.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "progtr/checkpoint.hpp"
#include "progtr/csv.hpp"
#include "progtr/errors.hpp"
#include "progtr/metrics.hpp"
#include "progtr/preset.hpp"
#include "progtr/system.hpp"
#include "progtr/trainer.hpp"

namespace fs = std::filesystem;
using namespace progtr;

namespace {

std::string resolve_out_dir(const std::string& cli_out, const std::string& cfg_out) {
    if (!cli_out.empty()) return cli_out;
    if (!cfg_out.empty()) return cfg_out;
    const char* env = std::getenv("PROGTR_OUT_DIR");
    if (env != nullptr && *env != '\0') return env;
    return ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

void write_metric_csv(const std::string& path, const std::vector<MetricPoint>& points) {
    CsvWriter csv(path, {"snr_db", "t", "metric", "value", "stderr", "n"});
    for (const auto& p : points) {
        csv.row({csv_num(p.snr_db), csv_num(p.t), p.metric, csv_num(p.value), csv_num(p.stderr_),
                 csv_num(p.n)});
    }
}

void write_bmi_csv(const std::string& path, const std::vector<BmiPoint>& points) {
    CsvWriter csv(path, {"snr_db", "t", "i", "j", "mi_bits"});
    for (const auto& p : points) {
        csv.row({csv_num(p.snr_db), csv_num(p.t), csv_num(p.i), csv_num(p.j), csv_num(p.mi_bits)});
    }
}

std::vector<MetricPoint> run_metric(const std::string& metric, System& sys, const EvalOptions& opt) {
    if (metric == "ber") return ber_curve(sys, opt);
    if (metric == "mse") return mse_curve(sys, opt);
    if (metric == "mi") return mi_curve(sys, opt);
    if (metric == "power") return power_curve(sys, opt);
    throw ConfigError("unknown metric: " + metric);
}

struct SystemSet {
    std::vector<std::unique_ptr<System>> systems;
    std::vector<std::string> labels;
};

/// Builds the systems named by specs ("progtr:<ckpt>" or a baseline name).
/// Baselines take shape and channel from the first checkpoint in the list,
/// falling back to the explicit b/T/channel arguments.
SystemSet build_systems(const std::vector<std::string>& specs, int b, int T,
                        ChannelSpec channel, double p_max) {
    SystemSet out;
    out.systems.resize(specs.size());
    bool have_ck = false;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (specs[i].rfind("progtr:", 0) == 0) {
            Checkpoint ck = load_checkpoint(specs[i].substr(7));
            if (!have_ck) {
                b = ck.config.b;
                T = ck.config.T;
                channel = ck.channel;
                p_max = ck.p_max;
                have_ck = true;
            }
            out.systems[i] = std::make_unique<ProgTrSystem>(std::move(ck));
        }
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (out.systems[i] == nullptr) {
            if (b <= 0 || T <= 0) {
                throw ConfigError("baseline '" + specs[i] + "' needs --b and --T (or a checkpoint)");
            }
            out.systems[i] = make_baseline_system(specs[i], b, T, channel, p_max);
        }
        out.labels.push_back(out.systems[i]->name());
    }
    for (const auto& sys : out.systems) {
        if (sys->b() != out.systems[0]->b() || sys->T() != out.systems[0]->T() ||
            sys->kind() != out.systems[0]->kind()) {
            throw IncompatibilityError("systems disagree on (b, T, input kind)");
        }
    }
    return out;
}

ChannelSpec parse_channel_arg(const std::string& name) {
    ChannelSpec ch;
    if (name == "awgn") {
        ch.variant = ChannelVariant::awgn;
    } else if (name == "twta_awgn") {
        ch.variant = ChannelVariant::twta_awgn;
    } else {
        throw ConfigError("channel must be awgn or twta_awgn, got '" + name + "'");
    }
    return ch;
}

int cmd_train(const std::string& config_path, long iterations_override, long seed_override,
              const std::string& out_override, const std::string& ckpt_name) {
    Experiment exp = load_experiment_file(config_path);
    if (iterations_override >= 0) exp.train.iterations = iterations_override;
    if (seed_override >= 0) exp.train.seed = static_cast<std::uint64_t>(seed_override);
    std::string out_dir = resolve_out_dir(out_override, exp.output_dir);

    TrainResult result = train(exp.train);

    std::string stem = ckpt_name.empty() ? exp.train.scenario : ckpt_name;
    std::string ckpt_path = join_path(out_dir, stem + ".ckpt");
    std::string hist_path = join_path(out_dir, stem + "_history.csv");
    save_checkpoint(result.checkpoint, ckpt_path);
    write_history_csv(hist_path, result.history);

    std::printf("checkpoint: %s\n", ckpt_path.c_str());
    std::printf("history:    %s\n", hist_path.c_str());
    if (!result.history.empty()) {
        long last = result.history.back().iter;
        for (const auto& r : result.history) {
            if (r.iter != last) continue;
            std::printf("final iter %ld user %d t=%d loss=%.6g mean_power=%.6g snr=%.2f dB\n",
                        r.iter, r.user, r.t, r.loss, r.mean_power, r.snr_db);
        }
    }
    if (result.aborted) {
        std::fprintf(stderr, "numeric abort at iteration %ld: %s (last good weights saved)\n",
                     result.abort_iteration, result.abort_reason.c_str());
        return 3;
    }
    return 0;
}

int cmd_eval(const std::string& ckpt, const std::string& system_name,
             const std::vector<std::string>& metrics_arg, const std::string& snr_arg, long samples,
             long seed, int user, int b, int T, const std::string& channel_arg, double p_max,
             const std::string& out_override) {
    std::vector<std::string> specs;
    if (!ckpt.empty()) specs.push_back("progtr:" + ckpt);
    if (!system_name.empty()) specs.push_back(system_name);
    if (specs.size() != 1) {
        throw ConfigError("eval needs exactly one of --checkpoint or --system");
    }
    SystemSet set = build_systems(specs, b, T, parse_channel_arg(channel_arg), p_max);
    System& sys = *set.systems[0];

    std::vector<std::string> metrics = metrics_arg;
    if (metrics.empty()) {
        metrics = sys.kind() == InputKind::bits ? std::vector<std::string>{"ber", "mi"}
                                                : std::vector<std::string>{"mse", "mi"};
    }
    EvalOptions opt;
    opt.snr_grid = parse_snr_grid(snr_arg);
    opt.n_samples = samples;
    opt.seed = static_cast<std::uint64_t>(seed);
    opt.user = user;
    if (user < 0 || user >= sys.num_users()) {
        throw ConfigError("eval --user out of range for this system");
    }

    std::string tag = ckpt.empty() ? system_name : fs::path(ckpt).stem().string();
    if (sys.num_users() > 1) tag += "_user" + std::to_string(user);
    std::string out_dir = resolve_out_dir(out_override, "");

    std::vector<MetricPoint> rows;
    for (const std::string& m : metrics) {
        if (m == "bmi") {
            std::string path = join_path(out_dir, tag + "_bmi.csv");
            write_bmi_csv(path, bmi_curve(sys, opt));
            std::printf("wrote %s\n", path.c_str());
            continue;
        }
        std::vector<MetricPoint> pts = run_metric(m, sys, opt);
        rows.insert(rows.end(), pts.begin(), pts.end());
    }
    if (!rows.empty()) {
        std::string path = join_path(out_dir, tag + "_metrics.csv");
        write_metric_csv(path, rows);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_compare(const std::vector<std::string>& specs, const std::string& metric,
                const std::string& snr_arg, long samples, long seed, int user, int b, int T,
                const std::string& channel_arg, double p_max, const std::string& out_override) {
    if (specs.empty()) throw ConfigError("compare needs at least one system");
    SystemSet set = build_systems(specs, b, T, parse_channel_arg(channel_arg), p_max);

    EvalOptions opt;
    opt.snr_grid = parse_snr_grid(snr_arg);
    opt.n_samples = samples;
    opt.seed = static_cast<std::uint64_t>(seed);
    opt.user = user;

    std::string out_dir = resolve_out_dir(out_override, "");
    std::string path = join_path(out_dir, "compare_" + metric + ".csv");
    CsvWriter csv(path, {"system", "snr_db", "t", "metric", "value", "stderr", "n"});
    for (std::size_t i = 0; i < set.systems.size(); ++i) {
        // Same seed for every system: shared payload/noise streams give
        // paired noise realizations.
        for (const auto& p : run_metric(metric, *set.systems[i], opt)) {
            csv.row({set.labels[i], csv_num(p.snr_db), csv_num(p.t), p.metric, csv_num(p.value),
                     csv_num(p.stderr_), csv_num(p.n)});
        }
    }
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

int cmd_constellation(const std::string& ckpt, const std::string& snr_arg, int sweep_steps,
                      int sample_inputs, const std::string& out_override) {
    Checkpoint ck = load_checkpoint(ckpt);
    ProgTrSystem sys(std::move(ck));
    const int b = sys.b(), T = sys.T(), M = sys.num_users();
    const bool discrete = sys.kind() == InputKind::bits;
    std::vector<double> snrs = parse_snr_grid(snr_arg);

    // Input set: every payload for bit models, a swept scalar for b=1 real
    // models, a fixed random sample otherwise.
    std::vector<std::vector<double>> inputs; // rows of length b
    std::vector<double> input_ids;
    if (discrete) {
        long count = 1L << b;
        for (long label = 0; label < count; ++label) {
            std::vector<double> row(static_cast<std::size_t>(b));
            for (int i = 0; i < b; ++i) {
                row[static_cast<std::size_t>(i)] =
                    static_cast<double>((label >> (b - 1 - i)) & 1);
            }
            inputs.push_back(std::move(row));
            input_ids.push_back(static_cast<double>(label));
        }
    } else if (b == 1) {
        for (int k = 0; k < sweep_steps; ++k) {
            double d = -3.0 + 6.0 * static_cast<double>(k) / static_cast<double>(sweep_steps - 1);
            inputs.push_back({d});
            input_ids.push_back(d);
        }
    } else {
        RngStream rng(1, "constellation", 0);
        for (int k = 0; k < sample_inputs; ++k) {
            std::vector<double> row(static_cast<std::size_t>(b));
            for (int i = 0; i < b; ++i) row[static_cast<std::size_t>(i)] = rng.normal();
            inputs.push_back(std::move(row));
            input_ids.push_back(static_cast<double>(k));
        }
    }
    const long n = static_cast<long>(inputs.size());

    std::string out_dir = resolve_out_dir(out_override, "");
    std::string stem = fs::path(ckpt).stem().string();
    std::vector<std::unique_ptr<CsvWriter>> files;
    for (int m = 0; m < M; ++m) {
        std::string name = M == 1 ? stem + "_constellation.csv"
                                  : stem + "_constellation_user" + std::to_string(m) + ".csv";
        files.push_back(std::make_unique<CsvWriter>(join_path(out_dir, name),
                                                    std::vector<std::string>{"snr_db", "t", "input",
                                                                             "re", "im"}));
    }

    for (double snr : snrs) {
        // [user][t][input] symbol coordinates, filled chunk by chunk.
        std::vector<std::vector<std::vector<std::pair<double, double>>>> sym(
            static_cast<std::size_t>(M),
            std::vector<std::vector<std::pair<double, double>>>(
                static_cast<std::size_t>(T),
                std::vector<std::pair<double, double>>(static_cast<std::size_t>(n))));
        for (long start = 0; start < n; start += kEvalBatch) {
            int batch = static_cast<int>(std::min<long>(kEvalBatch, n - start));
            ad::Tensor payload({batch, b});
            for (int s = 0; s < batch; ++s) {
                for (int i = 0; i < b; ++i) {
                    payload.at(s, i) = inputs[static_cast<std::size_t>(start + s)][static_cast<std::size_t>(i)];
                }
            }
            std::vector<ad::Tensor> payloads(static_cast<std::size_t>(M), payload);
            auto symbols = sys.tx_symbols(payloads, snr);
            for (int m = 0; m < M; ++m) {
                for (int t = 0; t < T; ++t) {
                    const ad::Tensor& x = symbols[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
                    for (int s = 0; s < batch; ++s) {
                        sym[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)]
                           [static_cast<std::size_t>(start + s)] = {x.at(s, 0), x.at(s, 1)};
                    }
                }
            }
        }
        for (int m = 0; m < M; ++m) {
            for (int t = 0; t < T; ++t) {
                for (long s = 0; s < n; ++s) {
                    auto [re, im] = sym[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)]
                                       [static_cast<std::size_t>(s)];
                    files[static_cast<std::size_t>(m)]->row(
                        {csv_num(snr), csv_num(t + 1), csv_num(input_ids[static_cast<std::size_t>(s)]),
                         csv_num(re), csv_num(im)});
                }
            }
        }
    }
    for (int m = 0; m < M; ++m) std::printf("wrote constellation file for user %d\n", m);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Progressive transmission over noisy channels: training, evaluation, export"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a preset or custom config");
    std::string config_path, train_out, ckpt_name;
    long iterations_override = -1, train_seed = -1;
    train_cmd->add_option("--config", config_path, "Experiment config file")->required();
    train_cmd->add_option("--iterations", iterations_override, "Override training iterations");
    train_cmd->add_option("--seed", train_seed, "Override the master seed");
    train_cmd->add_option("--out", train_out, "Output directory");
    train_cmd->add_option("--name", ckpt_name, "Checkpoint/history file stem (default: scenario)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint or a baseline scheme");
    std::string eval_ckpt, eval_system, eval_snr = "0:30:5", eval_channel = "awgn", eval_out;
    std::vector<std::string> eval_metrics;
    long eval_samples = 100000, eval_seed = 1;
    int eval_user = 0, eval_b = 0, eval_T = 0;
    double eval_pmax = 1.0;
    eval_cmd->add_option("--checkpoint", eval_ckpt, "Trained model checkpoint");
    eval_cmd->add_option("--system", eval_system, "Baseline scheme name instead of a checkpoint");
    eval_cmd->add_option("--metrics", eval_metrics, "Comma list of ber,mse,mi,bmi,power")
        ->delimiter(',');
    eval_cmd->add_option("--snr", eval_snr, "lo:hi:step or comma list, dB");
    eval_cmd->add_option("--samples", eval_samples, "Monte-Carlo samples per SNR");
    eval_cmd->add_option("--seed", eval_seed, "Evaluation seed");
    eval_cmd->add_option("--user", eval_user, "User index to score (multi-user models)");
    eval_cmd->add_option("--b", eval_b, "Payload size for standalone baselines");
    eval_cmd->add_option("--T", eval_T, "Channel uses for standalone baselines");
    eval_cmd->add_option("--channel", eval_channel, "awgn or twta_awgn for standalone baselines");
    eval_cmd->add_option("--p-max", eval_pmax, "Power cap for standalone baselines");
    eval_cmd->add_option("--out", eval_out, "Output directory");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Evaluate several systems with paired noise");
    std::vector<std::string> cmp_systems;
    std::string cmp_metric = "ber", cmp_snr = "0:30:5", cmp_channel = "awgn", cmp_out;
    long cmp_samples = 100000, cmp_seed = 1;
    int cmp_user = 0, cmp_b = 0, cmp_T = 0;
    double cmp_pmax = 1.0;
    cmp_cmd->add_option("--systems", cmp_systems, "progtr:<ckpt> or baseline names")
        ->delimiter(',')
        ->required();
    cmp_cmd->add_option("--metric", cmp_metric, "ber, mse or mi");
    cmp_cmd->add_option("--snr", cmp_snr, "lo:hi:step or comma list, dB");
    cmp_cmd->add_option("--samples", cmp_samples, "Monte-Carlo samples per SNR");
    cmp_cmd->add_option("--seed", cmp_seed, "Evaluation seed");
    cmp_cmd->add_option("--user", cmp_user, "User index to score");
    cmp_cmd->add_option("--b", cmp_b, "Payload size when no checkpoint is listed");
    cmp_cmd->add_option("--T", cmp_T, "Channel uses when no checkpoint is listed");
    cmp_cmd->add_option("--channel", cmp_channel, "awgn or twta_awgn when no checkpoint is listed");
    cmp_cmd->add_option("--p-max", cmp_pmax, "Power cap when no checkpoint is listed");
    cmp_cmd->add_option("--out", cmp_out, "Output directory");

    // constellation
    auto* const_cmd = app.add_subcommand("constellation", "Dump Tx symbols per (snr, use)");
    std::string const_ckpt, const_snr = "0:30:5", const_out;
    int const_steps = 512, const_inputs = 512;
    const_cmd->add_option("--checkpoint", const_ckpt, "Trained model checkpoint")->required();
    const_cmd->add_option("--snr", const_snr, "lo:hi:step or comma list, dB");
    const_cmd->add_option("--steps", const_steps, "Sweep steps for b=1 real models")
        ->check(CLI::Range(2, 1 << 20));
    const_cmd->add_option("--inputs", const_inputs, "Sampled inputs for b>1 real models")
        ->check(CLI::Range(1, 1 << 20));
    const_cmd->add_option("--out", const_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(config_path, iterations_override, train_seed, train_out, ckpt_name);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_ckpt, eval_system, eval_metrics, eval_snr, eval_samples, eval_seed,
                            eval_user, eval_b, eval_T, eval_channel, eval_pmax, eval_out);
        }
        if (cmp_cmd->parsed()) {
            return cmd_compare(cmp_systems, cmp_metric, cmp_snr, cmp_samples, cmp_seed, cmp_user,
                               cmp_b, cmp_T, cmp_channel, cmp_pmax, cmp_out);
        }
        if (const_cmd->parsed()) {
            return cmd_constellation(const_ckpt, const_snr, const_steps, const_inputs, const_out);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const CheckpointError& e) {
        std::fprintf(stderr, "checkpoint error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const IncompatibilityError& e) {
        std::fprintf(stderr, "incompatible request: %s\n", e.what());
        return 4;
    } catch (const DimensionError& e) {
        std::fprintf(stderr, "incompatible shapes: %s\n", e.what());
        return 4;
    }
    return 0;
}
