#include "progtr/preset.hpp"

#include <algorithm>
#include <sstream>

#include "progtr/errors.hpp"

namespace progtr {

namespace {

TrainConfig base_config() {
    TrainConfig cfg;
    cfg.net = TransceiverConfig{};
    cfg.channel = ChannelSpec{};
    cfg.loss.alpha = {10.0, 25.0};
    cfg.loss.lambda = 1e3;
    cfg.loss.p_max = 1.0;
    return cfg;
}

std::vector<double> ramp_alpha(int T) {
    // The 2-use and 4-use discrete experiments use [10,25] and
    // [10,25,50,100]; extend by doubling for other horizons.
    std::vector<double> a = {10.0, 25.0, 50.0, 100.0};
    while (static_cast<int>(a.size()) < T) a.push_back(a.back() * 2.0);
    a.resize(static_cast<std::size_t>(T));
    return a;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "discrete_t2b8", "discrete_t4b16", "gauss_b2t1", "gauss_b1t1", "gauss_b2t2",
        "gauss_b4t2",    "twta_t2b8",      "mac_m4t4b6", "custom",
    };
    return names;
}

TrainConfig preset_train_config(const std::string& scenario) {
    TrainConfig cfg = base_config();
    cfg.scenario = scenario;
    if (scenario == "discrete_t2b8") {
        cfg.net.b = 8;
        cfg.net.T = 2;
        cfg.net.input_kind = InputKind::bits;
        cfg.loss.alpha = {10.0, 25.0};
    } else if (scenario == "discrete_t4b16") {
        cfg.net.b = 16;
        cfg.net.T = 4;
        cfg.net.input_kind = InputKind::bits;
        cfg.loss.alpha = {10.0, 25.0, 50.0, 100.0};
    } else if (scenario == "gauss_b2t1") {
        cfg.net.b = 2;
        cfg.net.T = 1;
        cfg.net.input_kind = InputKind::reals;
        cfg.loss.alpha = {10.0};
    } else if (scenario == "gauss_b1t1") {
        cfg.net.b = 1;
        cfg.net.T = 1;
        cfg.net.input_kind = InputKind::reals;
        cfg.loss.alpha = {10.0};
    } else if (scenario == "gauss_b2t2") {
        cfg.net.b = 2;
        cfg.net.T = 2;
        cfg.net.input_kind = InputKind::reals;
        cfg.loss.alpha = {0.0, 5000.0};
        cfg.loss.lambda = 50000.0;
    } else if (scenario == "gauss_b4t2") {
        cfg.net.b = 4;
        cfg.net.T = 2;
        cfg.net.input_kind = InputKind::reals;
        cfg.loss.alpha = {10.0, 25.0};
    } else if (scenario == "twta_t2b8") {
        cfg.net.b = 8;
        cfg.net.T = 2;
        cfg.net.input_kind = InputKind::bits;
        cfg.loss.alpha = {10.0, 25.0};
        cfg.channel.variant = ChannelVariant::twta_awgn;
    } else if (scenario == "mac_m4t4b6") {
        cfg.net.b = 6;
        cfg.net.T = 4;
        cfg.net.input_kind = InputKind::bits;
        cfg.loss.alpha = {10.0, 25.0, 50.0, 100.0};
        cfg.num_users = 4;
        cfg.channel.variant = ChannelVariant::mac_awgn;
        cfg.channel.h.assign(4, {1.0, 0.0});
    } else if (scenario == "custom") {
        // caller supplies [model] / [channel]
    } else {
        throw ConfigError("unknown scenario: " + scenario);
    }
    return cfg;
}

namespace {

InputKind parse_input_kind(const std::string& s, const std::string& where) {
    if (s == "bits") return InputKind::bits;
    if (s == "reals") return InputKind::reals;
    throw ConfigError(where + ": input must be 'bits' or 'reals', got '" + s + "'");
}

ChannelVariant parse_variant(const std::string& s, const std::string& where) {
    if (s == "awgn") return ChannelVariant::awgn;
    if (s == "twta_awgn") return ChannelVariant::twta_awgn;
    if (s == "mac_awgn") return ChannelVariant::mac_awgn;
    throw ConfigError(where + ": channel variant must be awgn, twta_awgn or mac_awgn, got '" + s +
                      "'");
}

void read_model_section(const ConfigFile& cfg, TrainConfig& tc) {
    tc.net.b = static_cast<int>(cfg.get_long("model.b", tc.net.b));
    tc.net.T = static_cast<int>(cfg.get_long("model.T", tc.net.T));
    if (cfg.has("model.input")) {
        tc.net.input_kind = parse_input_kind(cfg.get_string("model.input", ""), "model.input");
    }
    tc.net.layers = static_cast<int>(cfg.get_long("model.layers", tc.net.layers));
    tc.net.state_size = static_cast<int>(cfg.get_long("model.state_size", tc.net.state_size));
    tc.num_users = static_cast<int>(cfg.get_long("model.M", tc.num_users));
    tc.loss.alpha = ramp_alpha(tc.net.T); // [train] alpha may still override
}

void read_channel_section(const ConfigFile& cfg, TrainConfig& tc) {
    if (cfg.has("channel.variant")) {
        tc.channel.variant = parse_variant(cfg.get_string("channel.variant", ""), "channel.variant");
    }
    if (tc.channel.variant == ChannelVariant::mac_awgn) {
        tc.channel.h.assign(static_cast<std::size_t>(std::max(tc.num_users, 1)), {1.0, 0.0});
    } else {
        tc.channel.h.assign(1, {1.0, 0.0});
    }
    std::vector<double> re, im;
    for (std::size_t i = 0; i < tc.channel.h.size(); ++i) {
        re.push_back(tc.channel.h[i].real());
        im.push_back(tc.channel.h[i].imag());
    }
    re = cfg.get_list("channel.h_re", re);
    im = cfg.get_list("channel.h_im", im);
    if (re.size() != tc.channel.h.size() || im.size() != tc.channel.h.size()) {
        throw ConfigError("channel.h_re / channel.h_im must list one gain per transmitter");
    }
    for (std::size_t i = 0; i < tc.channel.h.size(); ++i) {
        tc.channel.h[i] = {re[i], im[i]};
    }
    tc.channel.twta.alpha_rho = cfg.get_double("channel.twta_alpha_rho", tc.channel.twta.alpha_rho);
    tc.channel.twta.beta_rho = cfg.get_double("channel.twta_beta_rho", tc.channel.twta.beta_rho);
    tc.channel.twta.alpha_psi = cfg.get_double("channel.twta_alpha_psi", tc.channel.twta.alpha_psi);
    tc.channel.twta.beta_psi = cfg.get_double("channel.twta_beta_psi", tc.channel.twta.beta_psi);
}

} // namespace

Experiment load_experiment(const ConfigFile& cfg) {
    std::string scenario = cfg.get_string("experiment.scenario", "custom");
    Experiment exp;
    exp.train = preset_train_config(scenario);
    if (scenario == "custom") {
        read_model_section(cfg, exp.train);
        read_channel_section(cfg, exp.train);
    }

    TrainConfig& tc = exp.train;
    tc.seed = static_cast<std::uint64_t>(cfg.get_long("experiment.seed", 1));
    exp.output_dir = cfg.get_string("experiment.output_dir", "");

    tc.iterations = cfg.get_long("train.iterations", tc.iterations);
    tc.batch_size = static_cast<int>(cfg.get_long("train.batch_size", tc.batch_size));
    tc.lr = cfg.get_double("train.lr", tc.lr);
    tc.snr_lo_db = cfg.get_double("train.snr_lo_db", tc.snr_lo_db);
    tc.snr_hi_db = cfg.get_double("train.snr_hi_db", tc.snr_hi_db);
    tc.history_every = cfg.get_long("train.history_every", tc.history_every);
    tc.loss.alpha = cfg.get_list("train.alpha", tc.loss.alpha);
    tc.loss.lambda = cfg.get_double("train.lambda", tc.loss.lambda);
    tc.loss.p_max = cfg.get_double("train.p_max", tc.loss.p_max);
    tc.psi = cfg.get_double("train.fairness_psi", tc.psi);
    tc.fairness_window = static_cast<int>(cfg.get_long("train.fairness_window", tc.fairness_window));
    std::string scope = cfg.get_string("train.fairness_scope", tc.fairness_scope_all ? "all" : "pair");
    if (scope == "all") {
        tc.fairness_scope_all = true;
    } else if (scope == "pair") {
        tc.fairness_scope_all = false;
    } else {
        throw ConfigError("train.fairness_scope must be 'all' or 'pair', got '" + scope + "'");
    }

    if (cfg.has("eval.snr")) {
        exp.eval_snr = parse_snr_grid(cfg.get_string("eval.snr", ""));
    } else {
        for (double v = 0.0; v <= 30.0 + 1e-9; v += 5.0) exp.eval_snr.push_back(v);
    }
    exp.eval_samples = cfg.get_long("eval.samples", exp.eval_samples);
    exp.eval_user = static_cast<int>(cfg.get_long("eval.user", exp.eval_user));
    std::vector<std::string> default_metrics =
        tc.net.input_kind == InputKind::bits ? std::vector<std::string>{"ber", "mi"}
                                             : std::vector<std::string>{"mse", "mi"};
    exp.eval_metrics = cfg.get_strings("eval.metrics", default_metrics);
    for (const std::string& m : exp.eval_metrics) {
        if (m != "ber" && m != "mse" && m != "mi" && m != "bmi" && m != "power") {
            throw ConfigError("eval.metrics: unknown metric '" + m + "'");
        }
    }

    std::vector<std::string> unused = cfg.unused_keys();
    if (!unused.empty()) {
        std::ostringstream msg;
        msg << cfg.label() << ": unrecognized or inapplicable keys:";
        for (const std::string& k : unused) msg << " " << k << ";";
        throw ConfigError(msg.str());
    }
    return exp;
}

Experiment load_experiment_file(const std::string& path) {
    return load_experiment(ConfigFile::parse_file(path));
}

} // namespace progtr
