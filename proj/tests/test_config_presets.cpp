#include <doctest.h>

#include <string>
#include <vector>

#include "progtr/config.hpp"
#include "progtr/errors.hpp"
#include "progtr/preset.hpp"

using namespace progtr;

namespace {

std::string thrown_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("config file parsing") {
    SUBCASE("sections, comments and trimming") {
        ConfigFile cfg = ConfigFile::parse_text("# top comment\n"
                                                "[experiment]\n"
                                                "scenario = gauss_b2t1  \n"
                                                "\n"
                                                "[train]\n"
                                                "lr=0.002\n"
                                                "iterations =  500\n"
                                                "alpha = 1, 2.5 ,3\n"
                                                "tags = a, b , c\n",
                                                "demo.cfg");
        CHECK(cfg.has("experiment.scenario"));
        CHECK(!cfg.has("experiment.lr"));
        CHECK(cfg.get_string("experiment.scenario", "") == "gauss_b2t1");
        CHECK(cfg.get_double("train.lr", 0.0) == 0.002);
        CHECK(cfg.get_long("train.iterations", 0) == 500);
        CHECK(cfg.get_list("train.alpha", {}) == std::vector<double>{1.0, 2.5, 3.0});
        CHECK(cfg.get_strings("train.tags", {}) == std::vector<std::string>{"a", "b", "c"});
        CHECK(cfg.get_string("train.absent", "dflt") == "dflt");
        CHECK(cfg.line_of("train.lr") == 6);
        CHECK(cfg.unused_keys().empty()); // everything above was read
    }
    SUBCASE("unread keys are reported with their line numbers") {
        ConfigFile cfg = ConfigFile::parse_text("[train]\nlr = 0.1\nmystery = 3\n");
        cfg.get_double("train.lr", 0.0);
        std::vector<std::string> unused = cfg.unused_keys();
        REQUIRE(unused.size() == 1);
        CHECK(unused[0] == "train.mystery (line 3)");
    }
    SUBCASE("parse errors carry the line number") {
        CHECK(contains(thrown_message([] { ConfigFile::parse_text("[train\nlr=1\n"); }),
                       ":1: malformed section header"));
        CHECK(contains(thrown_message([] { ConfigFile::parse_text("lr = 1\n"); }),
                       ":1: key before any [section] header"));
        CHECK(contains(thrown_message([] { ConfigFile::parse_text("[a]\njust words\n"); }),
                       ":2: expected key=value"));
        CHECK(contains(thrown_message([] { ConfigFile::parse_text("[a]\n= 3\n"); }),
                       ":2: empty key"));
        CHECK(contains(thrown_message([] { ConfigFile::parse_text("[]\n"); }),
                       ":1:"));
    }
    SUBCASE("duplicate keys name both lines") {
        std::string msg = thrown_message(
            [] { ConfigFile::parse_text("[train]\nlr = 1\nlr = 2\n", "d.cfg"); });
        CHECK(contains(msg, "d.cfg:3"));
        CHECK(contains(msg, "duplicate key 'train.lr'"));
        CHECK(contains(msg, "first at line 2"));
    }
    SUBCASE("typed getters validate their values") {
        ConfigFile cfg = ConfigFile::parse_text("[t]\nx = abc\ny = 1.5\n", "v.cfg");
        std::string msg = thrown_message([&] { cfg.get_double("t.x", 0.0); });
        CHECK(contains(msg, "v.cfg:2"));
        CHECK(contains(msg, "not a number"));
        CHECK(contains(thrown_message([&] { cfg.get_long("t.y", 0); }), "not an integer"));
        CHECK(contains(thrown_message([&] { cfg.get_list("t.x", {}) ; }), "not a number"));
    }
    SUBCASE("missing file names the path") {
        std::string msg =
            thrown_message([] { ConfigFile::parse_file("/no/such/dir/progtr.cfg"); });
        CHECK(contains(msg, "/no/such/dir/progtr.cfg"));
    }
}

TEST_CASE("snr grid parsing") {
    CHECK(parse_snr_grid("0:30:5") ==
          std::vector<double>{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0});
    CHECK(parse_snr_grid("12") == std::vector<double>{12.0});
    CHECK(parse_snr_grid("6, 10, 14") == std::vector<double>{6.0, 10.0, 14.0});
    CHECK(parse_snr_grid("-5:5:2.5") == std::vector<double>{-5.0, -2.5, 0.0, 2.5, 5.0});
    CHECK(parse_snr_grid("4:4:1") == std::vector<double>{4.0}); // hi inclusive
    CHECK_THROWS_AS(parse_snr_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("0:10"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("0:10:0"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("10:0:5"), ConfigError);
    CHECK_THROWS_AS(parse_snr_grid("a,b"), ConfigError);
}

TEST_CASE("scenario preset values are locked") {
    SUBCASE("discrete 2-use") {
        TrainConfig c = preset_train_config("discrete_t2b8");
        CHECK(c.net.b == 8);
        CHECK(c.net.T == 2);
        CHECK(c.net.input_kind == InputKind::bits);
        CHECK(c.loss.alpha == std::vector<double>{10.0, 25.0});
        CHECK(c.loss.lambda == 1e3);
        CHECK(c.loss.p_max == 1.0);
        CHECK(c.channel.variant == ChannelVariant::awgn);
        CHECK(c.num_users == 1);
    }
    SUBCASE("discrete 4-use") {
        TrainConfig c = preset_train_config("discrete_t4b16");
        CHECK(c.net.b == 16);
        CHECK(c.net.T == 4);
        CHECK(c.net.input_kind == InputKind::bits);
        CHECK(c.loss.alpha == std::vector<double>{10.0, 25.0, 50.0, 100.0});
    }
    SUBCASE("continuous presets") {
        TrainConfig a = preset_train_config("gauss_b2t1");
        CHECK(a.net.b == 2);
        CHECK(a.net.T == 1);
        CHECK(a.net.input_kind == InputKind::reals);
        CHECK(a.loss.alpha == std::vector<double>{10.0});

        TrainConfig b = preset_train_config("gauss_b1t1");
        CHECK(b.net.b == 1);
        CHECK(b.net.T == 1);
        CHECK(b.loss.alpha == std::vector<double>{10.0});

        TrainConfig c = preset_train_config("gauss_b2t2");
        CHECK(c.net.b == 2);
        CHECK(c.net.T == 2);
        CHECK(c.loss.alpha == std::vector<double>{0.0, 5000.0});
        CHECK(c.loss.lambda == 50000.0);

        TrainConfig d = preset_train_config("gauss_b4t2");
        CHECK(d.net.b == 4);
        CHECK(d.net.T == 2);
        CHECK(d.loss.alpha == std::vector<double>{10.0, 25.0});
    }
    SUBCASE("amplifier preset") {
        TrainConfig c = preset_train_config("twta_t2b8");
        CHECK(c.net.b == 8);
        CHECK(c.net.T == 2);
        CHECK(c.net.input_kind == InputKind::bits);
        CHECK(c.channel.variant == ChannelVariant::twta_awgn);
        CHECK(c.channel.twta.alpha_rho == 2.1587);
        CHECK(c.channel.twta.beta_rho == 1.1517);
        CHECK(c.channel.twta.alpha_psi == 4.003);
        CHECK(c.channel.twta.beta_psi == 9.1040);
    }
    SUBCASE("multiple access preset") {
        TrainConfig c = preset_train_config("mac_m4t4b6");
        CHECK(c.net.b == 6);
        CHECK(c.net.T == 4);
        CHECK(c.num_users == 4);
        CHECK(c.channel.variant == ChannelVariant::mac_awgn);
        REQUIRE(c.channel.h.size() == 4);
        for (const auto& h : c.channel.h) CHECK(h == std::complex<double>(1.0, 0.0));
        CHECK(c.loss.alpha == std::vector<double>{10.0, 25.0, 50.0, 100.0});
    }
    SUBCASE("name list and rejection") {
        const std::vector<std::string>& names = preset_names();
        CHECK(names.size() == 9);
        CHECK(names.back() == "custom");
        for (const std::string& n : names) CHECK_NOTHROW(preset_train_config(n));
        CHECK_THROWS_AS(preset_train_config("gauss_b9t9"), ConfigError);
    }
}

TEST_CASE("experiment resolution") {
    SUBCASE("preset with overrides") {
        Experiment exp = load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                                "scenario = discrete_t2b8\n"
                                                                "seed = 9\n"
                                                                "output_dir = /tmp/x\n"
                                                                "[train]\n"
                                                                "iterations = 1234\n"
                                                                "batch_size = 300\n"
                                                                "lr = 0.0005\n"
                                                                "snr_lo_db = 5\n"
                                                                "snr_hi_db = 25\n"
                                                                "[eval]\n"
                                                                "snr = 0:20:10\n"
                                                                "samples = 5000\n"));
        CHECK(exp.train.scenario == "discrete_t2b8");
        CHECK(exp.train.seed == 9);
        CHECK(exp.train.iterations == 1234);
        CHECK(exp.train.batch_size == 300);
        CHECK(exp.train.lr == 0.0005);
        CHECK(exp.train.snr_lo_db == 5.0);
        CHECK(exp.train.snr_hi_db == 25.0);
        CHECK(exp.output_dir == "/tmp/x");
        CHECK(exp.eval_snr == std::vector<double>{0.0, 10.0, 20.0});
        CHECK(exp.eval_samples == 5000);
        // bits-mode default metrics
        CHECK(exp.eval_metrics == std::vector<std::string>{"ber", "mi"});
    }
    SUBCASE("defaults when sections are omitted") {
        Experiment exp = load_experiment(
            ConfigFile::parse_text("[experiment]\nscenario = gauss_b2t1\n"));
        CHECK(exp.train.seed == 1);
        CHECK(exp.eval_snr ==
              std::vector<double>{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0});
        CHECK(exp.eval_metrics == std::vector<std::string>{"mse", "mi"});
        CHECK(exp.eval_samples == 100000);
    }
    SUBCASE("custom scenario reads model and channel sections") {
        Experiment exp = load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                                "scenario = custom\n"
                                                                "[model]\n"
                                                                "b = 3\n"
                                                                "T = 2\n"
                                                                "input = reals\n"
                                                                "layers = 2\n"
                                                                "state_size = 16\n"
                                                                "M = 2\n"
                                                                "[channel]\n"
                                                                "variant = mac_awgn\n"
                                                                "h_re = 1, 0.5\n"
                                                                "h_im = 0, -0.5\n"));
        CHECK(exp.train.net.b == 3);
        CHECK(exp.train.net.T == 2);
        CHECK(exp.train.net.input_kind == InputKind::reals);
        CHECK(exp.train.net.layers == 2);
        CHECK(exp.train.net.state_size == 16);
        CHECK(exp.train.num_users == 2);
        CHECK(exp.train.channel.variant == ChannelVariant::mac_awgn);
        REQUIRE(exp.train.channel.h.size() == 2);
        CHECK(exp.train.channel.h[1] == std::complex<double>(0.5, -0.5));
        // ramp default for a 2-use horizon
        CHECK(exp.train.loss.alpha == std::vector<double>{10.0, 25.0});
    }
    SUBCASE("alpha ramp extends for long horizons but can be overridden") {
        Experiment exp = load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                                "scenario = custom\n"
                                                                "[model]\n"
                                                                "b = 2\nT = 6\ninput = bits\n"));
        CHECK(exp.train.loss.alpha ==
              std::vector<double>{10.0, 25.0, 50.0, 100.0, 200.0, 400.0});
        Experiment ovr = load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                                "scenario = custom\n"
                                                                "[model]\n"
                                                                "b = 2\nT = 2\ninput = bits\n"
                                                                "[train]\n"
                                                                "alpha = 7, 8\n"));
        CHECK(ovr.train.loss.alpha == std::vector<double>{7.0, 8.0});
    }
    SUBCASE("unknown or inapplicable keys are rejected with lines") {
        std::string typo = thrown_message([] {
            load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                   "scenario = gauss_b2t1\n"
                                                   "[train]\n"
                                                   "iteratons = 10\n",
                                                   "t.cfg"));
        });
        CHECK(contains(typo, "t.cfg"));
        CHECK(contains(typo, "train.iteratons (line 4)"));
        // [model] is reserved for the custom scenario
        std::string inapplicable = thrown_message([] {
            load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                   "scenario = gauss_b2t1\n"
                                                   "[model]\n"
                                                   "b = 4\n"));
        });
        CHECK(contains(inapplicable, "model.b"));
    }
    SUBCASE("field validation errors") {
        CHECK_THROWS_AS(load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                               "scenario = custom\n"
                                                               "[model]\n"
                                                               "input = floats\n")),
                        ConfigError);
        CHECK_THROWS_AS(load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                               "scenario = custom\n"
                                                               "[channel]\n"
                                                               "variant = cable\n")),
                        ConfigError);
        CHECK_THROWS_AS(load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                               "scenario = custom\n"
                                                               "[model]\nM = 2\n"
                                                               "[channel]\n"
                                                               "variant = mac_awgn\n"
                                                               "h_re = 1\nh_im = 0\n")),
                        ConfigError); // one gain per transmitter
        CHECK_THROWS_AS(load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                               "scenario = gauss_b2t1\n"
                                                               "[train]\n"
                                                               "fairness_scope = some\n")),
                        ConfigError);
        CHECK_THROWS_AS(load_experiment(ConfigFile::parse_text("[experiment]\n"
                                                               "scenario = gauss_b2t1\n"
                                                               "[eval]\n"
                                                               "metrics = mse, sharpness\n")),
                        ConfigError);
    }
}
