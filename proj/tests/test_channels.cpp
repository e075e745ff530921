#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "progtr/channel.hpp"
#include "progtr/errors.hpp"
#include "progtr/gradcheck.hpp"
#include "progtr/tape.hpp"

using namespace progtr;
using ad::Tape;
using ad::Tensor;
using ad::Var;

TEST_CASE("snr_to_noise_var examples") {
    CHECK(snr_to_noise_var(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(snr_to_noise_var(10.0, 1.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(snr_to_noise_var(20.0, 2.0) == doctest::Approx(0.02).epsilon(1e-14));
    CHECK_THROWS(snr_to_noise_var(10.0, 0.0));
    CHECK_THROWS(snr_to_noise_var(10.0, -1.0));
}

TEST_CASE("awgn examples") {
    SUBCASE("zero noise and unit gain pass the symbols through untouched") {
        Tape t;
        RngStream rng(1, "noise");
        Tensor x({2, 2}, {0.3, -0.4, 1.0, 2.0});
        Var y = awgn_apply(t, t.constant(x), {1.0, 0.0}, 0.0, rng);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(y.value()[i] == x[i]);
    }
    SUBCASE("h = j rotates 1+0j to 0+1j") {
        Tape t;
        RngStream rng(1, "noise");
        Var y = awgn_apply(t, t.constant(Tensor({1, 2}, {1.0, 0.0})), {0.0, 1.0}, 0.0, rng);
        CHECK(y.value()[0] == doctest::Approx(0.0));
        CHECK(y.value()[1] == doctest::Approx(1.0));
    }
    SUBCASE("noise power matches the requested variance") {
        const int n = 1000000;
        Tape t;
        RngStream rng(7, "noise");
        Var y = awgn_apply(t, t.constant(Tensor({n, 2})), {1.0, 0.0}, 0.1, rng);
        double sum = 0.0;
        const Tensor& yv = y.value();
        for (int r = 0; r < n; ++r) sum += yv.at(r, 0) * yv.at(r, 0) + yv.at(r, 1) * yv.at(r, 1);
        CHECK(sum / n == doctest::Approx(0.1).epsilon(0.01)); // spec: 0.1 +- 0.001
    }
    SUBCASE("negative variance is rejected") {
        Tape t;
        RngStream rng(1, "noise");
        CHECK_THROWS_AS(awgn_apply(t, t.constant(Tensor({1, 2})), {1.0, 0.0}, -0.1, rng),
                        DimensionError);
    }
    SUBCASE("noiseless channel is exactly linear in x") {
        Tape t;
        RngStream rng(1, "noise");
        std::complex<double> h{0.6, -0.8};
        Tensor x1({2, 2}, {0.5, 1.5, -2.0, 0.25});
        Tensor x2({2, 2}, {1.0, -1.0, 0.5, 3.0});
        double a = 1.75, b = -0.5;
        Tensor mix(x1.shape());
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x1[i] + b * x2[i];
        Var ym = awgn_apply(t, t.constant(mix), h, 0.0, rng);
        Var y1 = awgn_apply(t, t.constant(x1), h, 0.0, rng);
        Var y2 = awgn_apply(t, t.constant(x2), h, 0.0, rng);
        for (std::size_t i = 0; i < mix.size(); ++i) {
            CHECK(ym.value()[i] ==
                  doctest::Approx(a * y1.value()[i] + b * y2.value()[i]).epsilon(1e-12));
        }
    }
    SUBCASE("gradient through the channel is the fading coefficient") {
        // loss = sum(Re y) gives dL/dx = (a, -b); loss = sum(Im y) gives (b, a).
        std::complex<double> h{0.6, -0.8};
        ad::ParameterSet ps;
        ps.add("x", Tensor({1, 2}, {0.3, 0.7}));
        Tape t;
        RngStream rng(1, "noise");
        Var y = awgn_apply(t, t.param(ps.at("x")), h, 0.0, rng);
        Var loss = t.sum(t.mul(y, t.constant(Tensor({1, 2}, {1.0, 0.0})))); // picks Re y
        t.backward(loss);
        CHECK(ps.at("x").grad[0] == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(ps.at("x").grad[1] == doctest::Approx(0.8).epsilon(1e-12)); // -im(h)
    }
}

TEST_CASE("twta examples") {
    TwtaParams p; // defaults carry the reference parameter set
    CHECK(p.alpha_rho == 2.1587);
    CHECK(p.beta_rho == 1.1517);
    CHECK(p.alpha_psi == 4.003);
    CHECK(p.beta_psi == 9.1040);

    SUBCASE("zero in, zero out") {
        Tape t;
        Var y = twta_distort(t, t.constant(Tensor({1, 2}, {0.0, 0.0})), p);
        CHECK(y.value()[0] == 0.0);
        CHECK(y.value()[1] == 0.0);
    }
    SUBCASE("unit amplitude maps to 1.003253 at phase 0.396180") {
        Tape t;
        Var y = twta_distort(t, t.constant(Tensor({1, 2}, {1.0, 0.0})), p);
        double a = std::hypot(y.value()[0], y.value()[1]);
        double phi = std::atan2(y.value()[1], y.value()[0]);
        CHECK(a == doctest::Approx(1.003253).epsilon(1e-6));
        CHECK(phi == doctest::Approx(0.396180).epsilon(1e-6));
        CHECK(twta_amplitude(1.0, p) == doctest::Approx(1.003253).epsilon(1e-6));
        CHECK(twta_phase(1.0, p) == doctest::Approx(0.396180).epsilon(1e-6));
    }
    SUBCASE("saturation peak location and value") {
        CHECK(twta_peak_input(p) == doctest::Approx(0.9318163).epsilon(1e-6));
        CHECK(twta_peak_output(p) == doctest::Approx(1.0057560).epsilon(1e-6));
        // the peak really is a maximum of A
        double rho_star = twta_peak_input(p);
        CHECK(twta_amplitude(rho_star, p) > twta_amplitude(rho_star * 0.999, p));
        CHECK(twta_amplitude(rho_star, p) > twta_amplitude(rho_star * 1.001, p));
    }
    SUBCASE("amplitude is strictly increasing below saturation") {
        double rho_star = twta_peak_input(p);
        double prev = 0.0;
        for (int k = 1; k <= 200; ++k) {
            double rho = rho_star * k / 200.0;
            double a = twta_amplitude(rho, p);
            CHECK(a > prev);
            prev = a;
        }
    }
    SUBCASE("phase shift is monotone and bounded by alpha_psi/beta_psi") {
        const double bound = 4.003 / 9.1040;
        double prev = -1.0;
        for (int k = 0; k <= 300; ++k) {
            double rho = 5.0 * k / 300.0;
            double psi = twta_phase(rho, p);
            CHECK(psi > prev);
            CHECK(psi < bound);
            prev = psi;
        }
    }
    SUBCASE("tape version agrees with the plain helper") {
        Tape t;
        Tensor x({3, 2}, {0.3, -0.2, -0.9, 0.1, 0.05, 0.7});
        Var y = twta_distort(t, t.constant(x), p);
        for (int r = 0; r < 3; ++r) {
            std::complex<double> out = twta_apply({x.at(r, 0), x.at(r, 1)}, p);
            CHECK(y.value().at(r, 0) == doctest::Approx(out.real()).epsilon(1e-12));
            CHECK(y.value().at(r, 1) == doctest::Approx(out.imag()).epsilon(1e-12));
        }
    }
    SUBCASE("backward Jacobian matches finite differences, including near zero") {
        ad::ParameterSet ps;
        ps.add("x", Tensor({4, 2}, {0.4, -0.3, 1.2, 0.9, 1e-4, -1e-4, 0.0, 0.6}));
        Tensor w({4, 2}, {1.0, -0.5, 0.25, 1.5, 2.0, 1.0, -1.0, 0.75});
        auto f = [&](ad::ParameterSet& q) {
            Tape t;
            Var y = twta_distort(t, t.param(q.at("x")), TwtaParams{});
            Var loss = t.sum(t.mul(y, t.constant(w)));
            t.backward(loss);
            return loss.value()[0];
        };
        ad::GradCheckReport rep = ad::gradient_check(f, ps, 1e-6);
        INFO("max_rel_err=", rep.max_rel_err);
        CHECK(rep.ok(1e-4));
    }
}

TEST_CASE("mac examples") {
    SUBCASE("a single user reduces bit for bit to the plain awgn channel") {
        Tensor x({3, 2}, {0.2, -0.1, 1.0, 0.5, -0.7, 0.3});
        std::complex<double> h{0.9, 0.2};
        auto run_mac = [&]() {
            Tape t;
            RngStream rng(4, "noise");
            return mac_combine(t, {t.constant(x)}, {h}, 0.3, rng).value();
        };
        auto run_awgn = [&]() {
            Tape t;
            RngStream rng(4, "noise");
            return awgn_apply(t, t.constant(x), h, 0.3, rng).value();
        };
        Tensor a = run_mac(), b = run_awgn();
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
    SUBCASE("opposite symbols cancel") {
        Tape t;
        RngStream rng(1, "noise");
        Var y = mac_combine(t,
                            {t.constant(Tensor({1, 2}, {1.0, 0.0})),
                             t.constant(Tensor({1, 2}, {-1.0, 0.0}))},
                            {{1.0, 0.0}, {1.0, 0.0}}, 0.0, rng);
        CHECK(y.value()[0] == 0.0);
        CHECK(y.value()[1] == 0.0);
    }
    SUBCASE("four independent unit-power users superpose to power about 4") {
        const int n = 40000;
        Tape t;
        RngStream rng(11, "inputs");
        std::vector<Var> xs;
        for (int m = 0; m < 4; ++m) {
            Tensor x({n, 2});
            for (int r = 0; r < n; ++r) {
                x.at(r, 0) = rng.normal() * std::sqrt(0.5);
                x.at(r, 1) = rng.normal() * std::sqrt(0.5);
            }
            xs.push_back(t.constant(std::move(x)));
        }
        RngStream noise(1, "noise");
        Var y = mac_combine(t, xs, std::vector<std::complex<double>>(4, {1.0, 0.0}), 0.0, noise);
        double sum = 0.0;
        for (int r = 0; r < n; ++r)
            sum += y.value().at(r, 0) * y.value().at(r, 0) + y.value().at(r, 1) * y.value().at(r, 1);
        CHECK(sum / n == doctest::Approx(4.0).epsilon(0.04));
    }
    SUBCASE("length mismatch is rejected") {
        Tape t;
        RngStream rng(1, "noise");
        std::vector<Var> xs{t.constant(Tensor({1, 2}))};
        CHECK_THROWS_AS(mac_combine(t, xs, {{1.0, 0.0}, {1.0, 0.0}}, 0.0, rng), DimensionError);
        CHECK_THROWS_AS(mac_combine(t, {}, {}, 0.0, rng), DimensionError);
    }
    SUBCASE("gradients flow to every user") {
        ad::ParameterSet ps;
        ps.add("x0", Tensor({2, 2}, {0.1, 0.2, -0.3, 0.4}));
        ps.add("x1", Tensor({2, 2}, {0.5, -0.6, 0.7, 0.8}));
        auto f = [&](ad::ParameterSet& q) {
            Tape t;
            RngStream rng(1, "noise");
            Var y = mac_combine(t, {t.param(q.at("x0")), t.param(q.at("x1"))},
                                {{0.8, 0.1}, {1.0, -0.4}}, 0.0, rng);
            Var loss = t.sum(t.mul(y, y));
            t.backward(loss);
            return loss.value()[0];
        };
        ad::GradCheckReport rep = ad::gradient_check(f, ps);
        CHECK(rep.ok(1e-6));
    }
}

TEST_CASE("noise draws are reproducible per stream identity") {
    RngStream s1(3, "noise", 1);
    RngStream s2(3, "noise", 1);
    Tensor a = draw_noise(5, 0.2, s1);
    Tensor b = draw_noise(5, 0.2, s2);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    RngStream other(3, "noise", 2);
    Tensor c = draw_noise(5, 0.2, other);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != c[i]) differs = true;
    CHECK(differs);
}

TEST_CASE("channel_apply dispatches to the matching simulator") {
    SUBCASE("user count mismatch") {
        Tape t;
        RngStream rng(1, "noise");
        ChannelSpec spec; // one user
        std::vector<Var> xs{t.constant(Tensor({1, 2})), t.constant(Tensor({1, 2}))};
        CHECK_THROWS_AS(channel_apply(t, spec, xs, 0.0, rng), DimensionError);
    }
    SUBCASE("twta_awgn composes amplifier then channel") {
        Tensor x({2, 2}, {0.5, -0.5, 0.9, 0.2});
        ChannelSpec spec;
        spec.variant = ChannelVariant::twta_awgn;
        auto via_dispatch = [&]() {
            Tape t;
            RngStream rng(6, "noise");
            return channel_apply(t, spec, {t.constant(x)}, 0.25, rng).value();
        };
        auto composed = [&]() {
            Tape t;
            RngStream rng(6, "noise");
            Var amp = twta_distort(t, t.constant(x), spec.twta);
            return awgn_apply(t, amp, spec.h[0], 0.25, rng).value();
        };
        Tensor a = via_dispatch(), b = composed();
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}
