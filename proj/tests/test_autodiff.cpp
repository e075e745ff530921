#include <doctest.h>

#include <cmath>
#include <vector>

#include "progtr/adam.hpp"
#include "progtr/errors.hpp"
#include "progtr/gradcheck.hpp"
#include "progtr/nn.hpp"
#include "progtr/tape.hpp"

using namespace progtr;
using ad::Parameter;
using ad::ParameterSet;
using ad::Tape;
using ad::Tensor;
using ad::Var;

TEST_CASE("tensor basics") {
    Tensor z({2, 3});
    CHECK(z.size() == 6);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == 0.0);

    Tensor t({2, 2}, {1, 2, 3, 4});
    CHECK(t.at(0, 1) == 2.0);
    CHECK(t.at(1, 0) == 3.0);
    CHECK(t.rows() == 2);
    CHECK(t.cols() == 2);

    CHECK_THROWS_AS(Tensor({2, 2}, {1, 2, 3}), DimensionError);

    Tensor v({3}, {1, 2, 3});
    CHECK(v.rows() == 1);
    CHECK(v.cols() == 3);

    Tensor s = Tensor::scalar(7.5);
    CHECK(s.is_scalar());
    CHECK(s[0] == 7.5);

    t.fill(0.25);
    CHECK(t.at(1, 1) == 0.25);
    CHECK(t.all_finite());
    t[0] = std::nan("");
    CHECK_FALSE(t.all_finite());
}

TEST_CASE("parameter set enforces unique names and stable addresses") {
    ParameterSet ps;
    Parameter& a = ps.add("w", Tensor({2, 2}, {1, 2, 3, 4}));
    CHECK(a.grad.same_shape(a.value));
    CHECK(a.grad[0] == 0.0);
    CHECK_THROWS_AS(ps.add("w", Tensor({1}, {0})), DimensionError);

    Parameter* addr = &ps.at("w");
    ps.add("b", Tensor({2}, {0, 0}));
    ps.add("c", Tensor({3}, {0, 0, 0}));
    CHECK(&ps.at("w") == addr); // unique_ptr storage keeps references valid
    CHECK(ps.size() == 3);
    CHECK(ps.value_count() == 9);
    CHECK(ps.contains("b"));
    CHECK_FALSE(ps.contains("missing"));
}

TEST_CASE("dense_forward examples") {
    Tape t;
    SUBCASE("identity weights pass the input through") {
        Var x = t.constant(Tensor({1, 2}, {1, 2}));
        Var w = t.constant(Tensor({2, 2}, {1, 0, 0, 1}));
        Var b = t.constant(Tensor({2}, {0, 0}));
        Var y = nn::dense_forward(t, x, w, b);
        CHECK(y.value().at(0, 0) == 1.0);
        CHECK(y.value().at(0, 1) == 2.0);
    }
    SUBCASE("scalar affine") {
        Var x = t.constant(Tensor({1, 1}, {3}));
        Var w = t.constant(Tensor({1, 1}, {2}));
        Var b = t.constant(Tensor({1}, {1}));
        CHECK(nn::dense_forward(t, x, w, b).value()[0] == 7.0);
    }
    SUBCASE("2x3 times 3x2 against a hand-multiplied product") {
        // [[1,2,3],[4,5,6]] * [[7,8],[9,10],[11,12]] + [1,-1]
        // row0: 1*7+2*9+3*11 = 58, 1*8+2*10+3*12 = 64
        // row1: 4*7+5*9+6*11 = 139, 4*8+5*10+6*12 = 154
        Var x = t.constant(Tensor({2, 3}, {1, 2, 3, 4, 5, 6}));
        Var w = t.constant(Tensor({3, 2}, {7, 8, 9, 10, 11, 12}));
        Var b = t.constant(Tensor({2}, {1, -1}));
        Var y = nn::dense_forward(t, x, w, b);
        CHECK(y.value().at(0, 0) == 59.0);
        CHECK(y.value().at(0, 1) == 63.0);
        CHECK(y.value().at(1, 0) == 140.0);
        CHECK(y.value().at(1, 1) == 153.0);
    }
    SUBCASE("shape mismatch throws") {
        Var x = t.constant(Tensor({1, 3}, {1, 2, 3}));
        Var w = t.constant(Tensor({2, 2}, {1, 0, 0, 1}));
        CHECK_THROWS_AS(t.matmul(x, w), DimensionError);
    }
}

TEST_CASE("backward examples") {
    SUBCASE("loss = sum x^2") {
        Tape t;
        ParameterSet ps;
        ps.add("x", Tensor({3}, {1, -2, 3}));
        Var x = t.param(ps.at("x"));
        Var loss = t.sum(t.mul(x, x));
        CHECK(loss.value()[0] == 14.0);
        t.backward(loss);
        CHECK(ps.at("x").grad[0] == doctest::Approx(2.0));
        CHECK(ps.at("x").grad[1] == doctest::Approx(-4.0));
        CHECK(ps.at("x").grad[2] == doctest::Approx(6.0));
    }
    SUBCASE("loss = sigmoid(w) at w=0 has grad 0.25") {
        Tape t;
        ParameterSet ps;
        ps.add("w", Tensor({1}, {0.0}));
        Var loss = t.sum(t.sigmoid(t.param(ps.at("w"))));
        CHECK(loss.value()[0] == doctest::Approx(0.5));
        t.backward(loss);
        CHECK(ps.at("w").grad[0] == doctest::Approx(0.25));
    }
    SUBCASE("non-scalar loss rejected") {
        Tape t;
        Var x = t.constant(Tensor({2}, {1, 2}));
        CHECK_THROWS_AS(t.backward(x), DimensionError);
    }
    SUBCASE("grads accumulate when a parameter is used twice") {
        Tape t;
        ParameterSet ps;
        ps.add("w", Tensor({1}, {3.0}));
        Var w = t.param(ps.at("w"));
        Var loss = t.sum(t.add(w, w)); // d/dw (2w) = 2
        t.backward(loss);
        CHECK(ps.at("w").grad[0] == doctest::Approx(2.0));
    }
}

TEST_CASE("a NaN in the forward pass raises NumericError naming the node") {
    Tape t;
    Var x = t.constant(Tensor({1}, {1.0}), "probe");
    Tensor bad({1}, {std::nan("")});
    try {
        t.custom({x}, bad, [](Tape&, ad::NodeId) {}, "bad_op");
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("bad_op") != std::string::npos);
    }
}

TEST_CASE("forward values and gradients are bit-identical across repeated runs") {
    auto run = [](std::vector<double>& grads) {
        RngStream rng(5, "det");
        ParameterSet ps;
        nn::Dense d = nn::Dense::create(ps, "d", 4, 3, rng);
        Tensor x({2, 4});
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
        Tape t;
        Var y = d.forward(t, t.constant(x));
        Var loss = t.mean(t.mul(y, y));
        t.backward(loss);
        for (std::size_t p = 0; p < ps.size(); ++p) {
            for (std::size_t i = 0; i < ps[p].grad.size(); ++i) grads.push_back(ps[p].grad[i]);
        }
        return loss.value()[0];
    };
    std::vector<double> g1, g2;
    double l1 = run(g1), l2 = run(g2);
    CHECK(l1 == l2);
    REQUIRE(g1.size() == g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("elementwise primitive gradients match finite differences") {
    RngStream rng(17, "prim");
    ParameterSet ps;
    Tensor x0({2, 3});
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = rng.normal();
    ps.add("x", x0);
    auto check = [&](const char* which) {
        auto f = [&, which](ParameterSet& p) {
            Tape t;
            Var x = t.param(p.at("x"));
            Var y;
            std::string w(which);
            if (w == "sigmoid") y = t.sigmoid(x);
            if (w == "tanh") y = t.tanh(x);
            if (w == "relu") y = t.relu(x);
            if (w == "affine") y = t.affine(x, -2.5, 0.75);
            if (w == "mul") y = t.mul(x, x);
            Var loss = t.mean(y);
            t.backward(loss);
            return loss.value()[0];
        };
        ad::GradCheckReport rep = ad::gradient_check(f, ps);
        INFO(which, " max_rel_err=", rep.max_rel_err);
        CHECK(rep.ok(1e-6));
    };
    check("sigmoid");
    check("tanh");
    check("relu");
    check("affine");
    check("mul");
}

TEST_CASE("gradient_check examples") {
    SUBCASE("linear function is exact to rounding") {
        ParameterSet ps;
        ps.add("w", Tensor({4}, {0.5, -1.0, 2.0, 0.1}));
        auto f = [](ParameterSet& p) {
            Tape t;
            Var w = t.param(p.at("w"));
            Var loss = t.sum(t.affine(w, 3.0, 1.0));
            t.backward(loss);
            return loss.value()[0];
        };
        ad::GradCheckReport rep = ad::gradient_check(f, ps);
        CHECK(rep.max_rel_err < 1e-10);
        CHECK(rep.coords_checked == 4);
    }
    SUBCASE("a corrupted gradient is reported by name") {
        ParameterSet ps;
        ps.add("good", Tensor({2}, {1.0, 2.0}));
        ps.add("evil", Tensor({2}, {0.5, -0.5}));
        auto f = [](ParameterSet& p) {
            Tape t;
            Var g = t.param(p.at("good"));
            Var e = t.param(p.at("evil"));
            Var loss = t.add(t.sum(t.mul(g, g)), t.sum(t.mul(e, e)));
            t.backward(loss);
            p.at("evil").grad[0] += 0.5; // inject a wrong analytic gradient
            return loss.value()[0];
        };
        ad::GradCheckReport rep = ad::gradient_check(f, ps);
        CHECK_FALSE(rep.ok(1e-4));
        CHECK(rep.worst_param == "evil");
        REQUIRE(rep.offenders.size() == 1);
        CHECK(rep.offenders[0] == "evil");
    }
    SUBCASE("coordinate sampling visits the requested number") {
        ParameterSet ps;
        Tensor big({10, 10});
        for (std::size_t i = 0; i < big.size(); ++i) big[i] = 0.01 * static_cast<double>(i);
        ps.add("w", big);
        auto f = [](ParameterSet& p) {
            Tape t;
            Var w = t.param(p.at("w"));
            Var loss = t.sum(t.mul(w, w));
            t.backward(loss);
            return loss.value()[0];
        };
        RngStream rng(3, "sample");
        ad::GradCheckReport rep = ad::gradient_check(f, ps, 1e-5, 7, &rng);
        CHECK(rep.coords_checked == 7);
        CHECK(rep.ok(1e-6));
    }
}

TEST_CASE("gru cell examples") {
    SUBCASE("all-zero parameters halve the state") {
        ParameterSet ps;
        RngStream rng(1, "gru");
        nn::GruCell cell = nn::GruCell::create(ps, "g", 2, 3, rng);
        for (std::size_t i = 0; i < ps.size(); ++i) ps[i].value.fill(0.0);
        Tape t;
        Var x = t.constant(Tensor({1, 2}, {0.3, -0.7}));
        Var h = t.constant(Tensor({1, 3}, {1.0, -2.0, 0.5}));
        Var h2 = cell.forward(t, x, h);
        CHECK(h2.value()[0] == doctest::Approx(0.5));
        CHECK(h2.value()[1] == doctest::Approx(-1.0));
        CHECK(h2.value()[2] == doctest::Approx(0.25));
    }
    SUBCASE("zero input and zero state stay zero (biases are zero)") {
        ParameterSet ps;
        RngStream rng(2, "gru");
        nn::GruCell cell = nn::GruCell::create(ps, "g", 2, 3, rng);
        Tape t;
        Var x = t.constant(Tensor({1, 2}));
        Var h = t.constant(Tensor({1, 3}));
        Var h2 = cell.forward(t, x, h);
        for (int i = 0; i < 3; ++i) CHECK(h2.value()[static_cast<std::size_t>(i)] == 0.0);
    }
    SUBCASE("random small case matches a scalar recomputation") {
        // state size 1, input size 1: everything is scalar arithmetic.
        ParameterSet ps;
        RngStream rng(3, "gru");
        nn::GruCell cell = nn::GruCell::create(ps, "g", 1, 1, rng);
        double wz = 0.31, uz = -0.55, bz = 0.11;
        double wr = -0.42, ur = 0.27, br = -0.05;
        double wc = 0.73, uc = 0.12, bc = 0.21;
        ps.at("g.Wz").value[0] = wz;
        ps.at("g.Uz").value[0] = uz;
        ps.at("g.bz").value[0] = bz;
        ps.at("g.Wr").value[0] = wr;
        ps.at("g.Ur").value[0] = ur;
        ps.at("g.br").value[0] = br;
        ps.at("g.Wc").value[0] = wc;
        ps.at("g.Uc").value[0] = uc;
        ps.at("g.bc").value[0] = bc;
        double x = 0.8, h = -0.6;
        auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
        double z = sig(x * wz + h * uz + bz);
        double r = sig(x * wr + h * ur + br);
        double c = std::tanh(x * wc + (r * h) * uc + bc);
        double expect = (1.0 - z) * h + z * c;

        Tape t;
        Var hv = cell.forward(t, t.constant(Tensor({1, 1}, {x})), t.constant(Tensor({1, 1}, {h})));
        CHECK(hv.value()[0] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("gru stack gradient matches finite differences") {
    RngStream rng(9, "stack");
    ParameterSet ps;
    nn::GruStack stack = nn::GruStack::create(ps, "s", 3, 4, 2, rng);
    Tensor x({2, 3});
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    auto f = [&](ParameterSet& p) {
        (void)p;
        Tape t;
        auto hs = stack.initial_state(t, 2);
        Var h1 = stack.forward(t, t.constant(x), hs);
        Var h2 = stack.forward(t, t.constant(x), hs); // two unrolled steps
        Var loss = t.mean(t.mul(h2, t.add(h1, h2)));
        t.backward(loss);
        return loss.value()[0];
    };
    RngStream coord_rng(11, "coords");
    ad::GradCheckReport rep = ad::gradient_check(f, ps, 1e-5, 10, &coord_rng);
    INFO("max_rel_err=", rep.max_rel_err, " at ", rep.worst_param);
    CHECK(rep.ok(1e-4));
}

TEST_CASE("adam examples") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        ParameterSet ps;
        ps.add("w", Tensor({2}, {1.5, -2.5}));
        ad::Adam opt(0.1);
        opt.step(ps);
        CHECK(ps.at("w").value[0] == 1.5);
        CHECK(ps.at("w").value[1] == -2.5);
        CHECK(opt.step_count() == 1);
    }
    SUBCASE("first step moves by about -lr*sign(g)") {
        ParameterSet ps;
        ps.add("w", Tensor({1}, {0.0}));
        ps.at("w").grad[0] = 3.7; // any nonzero gradient, eps << |g|
        ad::Adam opt(0.01);
        opt.step(ps);
        CHECK(ps.at("w").value[0] == doctest::Approx(-0.01).epsilon(1e-6));
        CHECK(ps.at("w").grad[0] == 0.0); // grads cleared by the step
    }
    SUBCASE("three steps on a quadratic match a scalar hand-rolled trace") {
        const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
        double w_ref = 2.0, m = 0.0, v = 0.0;
        ParameterSet ps;
        ps.add("w", Tensor({1}, {2.0}));
        ad::Adam opt(lr, b1, b2, eps);
        for (int k = 1; k <= 3; ++k) {
            double g = 2.0 * w_ref; // d/dw w^2 at the reference iterate
            m = b1 * m + (1 - b1) * g;
            v = b2 * v + (1 - b2) * g * g;
            double mhat = m / (1 - std::pow(b1, k));
            double vhat = v / (1 - std::pow(b2, k));
            w_ref -= lr * mhat / (std::sqrt(vhat) + eps);

            Tape t;
            Var wv = t.param(ps.at("w"));
            Var loss = t.sum(t.mul(wv, wv));
            t.backward(loss);
            opt.step(ps);
            CHECK(ps.at("w").value[0] == doctest::Approx(w_ref).epsilon(1e-12));
        }
        CHECK(opt.step_count() == 3);
    }
    SUBCASE("moments stay finite on a longer run") {
        ParameterSet ps;
        ps.add("w", Tensor({1}, {1.0}));
        ad::Adam opt(0.05);
        for (int k = 0; k < 200; ++k) {
            Tape t;
            Var wv = t.param(ps.at("w"));
            Var loss = t.sum(t.mul(wv, wv));
            t.backward(loss);
            opt.step(ps);
        }
        CHECK(std::isfinite(ps.at("w").value[0]));
        CHECK(std::abs(ps.at("w").value[0]) < 1.0); // heading toward the minimum
    }
}

TEST_CASE("activation clamp keeps extreme inputs finite in forward and backward") {
    ParameterSet ps;
    ps.add("w", Tensor({2}, {500.0, -500.0}));
    Tape t;
    Var w = t.param(ps.at("w"));
    Var s = t.sigmoid(w);
    Var loss = t.sum(t.add(s, t.tanh(w)));
    CHECK(s.value()[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.value()[1] == doctest::Approx(0.0).epsilon(1e-10));
    t.backward(loss);
    CHECK(std::isfinite(ps.at("w").grad[0]));
    CHECK(std::isfinite(ps.at("w").grad[1]));
}

TEST_CASE("concat_cols splits gradients back to its inputs") {
    ParameterSet ps;
    ps.add("a", Tensor({2, 2}, {1, 2, 3, 4}));
    ps.add("b", Tensor({2, 1}, {5, 6}));
    auto f = [](ParameterSet& p) {
        Tape t;
        Var c = t.concat_cols({t.param(p.at("a")), t.param(p.at("b"))});
        Var loss = t.mean(t.mul(c, c));
        t.backward(loss);
        return loss.value()[0];
    };
    ad::GradCheckReport rep = ad::gradient_check(f, ps);
    CHECK(rep.ok(1e-6));
}
