#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "twnp/nn.hpp"

using namespace twnp;

TEST_CASE("lstm_step with zero parameters gives zero state") {
    ParamStore store(1);
    auto p = LstmParams::create(store, "cell", 3, 2);
    for (int s = 0; s < store.count(); ++s) store.value(s).setZero();
    Graph g(store);
    Expr x = g.input(Mat::Constant(3, 1, 0.7));
    Expr h0 = g.zeros(2, 1);
    Expr c0 = g.zeros(2, 1);
    auto [h, c] = lstm_step(g, x, h0, c0, p);
    CHECK(g.value(h).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(g.value(c).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("saturated gates copy the cell state") {
    ParamStore store(1);
    auto p = LstmParams::create(store, "cell", 2, 2);
    for (int s = 0; s < store.count(); ++s) store.value(s).setZero();
    store.value(p.b_f).setConstant(20.0);
    store.value(p.b_i).setConstant(-20.0);
    Graph g(store);
    Mat c_prev(2, 1);
    c_prev << 0.3, -1.2;
    auto [h, c] = lstm_step(g, g.input(Mat::Random(2, 1)), g.zeros(2, 1),
                            g.input(c_prev), p);
    CHECK((g.value(c) - c_prev).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("lstm_step gradient matches finite differences") {
    ParamStore store(7);
    auto p = LstmParams::create(store, "cell", 3, 2);
    Mat x = Mat::Random(3, 1), h0 = Mat::Random(2, 1), c0 = Mat::Random(2, 1);
    auto fn = [&]() {
        Graph g(store);
        auto [h, c] = lstm_step(g, g.input(x), g.input(h0), g.input(c0), p);
        Expr loss = g.sum_all(g.concat_rows({h, c}));
        g.backward(loss);
        return g.scalar(loss);
    };
    auto report = grad_check(fn, store, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("bilstm shapes and zero case") {
    ParamStore store(2);
    auto p = BiLstmParams::create(store, "enc", 2, 4, 3, 0.0);
    Graph g(store);
    std::vector<Expr> seq;
    for (int t = 0; t < 5; ++t) seq.push_back(g.input(Mat::Random(4, 1)));
    auto out = bilstm(g, seq, p);
    REQUIRE(out.size() == 5);
    for (Expr e : out) CHECK(g.value(e).rows() == 6);

    for (int s = 0; s < store.count(); ++s) store.value(s).setZero();
    Graph g2(store);
    std::vector<Expr> seq2{g2.input(Mat::Constant(4, 1, 1.0))};
    auto out2 = bilstm(g2, seq2, p);
    CHECK(g2.value(out2[0]).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    Graph g3(store);
    CHECK_THROWS(bilstm(g3, {}, p));
}

TEST_CASE("bilstm gradient on a length-3 sequence") {
    ParamStore store(11);
    auto p = BiLstmParams::create(store, "enc", 2, 3, 2, 0.0);
    std::vector<Mat> xs{Mat::Random(3, 1), Mat::Random(3, 1), Mat::Random(3, 1)};
    auto fn = [&]() {
        Graph g(store);
        std::vector<Expr> seq;
        for (const auto& x : xs) seq.push_back(g.input(x));
        auto out = bilstm(g, seq, p);
        Expr loss = g.sum_all(g.concat_rows(out));
        g.backward(loss);
        return g.scalar(loss);
    };
    auto report = grad_check(fn, store, 1e-4);
    CHECK(report.pass);
}

TEST_CASE("mlp analytic cases and gradient") {
    ParamStore store(3);
    auto p = MlpParams::create(store, "mlp", 1, 1, 1);
    for (int s = 0; s < store.count(); ++s) store.value(s).setZero();
    Graph g(store);
    CHECK(g.scalar(mlp(g, g.input(Mat::Constant(1, 1, 0.4)), p)) == doctest::Approx(0.0));

    store.value(p.w1).setConstant(1.0);
    store.value(p.w2).setConstant(1.7);
    Graph g2(store);
    double y = g2.scalar(mlp(g2, g2.input(Mat::Constant(1, 1, 0.4)), p));
    CHECK(y == doctest::Approx(std::tanh(0.4) * 1.7));

    ParamStore store2(5);
    auto p2 = MlpParams::create(store2, "mlp", 4, 3, 2);
    Mat x = Mat::Random(4, 1);
    auto fn = [&]() {
        Graph gg(store2);
        Expr loss = gg.sum_all(mlp(gg, gg.input(x), p2));
        gg.backward(loss);
        return gg.scalar(loss);
    };
    CHECK(grad_check(fn, store2, 1e-4).pass);
}

TEST_CASE("adam first step magnitude and zero-grad behavior") {
    AdamConfig cfg;
    ParamStore store(9);
    store.add_zeros("theta", 1, 1);
    store.value(0)(0, 0) = 0.5;
    store.grad(0)(0, 0) = 0.37;
    store.adam_step(cfg);
    const double expected = cfg.lr * 0.37 / (0.37 + cfg.eps);
    CHECK(0.5 - store.value(0)(0, 0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(store.step() == 1);

    ParamStore fresh(9);
    fresh.add_zeros("theta", 2, 2);
    fresh.value(0) << 1, 2, 3, 4;
    Mat before = fresh.value(0);
    fresh.zero_grads();
    fresh.adam_step(cfg);
    CHECK((fresh.value(0) - before).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(fresh.step() == 1);
}

TEST_CASE("identical seeds give bit-identical stores") {
    auto run = [](std::uint64_t seed) {
        ParamStore store(seed);
        store.add("w", 4, 3);
        store.add_zeros("b", 4, 1);
        AdamConfig cfg;
        for (int it = 0; it < 5; ++it) {
            store.zero_grads();
            Graph g(store);
            Expr loss = g.sum_all(g.tanh(g.affine(g.param("w"), g.input(Mat::Constant(3, 1, 0.5)),
                                                  g.param("b"))));
            g.backward(loss);
            store.adam_step(cfg);
        }
        return std::make_pair(Mat(store.value(0)), Mat(store.value(1)));
    };
    auto [w1, b1] = run(42);
    auto [w2, b2] = run(42);
    CHECK(w1 == w2);
    CHECK(b1 == b2);
}

TEST_CASE("grad_check on a quadratic is nearly exact") {
    ParamStore store(3);
    store.add("theta", 3, 2);
    auto fn = [&]() {
        Graph g(store);
        Expr t = g.param("theta");
        Expr loss = g.sum_all(g.cmult(t, t));
        g.backward(loss);
        return g.scalar(loss);
    };
    auto report = grad_check(fn, store, 1e-8);
    CHECK(report.pass);
}

TEST_CASE("grad_check rejects non-finite losses") {
    ParamStore store(3);
    store.add("theta", 1, 1);
    auto fn = [&]() {
        Graph g(store);
        (void)g;
        return std::numeric_limits<double>::quiet_NaN();
    };
    CHECK_THROWS(grad_check(fn, store, 1e-4));
}

TEST_CASE("softmax is a probability vector") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng.below(8));
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.uniform(-30, 30);
        auto p = softmax(x);
        CHECK(p.minCoeff() >= 0.0);
        CHECK(std::abs(p.sum() - 1.0) < 1e-9);
    }
}

// every differentiable op, randomized small shapes
TEST_CASE("randomized gradient checks over all ops") {
    Rng rng(17);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        ParamStore store(100 + trial);
        const int rows = 2 + static_cast<int>(rng.below(3));
        const int cols = 2 + static_cast<int>(rng.below(3));
        store.add("a", rows, cols);
        store.add("b", rows, cols);
        store.add("w", cols, rows);
        store.add("s", 1, 1);
        const int op = static_cast<int>(rng.below(12));
        const int pick_row = static_cast<int>(rng.below(rows));
        auto fn = [&]() {
            Graph g(store);
            Expr a = g.param("a");
            Expr b = g.param("b");
            Expr out;
            switch (op) {
                case 0: out = g.sum_all(g.matmul(g.param("w"), a)); break;
                case 1: out = g.sum_all(g.add(a, b)); break;
                case 2: out = g.sum_all(g.cmult(a, b)); break;
                case 3: out = g.sum_all(g.tanh(a)); break;
                case 4: out = g.sum_all(g.logistic(a)); break;
                case 5: out = g.sum_all(g.concat_rows({a, b})); break;
                case 6: out = g.sum_all(g.concat_cols({a, b})); break;
                case 7: out = g.sum_all(g.gather_cols(a, {0, 0, cols - 1})); break;
                case 8: out = g.sum_all(g.slice_rows(a, 1, rows - 1)); break;
                case 9: out = g.pick(g.scale(a, -2.5), pick_row, 0); break;
                case 10:
                    out = g.sum_all(g.softmax_col(g.gather_cols(a, {0})));
                    break;
                default:
                    out = g.pick_neg_log_softmax(g.gather_cols(a, {0}), pick_row);
                    break;
            }
            Expr loss = g.sum_all(g.mul_scalar(g.param("s"), out));
            g.backward(loss);
            return g.scalar(loss);
        };
        if (!grad_check(fn, store, 1e-4).pass) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("checkpoint round-trip is bit-identical") {
    ParamStore store(5);
    store.add("layer.w", 3, 4);
    store.add("layer.b", 3, 1);
    const std::string path = "ckpt_roundtrip.twnp";
    store.save(path);

    ParamStore other(6);
    other.add("layer.w", 3, 4);
    other.add("layer.b", 3, 1);
    other.load(path);
    CHECK(other.value(0) == store.value(0));
    CHECK(other.value(1) == store.value(1));

    other.save("ckpt_roundtrip2.twnp");
    std::ifstream f1(path, std::ios::binary), f2("ckpt_roundtrip2.twnp", std::ios::binary);
    std::string c1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string c2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(c1 == c2);
    std::remove(path.c_str());
    std::remove("ckpt_roundtrip2.twnp");
}
