#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "evomsn/mlp.hpp"
#include "evomsn/slicing.hpp"
#include "evomsn/stat_predictor.hpp"
#include "oracles.hpp"

using namespace evomsn;

namespace {

std::vector<double> forward_by_hand(const MlpParams& p, const std::vector<double>& x,
                                    FinalAct act) {
    std::vector<double> h(p.hidden_dim());
    for (int i = 0; i < p.hidden_dim(); ++i) {
        double s = p.b1[i];
        for (int j = 0; j < p.in_dim(); ++j) s += p.w1(i, j) * x[j];
        h[i] = std::max(0.0, s);
    }
    std::vector<double> out(p.out_dim());
    for (int i = 0; i < p.out_dim(); ++i) {
        double s = p.b2[i];
        for (int j = 0; j < p.hidden_dim(); ++j) s += p.w2(i, j) * h[j];
        out[i] = act == FinalAct::relu ? std::max(0.0, s) : s;
    }
    return out;
}

}  // namespace

TEST_CASE("mlp_forward agrees with an independent matrix product") {
    std::mt19937_64 rng(31);
    for (FinalAct act : {FinalAct::identity, FinalAct::relu}) {
        const MlpParams p = init_mlp(4, 6, 3, 99);
        std::vector<double> x(4);
        for (auto& v : x) v = uniform(rng, -2.0, 2.0);
        const MlpTrace trace = mlp_forward(p, x, act);
        const auto expect = forward_by_hand(p, x, act);
        REQUIRE(trace.out.size() == expect.size());
        for (std::size_t i = 0; i < expect.size(); ++i)
            CHECK(trace.out[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("init_mlp is seed deterministic and seed sensitive") {
    const MlpParams a = init_mlp(5, 8, 3, 42);
    const MlpParams b = init_mlp(5, 8, 3, 42);
    const MlpParams c = init_mlp(5, 8, 3, 43);
    CHECK(mlp_flatten(a) == mlp_flatten(b));
    CHECK(mlp_flatten(a) != mlp_flatten(c));

    const double bound1 = 1.0 / std::sqrt(5.0);
    const double bound2 = 1.0 / std::sqrt(8.0);
    for (double v : a.w1.data) CHECK(std::abs(v) <= bound1);
    for (double v : a.w2.data) CHECK(std::abs(v) <= bound2);
}

TEST_CASE("a one-unit network reproduces the textbook derivative") {
    // out = w2 * relu(w1 * x), loss = out^2. With w1 = 3, w2 = 1, x = 1 the
    // chain rule gives dloss/dw1 = 2 * out * w2 * x = 6.
    MlpParams p;
    p.w1 = Mat(1, 1);
    p.w1(0, 0) = 3.0;
    p.b1 = {0.0};
    p.w2 = Mat(1, 1);
    p.w2(0, 0) = 1.0;
    p.b2 = {0.0};

    const MlpTrace trace = mlp_forward(p, {1.0}, FinalAct::identity);
    REQUIRE(trace.out[0] == doctest::Approx(3.0));

    MlpParams grad = zero_like(p);
    mlp_backward(p, trace, FinalAct::identity, {2.0 * trace.out[0]}, grad);
    CHECK(grad.w1(0, 0) == doctest::Approx(6.0));
    CHECK(grad.w2(0, 0) == doctest::Approx(18.0));  // 2 * out * hidden = 6 * 3
    CHECK(grad.b1[0] == doctest::Approx(6.0));
    CHECK(grad.b2[0] == doctest::Approx(6.0));
}

TEST_CASE("mlp_backward matches finite differences") {
    std::mt19937_64 rng(77);
    for (FinalAct act : {FinalAct::identity, FinalAct::relu}) {
        const MlpParams base = init_mlp(3, 5, 2, act == FinalAct::relu ? 11 : 12);
        std::vector<double> x(3);
        for (auto& v : x) v = uniform(rng, -1.5, 1.5);

        // Keep pre-activations away from the relu kink so the numerical
        // derivative is well defined.
        const MlpTrace probe = mlp_forward(base, x, act);
        for (double v : probe.hidden_pre) REQUIRE(std::abs(v) > 1e-3);
        for (double v : probe.out_pre) REQUIRE(std::abs(v) > 1e-3);

        auto loss_at = [&](const std::vector<double>& theta) {
            MlpParams p = base;
            std::size_t cursor = 0;
            mlp_unflatten(p, theta, cursor);
            const MlpTrace t = mlp_forward(p, x, act);
            double s = 0.0;
            for (double o : t.out) s += o * o;
            return s;
        };

        const std::vector<double> theta0 = mlp_flatten(base);
        const auto numeric = oracle::finite_diff(theta0, loss_at);

        MlpParams grad = zero_like(base);
        std::vector<double> dout(probe.out.size());
        for (std::size_t i = 0; i < dout.size(); ++i) dout[i] = 2.0 * probe.out[i];
        mlp_backward(base, probe, act, dout, grad);
        const auto analytic = mlp_flatten(grad);

        REQUIRE(analytic.size() == numeric.size());
        for (std::size_t i = 0; i < analytic.size(); ++i)
            CHECK(oracle::rel_err(analytic[i], numeric[i]) < 1e-6);
    }
}

TEST_CASE("make_stat_bank sizes models from the slice geometry") {
    PeriodSet ps;
    ps.periods = {4, 3};
    ps.frequencies = {24, 32};
    ps.mean_amplitudes = {2.0, 1.0};
    ps.analysis_len = 96;

    const StatPredictorBank bank = make_stat_bank(ps, 12, 8, 7);
    REQUIRE(bank.size() == 2);
    CHECK(bank.lookback == 12);
    CHECK(bank.horizon == 8);

    CHECK(bank.scales[0].period == 4);
    CHECK(bank.scales[0].in_slices == 3);
    CHECK(bank.scales[0].out_slices == 2);
    CHECK(bank.scales[0].mean_model.in_dim() == 4);
    CHECK(bank.scales[0].mean_model.out_dim() == 2);
    CHECK(bank.scales[0].mean_model.hidden_dim() == 32);
    CHECK(bank.scales[0].std_model.in_dim() == 4);

    CHECK(bank.scales[1].period == 3);
    CHECK(bank.scales[1].in_slices == 4);
    CHECK(bank.scales[1].out_slices == 3);

    // Mean and std heads start from different draws.
    CHECK(mlp_flatten(bank.scales[0].mean_model) != mlp_flatten(bank.scales[0].std_model));

    const StatPredictorBank again = make_stat_bank(ps, 12, 8, 7);
    CHECK(bank_flatten(bank) == bank_flatten(again));
}

TEST_CASE("feature vectors append the window summary") {
    Mat window(6, 2);
    for (int r = 0; r < 6; ++r) {
        window(r, 0) = r;            // mean 2.5
        window(r, 1) = 2.0 * r + 1;  // mean 6
    }
    Mat means(3, 2);
    Mat stds(3, 2);
    for (int j = 0; j < 3; ++j)
        for (int c = 0; c < 2; ++c) {
            means(j, c) = 10 * j + c;
            stds(j, c) = j + 0.5 * c;
        }

    const auto mf = mean_features(means, window, 1);
    REQUIRE(mf.size() == 4);
    CHECK(mf[0] == 1.0);
    CHECK(mf[1] == 11.0);
    CHECK(mf[2] == 21.0);
    CHECK(mf[3] == doctest::Approx(6.0));

    const auto sf = std_features(stds, window, 0);
    REQUIRE(sf.size() == 4);
    CHECK(sf[0] == 0.0);
    CHECK(sf[1] == 1.0);
    CHECK(sf[2] == 2.0);
    // Population std of 0..5.
    double mean = 2.5, sq = 0.0;
    for (int r = 0; r < 6; ++r) sq += (r - mean) * (r - mean);
    CHECK(sf[3] == doctest::Approx(std::sqrt(sq / 6.0)));
}

TEST_CASE("predict_stds is elementwise non-negative") {
    PeriodSet ps;
    ps.periods = {3};
    ps.frequencies = {8};
    ps.mean_amplitudes = {1.0};
    ps.analysis_len = 24;
    const StatPredictorBank bank = make_stat_bank(ps, 12, 6, 5);

    std::mt19937_64 rng(13);
    const Mat window = oracle::random_mat(rng, 12, 3, -5.0, 5.0);
    const auto stats = compute_slice_stats(pad_and_slice(window, 3));
    const Mat out = predict_stds(bank, 0, stats.stds, window);
    REQUIRE(out.rows == 2);
    REQUIRE(out.cols == 3);
    for (double v : out.data) CHECK(v >= 0.0);
}

TEST_CASE("predictions apply one shared model across channels") {
    PeriodSet ps;
    ps.periods = {2};
    ps.frequencies = {4};
    ps.mean_amplitudes = {1.0};
    ps.analysis_len = 8;
    const StatPredictorBank bank = make_stat_bank(ps, 8, 4, 21);

    std::mt19937_64 rng(29);
    Mat window = oracle::random_mat(rng, 8, 2);
    const auto stats = compute_slice_stats(pad_and_slice(window, 2));
    const Mat out = predict_means(bank, 0, stats.means, window);

    // Swap the two channels; the outputs must swap with them.
    Mat swapped(8, 2);
    for (int r = 0; r < 8; ++r) {
        swapped(r, 0) = window(r, 1);
        swapped(r, 1) = window(r, 0);
    }
    const auto sstats = compute_slice_stats(pad_and_slice(swapped, 2));
    const Mat sout = predict_means(bank, 0, sstats.means, swapped);
    for (int j = 0; j < out.rows; ++j) {
        CHECK(out(j, 0) == sout(j, 1));
        CHECK(out(j, 1) == sout(j, 0));
    }

    // And per-channel outputs equal a direct single-channel evaluation.
    const MlpTrace t0 = mlp_forward(bank.scales[0].mean_model, mean_features(stats.means, window, 0),
                                    FinalAct::identity);
    for (int j = 0; j < out.rows; ++j) CHECK(out(j, 0) == t0.out[j]);
}

TEST_CASE("stat_loss pools both statistics") {
    Mat pm(1, 1), psd(1, 1), tm(1, 1), tsd(1, 1);
    pm(0, 0) = 2.0;
    psd(0, 0) = 1.0;
    tm(0, 0) = 0.0;
    tsd(0, 0) = 0.0;
    CHECK(stat_loss(pm, psd, tm, tsd) == doctest::Approx(2.5));

    std::mt19937_64 rng(41);
    const Mat a = oracle::random_mat(rng, 3, 4);
    const Mat b = oracle::random_mat(rng, 3, 4);
    const Mat c = oracle::random_mat(rng, 3, 4);
    const Mat d = oracle::random_mat(rng, 3, 4);
    double expect = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double dm = a.data[i] - c.data[i];
        const double ds = b.data[i] - d.data[i];
        expect += dm * dm + ds * ds;
    }
    expect /= 2.0 * a.data.size();
    CHECK(stat_loss(a, b, c, d) == doctest::Approx(expect).epsilon(1e-12));

    Mat wrong(2, 4);
    CHECK_THROWS_AS(stat_loss(wrong, b, c, d), ShapeError);
}

TEST_CASE("stat_loss_grad matches finite differences") {
    PeriodSet ps;
    ps.periods = {4};
    ps.frequencies = {3};
    ps.mean_amplitudes = {1.0};
    ps.analysis_len = 12;
    StatPredictorBank bank = make_stat_bank(ps, 12, 8, 17);
    const ScalePredictor& sp = bank.scales[0];

    std::mt19937_64 rng(53);
    const Mat window = oracle::random_mat(rng, 12, 2, -2.0, 2.0);
    const auto stats = compute_slice_stats(pad_and_slice(window, 4));
    const Mat true_means = oracle::random_mat(rng, 2, 2);
    Mat true_stds = oracle::random_mat(rng, 2, 2, 0.1, 1.0);

    auto loss_at = [&](const std::vector<double>& theta) {
        ScalePredictor p = sp;
        std::size_t cursor = 0;
        mlp_unflatten(p.mean_model, theta, cursor);
        mlp_unflatten(p.std_model, theta, cursor);
        Mat pm(p.out_slices, window.cols), psd(p.out_slices, window.cols);
        for (int c = 0; c < window.cols; ++c) {
            const auto mt = mlp_forward(p.mean_model, mean_features(stats.means, window, c),
                                        FinalAct::identity);
            const auto st =
                mlp_forward(p.std_model, std_features(stats.stds, window, c), FinalAct::relu);
            for (int j = 0; j < p.out_slices; ++j) {
                pm(j, c) = mt.out[j];
                psd(j, c) = st.out[j];
            }
        }
        return stat_loss(pm, psd, true_means, true_stds);
    };

    std::vector<double> theta0 = mlp_flatten(sp.mean_model);
    const auto std_flat = mlp_flatten(sp.std_model);
    theta0.insert(theta0.end(), std_flat.begin(), std_flat.end());
    const auto numeric = oracle::finite_diff(theta0, loss_at);

    MlpParams mean_grad = zero_like(sp.mean_model);
    MlpParams std_grad = zero_like(sp.std_model);
    const double loss = stat_loss_grad(sp, stats.means, stats.stds, window, true_means, true_stds,
                                       1.0, mean_grad, std_grad);
    CHECK(loss == doctest::Approx(loss_at(theta0)).epsilon(1e-12));

    std::vector<double> analytic = mlp_flatten(mean_grad);
    const auto sg = mlp_flatten(std_grad);
    analytic.insert(analytic.end(), sg.begin(), sg.end());

    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i)
        CHECK(oracle::rel_err(analytic[i], numeric[i]) < 1e-4);
}

TEST_CASE("stat_loss_grad scales with its weight") {
    PeriodSet ps;
    ps.periods = {3};
    ps.frequencies = {4};
    ps.mean_amplitudes = {1.0};
    ps.analysis_len = 9;
    StatPredictorBank bank = make_stat_bank(ps, 9, 6, 3);
    const ScalePredictor& sp = bank.scales[0];

    std::mt19937_64 rng(61);
    const Mat window = oracle::random_mat(rng, 9, 1);
    const auto stats = compute_slice_stats(pad_and_slice(window, 3));
    const Mat tm = oracle::random_mat(rng, 2, 1);
    const Mat ts = oracle::random_mat(rng, 2, 1, 0.0, 1.0);

    MlpParams g1m = zero_like(sp.mean_model), g1s = zero_like(sp.std_model);
    MlpParams g2m = zero_like(sp.mean_model), g2s = zero_like(sp.std_model);
    stat_loss_grad(sp, stats.means, stats.stds, window, tm, ts, 1.0, g1m, g1s);
    stat_loss_grad(sp, stats.means, stats.stds, window, tm, ts, 0.25, g2m, g2s);

    const auto f1 = mlp_flatten(g1m);
    const auto f2 = mlp_flatten(g2m);
    for (std::size_t i = 0; i < f1.size(); ++i)
        CHECK(f2[i] == doctest::Approx(0.25 * f1[i]).epsilon(1e-12));
}

TEST_CASE("bank flatten and unflatten round trip") {
    PeriodSet ps;
    ps.periods = {5, 2};
    ps.frequencies = {4, 10};
    ps.mean_amplitudes = {3.0, 1.0};
    ps.analysis_len = 20;
    StatPredictorBank bank = make_stat_bank(ps, 20, 10, 123);

    const auto flat = bank_flatten(bank);
    StatPredictorBank other = make_stat_bank(ps, 20, 10, 456);
    REQUIRE(bank_flatten(other) != flat);
    bank_unflatten(other, flat);
    CHECK(bank_flatten(other) == flat);

    BankGrads grads = zero_grads(bank);
    const auto gflat = grads_flatten(grads);
    CHECK(gflat.size() == flat.size());
    for (double v : gflat) CHECK(v == 0.0);
}
