#include <doctest.h>

#include <cmath>

#include "evomsn/backbone.hpp"
#include "oracles.hpp"

using namespace evomsn;

TEST_CASE("make_backbone validates its arguments") {
    CHECK_THROWS_AS(make_backbone(BackboneKind::linear, 0, 4, 1), RangeError);
    CHECK_THROWS_AS(make_backbone(BackboneKind::linear, 4, 0, 1), RangeError);
    CHECK_THROWS_AS(make_backbone(BackboneKind::dlinear, 8, 4, 1, 4), RangeError);
    CHECK_THROWS_AS(make_backbone(BackboneKind::dlinear, 8, 4, 1, -3), RangeError);

    const BackboneParams p = make_backbone(BackboneKind::linear, 8, 4, 1);
    CHECK(p.param_count() == 8 * 4 + 4);
    const BackboneParams d = make_backbone(BackboneKind::dlinear, 8, 4, 1, 5);
    CHECK(d.param_count() == 2 * (8 * 4 + 4));
    const double bound = 1.0 / std::sqrt(8.0);
    for (double v : p.weight.data) CHECK(std::abs(v) <= bound);
}

TEST_CASE("moving_average replicates edges") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    const auto ma = moving_average(x, 3);
    REQUIRE(ma.size() == 5);
    // First entry averages {x[0], x[0], x[1]} with the left edge clamped.
    CHECK(ma[0] == doctest::Approx((1.0 + 1.0 + 2.0) / 3.0));
    CHECK(ma[1] == doctest::Approx(2.0));
    CHECK(ma[2] == doctest::Approx(3.0));
    CHECK(ma[4] == doctest::Approx((4.0 + 5.0 + 5.0) / 3.0));

    const auto identity = moving_average(x, 1);
    CHECK(identity == x);
}

TEST_CASE("linear forward matches an independent matrix product") {
    std::mt19937_64 rng(71);
    BackboneParams p = make_backbone(BackboneKind::linear, 6, 3, 9);
    const Mat input = oracle::random_mat(rng, 6, 2);
    const Mat out = backbone_forward(p, input);
    REQUIRE(out.rows == 3);
    REQUIRE(out.cols == 2);

    for (int c = 0; c < 2; ++c) {
        for (int h = 0; h < 3; ++h) {
            double s = p.bias[h];
            for (int t = 0; t < 6; ++t) s += p.weight(h, t) * input(t, c);
            CHECK(out(h, c) == doctest::Approx(s).epsilon(1e-12));
        }
    }

    Mat wrong(5, 2);
    CHECK_THROWS_AS(backbone_forward(p, wrong), ShapeError);
}

TEST_CASE("dlinear forward equals trend and seasonal products combined") {
    std::mt19937_64 rng(73);
    BackboneParams p = make_backbone(BackboneKind::dlinear, 8, 4, 15, 3);
    const Mat input = oracle::random_mat(rng, 8, 2);
    const Mat out = backbone_forward(p, input);

    for (int c = 0; c < 2; ++c) {
        const auto col = column(input, c);
        const auto trend = moving_average(col, 3);
        std::vector<double> seasonal(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) seasonal[i] = col[i] - trend[i];
        for (int h = 0; h < 4; ++h) {
            double s = p.trend_bias[h] + p.seasonal_bias[h];
            for (int t = 0; t < 8; ++t)
                s += p.trend_weight(h, t) * trend[t] + p.seasonal_weight(h, t) * seasonal[t];
            CHECK(out(h, c) == doctest::Approx(s).epsilon(1e-12));
        }
    }
}

TEST_CASE("dlinear with matched maps collapses to plain linear") {
    // When trend and seasonal weights coincide, w*trend + w*seasonal
    // reconstructs w*x regardless of the decomposition.
    std::mt19937_64 rng(79);
    BackboneParams lin = make_backbone(BackboneKind::linear, 10, 5, 33);
    BackboneParams dl = make_backbone(BackboneKind::dlinear, 10, 5, 33, 7);
    dl.trend_weight = lin.weight;
    dl.seasonal_weight = lin.weight;
    dl.trend_bias = lin.bias;
    dl.seasonal_bias.assign(5, 0.0);

    const Mat input = oracle::random_mat(rng, 10, 3);
    const Mat a = backbone_forward(lin, input);
    const Mat b = backbone_forward(dl, input);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        CHECK(a.data[i] == doctest::Approx(b.data[i]).epsilon(1e-12));
}

TEST_CASE("multiscale forward is the per-scale forward applied in order") {
    std::mt19937_64 rng(83);
    BackboneParams p = make_backbone(BackboneKind::linear, 6, 3, 5);
    std::vector<Mat> set;
    for (int i = 0; i < 3; ++i) set.push_back(oracle::random_mat(rng, 6, 2));
    const auto outs = backbone_forward_multiscale(p, set);
    REQUIRE(outs.size() == 3);
    for (int i = 0; i < 3; ++i) {
        const Mat direct = backbone_forward(p, set[i]);
        CHECK(outs[i].data == direct.data);
    }
}

TEST_CASE("linear backward matches finite differences") {
    std::mt19937_64 rng(89);
    BackboneParams base = make_backbone(BackboneKind::linear, 5, 3, 27);
    const Mat input = oracle::random_mat(rng, 5, 2);
    const Mat target = oracle::random_mat(rng, 3, 2);

    auto loss_at = [&](const std::vector<double>& theta) {
        BackboneParams p = base;
        backbone_unflatten(p, theta);
        const Mat out = backbone_forward(p, input);
        double s = 0.0;
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            const double d = out.data[i] - target.data[i];
            s += d * d;
        }
        return s;
    };

    const auto theta0 = backbone_flatten(base);
    const auto numeric = oracle::finite_diff(theta0, loss_at);

    const Mat out = backbone_forward(base, input);
    Mat dout(3, 2);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        dout.data[i] = 2.0 * (out.data[i] - target.data[i]);
    BackboneParams grad = zero_like(base);
    backbone_backward(base, input, dout, grad);
    const auto analytic = backbone_flatten(grad);

    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i)
        CHECK(oracle::rel_err(analytic[i], numeric[i]) < 1e-6);
}

TEST_CASE("dlinear backward matches finite differences") {
    std::mt19937_64 rng(97);
    BackboneParams base = make_backbone(BackboneKind::dlinear, 6, 4, 39, 3);
    const Mat input = oracle::random_mat(rng, 6, 2);
    const Mat target = oracle::random_mat(rng, 4, 2);

    auto loss_at = [&](const std::vector<double>& theta) {
        BackboneParams p = base;
        backbone_unflatten(p, theta);
        const Mat out = backbone_forward(p, input);
        double s = 0.0;
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            const double d = out.data[i] - target.data[i];
            s += d * d;
        }
        return s;
    };

    const auto theta0 = backbone_flatten(base);
    const auto numeric = oracle::finite_diff(theta0, loss_at);

    const Mat out = backbone_forward(base, input);
    Mat dout(4, 2);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        dout.data[i] = 2.0 * (out.data[i] - target.data[i]);
    BackboneParams grad = zero_like(base);
    backbone_backward(base, input, dout, grad);
    const auto analytic = backbone_flatten(grad);

    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t i = 0; i < analytic.size(); ++i)
        CHECK(oracle::rel_err(analytic[i], numeric[i]) < 1e-6);
}

TEST_CASE("backbone flatten and unflatten round trip") {
    for (BackboneKind kind : {BackboneKind::linear, BackboneKind::dlinear}) {
        BackboneParams a = make_backbone(kind, 7, 3, 101, 5);
        BackboneParams b = make_backbone(kind, 7, 3, 202, 5);
        const auto flat = backbone_flatten(a);
        REQUIRE(backbone_flatten(b) != flat);
        backbone_unflatten(b, flat);
        CHECK(backbone_flatten(b) == flat);
        CHECK(flat.size() == a.param_count());
    }
}
