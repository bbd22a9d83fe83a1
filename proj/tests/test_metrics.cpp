#include "driftcal/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "driftcal/errors.hpp"
#include "test_util.hpp"

using namespace driftcal;

TEST_CASE("mse basics") {
    CHECK(mse(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}) ==
          doctest::Approx(2.5));
    CHECK(mse(std::vector<double>{3.0, -1.0}, std::vector<double>{3.0, -1.0}) == 0.0);
}

TEST_CASE("masked pairs are excluded") {
    EvalSeries s;
    s.t_hours = {0.0, 10.0};
    s.predictions = {1.0, 10.0};
    s.truths = {0.0, 0.0};
    EvalMask mask;
    mask.windows.push_back({9.0, 11.0});
    CHECK(mse(s, mask) == doctest::Approx(1.0));
}

TEST_CASE("invalid pairs are excluded") {
    EvalSeries s;
    s.t_hours = {0.0, 1.0};
    s.predictions = {1.0, 100.0};
    s.truths = {0.0, 0.0};
    s.valid = {true, false};
    CHECK(mse(s) == doctest::Approx(1.0));
}

TEST_CASE("no usable pairs is an error") {
    EvalSeries s;
    s.t_hours = {0.0};
    s.predictions = {1.0};
    s.truths = {0.0};
    s.valid = {false};
    CHECK_THROWS_AS(mse(s), ValidationError);
    CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}),
                    ValidationError);
}

TEST_CASE("rmse is the square root of mse") {
    CHECK(rmse(std::vector<double>{1.0, 2.0}, std::vector<double>{0.0, 0.0}) ==
          doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
    CHECK(rmse(std::vector<double>{0.0}, std::vector<double>{0.0}) == 0.0);
    CHECK(rmse(std::vector<double>{2.0}, std::vector<double>{0.0}) ==
          doctest::Approx(2.0));
}

TEST_CASE("relative mse") {
    CHECK(relative_mse(2.0, 4.0) == doctest::Approx(0.5));
    CHECK(relative_mse(3.0, 3.0) == doctest::Approx(1.0));
    CHECK(relative_mse(0.09 * 7.0, 7.0) == doctest::Approx(0.09));
    CHECK_THROWS_AS(relative_mse(1.0, 0.0), ValidationError);
}

TEST_CASE("mse is permutation invariant and scales quadratically") {
    auto g = dctest::rng(71);
    std::vector<double> preds(20);
    std::vector<double> truths(20);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        preds[i] = dctest::uniform(g, -10.0, 10.0);
        truths[i] = dctest::uniform(g, -10.0, 10.0);
    }
    const double base = mse(preds, truths);

    std::vector<std::size_t> idx(preds.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), g);
    std::vector<double> p2(preds.size());
    std::vector<double> t2(preds.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        p2[i] = preds[idx[i]];
        t2[i] = truths[idx[i]];
    }
    CHECK(mse(p2, t2) == doctest::Approx(base).epsilon(1e-12));

    std::vector<double> scaled(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        scaled[i] = truths[i] + 3.0 * (preds[i] - truths[i]);
    }
    CHECK(mse(scaled, truths) == doctest::Approx(9.0 * base).epsilon(1e-12));
}

TEST_CASE("absolute residual quantiles interpolate") {
    EvalSeries s;
    s.predictions = {1.0, 2.0, 3.0, 4.0};
    s.truths = {0.0, 0.0, 0.0, 0.0};
    CHECK(abs_residual_quantile(s, 0.0) == doctest::Approx(1.0));
    CHECK(abs_residual_quantile(s, 1.0) == doctest::Approx(4.0));
    CHECK(abs_residual_quantile(s, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("pair_by_time matches exact and nearest timestamps") {
    Series ref;
    for (double t = 0.0; t <= 10.0; t += 1.0) {
        ref.t_hours.push_back(t);
        ref.values.push_back(t * 10.0);
    }
    std::vector<CorrectionResult> corrected(3);
    corrected[0].t_hours = 3.0;   // exact
    corrected[0].y_hat = 30.0;
    corrected[1].t_hours = 5.4;   // nearest is 5.0
    corrected[1].y_hat = 50.0;
    corrected[2].t_hours = 20.0;  // out of tolerance, dropped
    corrected[2].y_hat = 0.0;

    const auto series = pair_by_time(corrected, ref, 0.5);
    REQUIRE(series.predictions.size() == 2);
    CHECK(series.truths[0] == doctest::Approx(30.0));
    CHECK(series.truths[1] == doctest::Approx(50.0));
}
