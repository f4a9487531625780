#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mlcc/errors.hpp"
#include "mlcc/learner.hpp"
#include "mlcc/rng.hpp"
#include "test_util.hpp"

using namespace mlcc;

namespace {

Matrix random_matrix(SplitMix64& rng, std::size_t n, std::size_t w) {
    Matrix m(n, w);
    for (double& v : m.values) v = rng.next_double() * 4.0 - 2.0;
    return m;
}

std::vector<std::uint8_t> random_targets(SplitMix64& rng, std::size_t n) {
    std::vector<std::uint8_t> y(n);
    for (auto& v : y) v = rng.next_double() < 0.5 ? 1 : 0;
    return y;
}

}  // namespace

TEST_CASE("analytic gradient matches central finite differences") {
    SplitMix64 rng(301);
    const double step = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
        Matrix x = random_matrix(rng, 5, 3);
        auto y = random_targets(rng, 5);
        std::vector<double> w{0.3, -0.7, 0.2};
        double bias = 0.1;
        const double l2 = 1e-3;

        std::vector<double> grad(3);
        double grad_bias = 0.0;
        logistic_gradient(x, y, w, bias, l2, grad, grad_bias);

        for (std::size_t j = 0; j < w.size(); ++j) {
            std::vector<double> up = w, down = w;
            up[j] += step;
            down[j] -= step;
            double numeric = (logistic_loss(x, y, up, bias, l2) -
                              logistic_loss(x, y, down, bias, l2)) /
                             (2.0 * step);
            CHECK(grad[j] == doctest::Approx(numeric).epsilon(1e-6));
        }
        double numeric_bias = (logistic_loss(x, y, w, bias + step, l2) -
                               logistic_loss(x, y, w, bias - step, l2)) /
                              (2.0 * step);
        CHECK(grad_bias == doctest::Approx(numeric_bias).epsilon(1e-6));
    }
}

TEST_CASE("training is bit-deterministic") {
    SplitMix64 rng(302);
    Matrix x = random_matrix(rng, 30, 4);
    auto y = random_targets(rng, 30);
    LearnerConfig cfg;
    BinaryModel a = train_binary(x, y, cfg);
    BinaryModel b = train_binary(x, y, cfg);
    CHECK(a.weights == b.weights);
    CHECK(a.bias == b.bias);
    CHECK(a.means == b.means);
    CHECK(a.scales == b.scales);
}

TEST_CASE("loss never increases along the descent") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 4; ++trial) {
        Matrix x = random_matrix(rng, 25, 3);
        auto y = random_targets(rng, 25);
        std::vector<double> trace;
        train_binary(x, y, LearnerConfig{}, trace);
        REQUIRE(trace.size() == 201);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
}

TEST_CASE("all-negative targets push every prediction to zero") {
    SplitMix64 rng(304);
    Matrix x = random_matrix(rng, 20, 3);
    std::vector<std::uint8_t> y(20, 0);
    BinaryModel m = train_binary(x, y, LearnerConfig{});
    for (std::size_t i = 0; i < x.rows; ++i) {
        CHECK(predict_proba(m, x.row(i)) < 0.5);
        CHECK(predict_label(m, x.row(i)) == 0);
    }
}

TEST_CASE("a separable two-point problem trains to perfect accuracy") {
    Matrix x(2, 1);
    x.at(0, 0) = -1.0;
    x.at(1, 0) = 1.0;
    std::vector<std::uint8_t> y{0, 1};
    BinaryModel m = train_binary(x, y, LearnerConfig{});
    CHECK(predict_label(m, x.row(0)) == 0);
    CHECK(predict_label(m, x.row(1)) == 1);
}

TEST_CASE("flipping the targets mirrors the probabilities") {
    SplitMix64 rng(305);
    Matrix x = random_matrix(rng, 40, 3);
    auto y = random_targets(rng, 40);
    std::vector<std::uint8_t> flipped(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) flipped[i] = 1 - y[i];

    BinaryModel m = train_binary(x, y, LearnerConfig{});
    BinaryModel m_flipped = train_binary(x, flipped, LearnerConfig{});
    for (std::size_t i = 0; i < x.rows; ++i) {
        double p = predict_proba(m, x.row(i));
        double p_flipped = predict_proba(m_flipped, x.row(i));
        CHECK(p_flipped == doctest::Approx(1.0 - p).epsilon(1e-9));
    }
}

TEST_CASE("probability of the neutral model is one half and maps to 1") {
    BinaryModel m;
    m.weights = {0.0, 0.0};
    m.bias = 0.0;
    m.means = {0.0, 0.0};
    m.scales = {1.0, 1.0};
    std::vector<double> x{3.0, -4.0};
    CHECK(predict_proba(m, x) == 0.5);
    CHECK(predict_label(m, x) == 1);  // the boundary maps to 1
}

TEST_CASE("probability just below one half maps to 0") {
    BinaryModel m;
    m.weights = {0.0};
    m.means = {0.0};
    m.scales = {1.0};
    m.bias = std::log(0.4999 / 0.5001);
    std::vector<double> x{0.0};
    CHECK(predict_proba(m, x) == doctest::Approx(0.4999).epsilon(1e-9));
    CHECK(predict_label(m, x) == 0);
}

TEST_CASE("higher positively-weighted input never lowers the probability") {
    BinaryModel m;
    m.weights = {2.0, -1.0};
    m.bias = 0.3;
    m.means = {1.0, 2.0};
    m.scales = {2.0, 3.0};
    double previous = -1.0;
    for (double v = -10.0; v <= 10.0; v += 0.25) {
        std::vector<double> x{v, 1.5};
        double p = predict_proba(m, x);
        CHECK(p >= previous);
        previous = p;
    }
}

TEST_CASE("predict_label agrees with thresholding predict_proba") {
    SplitMix64 rng(306);
    Matrix x = random_matrix(rng, 50, 3);
    auto y = random_targets(rng, 50);
    BinaryModel m = train_binary(x, y, LearnerConfig{});
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> probe{rng.next_double() * 8 - 4, rng.next_double() * 8 - 4,
                                  rng.next_double() * 8 - 4};
        CHECK(predict_label(m, probe) == (predict_proba(m, probe) >= 0.5 ? 1 : 0));
    }
}

TEST_CASE("width mismatches and bad inputs are rejected") {
    SplitMix64 rng(307);
    Matrix x = random_matrix(rng, 10, 3);
    auto y = random_targets(rng, 10);
    BinaryModel m = train_binary(x, y, LearnerConfig{});
    std::vector<double> narrow{1.0, 2.0};
    CHECK_THROWS_AS(predict_proba(m, narrow), std::invalid_argument);

    Matrix with_nan = x;
    with_nan.at(0, 0) = std::nan("");
    CHECK_THROWS_AS(train_binary(with_nan, y, LearnerConfig{}), DataError);

    LearnerConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(train_binary(x, y, bad), ConfigError);
}

TEST_CASE("constant columns standardize to zero and stay harmless") {
    Matrix x(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        x.at(i, 0) = 7.5;  // constant
        x.at(i, 1) = static_cast<double>(i) - 1.5;
    }
    std::vector<std::uint8_t> y{0, 0, 1, 1};
    BinaryModel m = train_binary(x, y, LearnerConfig{});
    CHECK(m.scales[0] == 0.0);
    // a wild value in the constant slot must not change the score
    std::vector<double> probe_a{7.5, 1.0}, probe_b{1e6, 1.0};
    CHECK(predict_proba(m, probe_a) == predict_proba(m, probe_b));
}

TEST_CASE("model json round trip is bit-exact") {
    SplitMix64 rng(308);
    Matrix x = random_matrix(rng, 15, 4);
    auto y = random_targets(rng, 15);
    BinaryModel m = train_binary(x, y, LearnerConfig{});
    nlohmann::json j = binary_model_to_json(m);
    BinaryModel back = binary_model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.weights == m.weights);
    CHECK(back.bias == m.bias);
    CHECK(back.means == m.means);
    CHECK(back.scales == m.scales);
    CHECK(back.config.iterations == m.config.iterations);
}
