#include "mlcc/learner.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mlcc/errors.hpp"

namespace mlcc {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) - y*z, computed without overflow
double logistic_term(double z, double y) {
    return std::max(z, 0.0) - y * z + std::log1p(std::exp(-std::abs(z)));
}

double raw_score(const Matrix& inputs, std::size_t row, std::span<const double> weights,
                 double bias) {
    double z = bias;
    auto x = inputs.row(row);
    for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
    return z;
}

struct Standardization {
    std::vector<double> means;
    std::vector<double> scales;  // population sd; 0 for constant columns
};

Standardization fit_standardization(const Matrix& features) {
    const std::size_t n = features.rows, w = features.cols;
    Standardization s;
    s.means.assign(w, 0.0);
    s.scales.assign(w, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = features.row(i);
        for (std::size_t j = 0; j < w; ++j) s.means[j] += row[j];
    }
    for (double& m : s.means) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = features.row(i);
        for (std::size_t j = 0; j < w; ++j) {
            double dev = row[j] - s.means[j];
            s.scales[j] += dev * dev;
        }
    }
    for (double& v : s.scales) v = std::sqrt(v / static_cast<double>(n));
    return s;
}

}  // namespace

double logistic_loss(const Matrix& inputs, std::span<const std::uint8_t> targets,
                     std::span<const double> weights, double bias, double l2) {
    const std::size_t n = inputs.rows;
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        loss += logistic_term(raw_score(inputs, i, weights, bias), targets[i]);
    loss /= static_cast<double>(n);
    double penalty = 0.0;
    for (double w : weights) penalty += w * w;
    return loss + 0.5 * l2 * penalty;
}

void logistic_gradient(const Matrix& inputs, std::span<const std::uint8_t> targets,
                       std::span<const double> weights, double bias, double l2,
                       std::span<double> grad_weights, double& grad_bias) {
    const std::size_t n = inputs.rows, w = inputs.cols;
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    grad_bias = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double residual = sigmoid(raw_score(inputs, i, weights, bias)) - targets[i];
        auto x = inputs.row(i);
        for (std::size_t j = 0; j < w; ++j) grad_weights[j] += residual * x[j];
        grad_bias += residual;
    }
    for (std::size_t j = 0; j < w; ++j)
        grad_weights[j] = grad_weights[j] / static_cast<double>(n) + l2 * weights[j];
    grad_bias /= static_cast<double>(n);
}

namespace {

BinaryModel train_impl(const Matrix& features, std::span<const std::uint8_t> targets,
                       const LearnerConfig& cfg, std::vector<double>* loss_trace) {
    const std::size_t n = features.rows, w = features.cols;
    if (n == 0 || w == 0) throw DataError("train_binary needs at least one row and one column");
    if (targets.size() != n) throw std::invalid_argument("target length does not match rows");
    if (cfg.learning_rate <= 0.0 || cfg.iterations <= 0 || cfg.l2 < 0.0)
        throw ConfigError("invalid learner configuration");
    for (double v : features.values)
        if (!std::isfinite(v)) throw DataError("non-finite feature value in training data");

    Standardization stats = fit_standardization(features);
    Matrix z(n, w);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = features.row(i);
        auto dst = z.row(i);
        for (std::size_t j = 0; j < w; ++j)
            dst[j] = stats.scales[j] > 0.0 ? (src[j] - stats.means[j]) / stats.scales[j] : 0.0;
    }

    std::vector<double> weights(w, 0.0), grad(w, 0.0);
    double bias = 0.0, grad_bias = 0.0;
    for (int iter = 0; iter < cfg.iterations; ++iter) {
        if (loss_trace)
            loss_trace->push_back(logistic_loss(z, targets, weights, bias, cfg.l2));
        logistic_gradient(z, targets, weights, bias, cfg.l2, grad, grad_bias);
        for (std::size_t j = 0; j < w; ++j) weights[j] -= cfg.learning_rate * grad[j];
        bias -= cfg.learning_rate * grad_bias;
    }
    if (loss_trace) loss_trace->push_back(logistic_loss(z, targets, weights, bias, cfg.l2));

    BinaryModel m;
    m.weights = std::move(weights);
    m.bias = bias;
    m.means = std::move(stats.means);
    m.scales = std::move(stats.scales);
    m.config = cfg;
    return m;
}

}  // namespace

BinaryModel train_binary(const Matrix& features, std::span<const std::uint8_t> targets,
                         const LearnerConfig& cfg) {
    return train_impl(features, targets, cfg, nullptr);
}

BinaryModel train_binary(const Matrix& features, std::span<const std::uint8_t> targets,
                         const LearnerConfig& cfg, std::vector<double>& loss_trace) {
    return train_impl(features, targets, cfg, &loss_trace);
}

double predict_proba(const BinaryModel& m, std::span<const double> x) {
    if (x.size() != m.weights.size())
        throw std::invalid_argument("input width " + std::to_string(x.size()) +
                                    " does not match model width " +
                                    std::to_string(m.weights.size()));
    double z = m.bias;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double v = m.scales[j] > 0.0 ? (x[j] - m.means[j]) / m.scales[j] : 0.0;
        z += m.weights[j] * v;
    }
    return sigmoid(z);
}

int predict_label(const BinaryModel& m, std::span<const double> x) {
    return predict_proba(m, x) >= 0.5 ? 1 : 0;
}

nlohmann::json binary_model_to_json(const BinaryModel& m) {
    return nlohmann::json{{"weights", m.weights},
                          {"bias", m.bias},
                          {"means", m.means},
                          {"scales", m.scales},
                          {"config",
                           {{"learning_rate", m.config.learning_rate},
                            {"iterations", m.config.iterations},
                            {"l2", m.config.l2},
                            {"seed", m.config.seed}}}};
}

BinaryModel binary_model_from_json(const nlohmann::json& j) {
    BinaryModel m;
    j.at("weights").get_to(m.weights);
    j.at("bias").get_to(m.bias);
    j.at("means").get_to(m.means);
    j.at("scales").get_to(m.scales);
    const auto& c = j.at("config");
    c.at("learning_rate").get_to(m.config.learning_rate);
    c.at("iterations").get_to(m.config.iterations);
    c.at("l2").get_to(m.config.l2);
    c.at("seed").get_to(m.config.seed);
    if (m.means.size() != m.weights.size() || m.scales.size() != m.weights.size())
        throw DataError("model JSON has inconsistent vector lengths");
    return m;
}

}  // namespace mlcc
