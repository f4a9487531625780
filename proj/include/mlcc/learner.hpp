#ifndef MLCC_LEARNER_HPP_
#define MLCC_LEARNER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlcc/matrix.hpp"

namespace mlcc {

/// Settings for the built-in binary learner. The defaults are fully
/// deterministic: identical data yields bit-identical models. The seed is
/// reserved for future stochastic learners and unused here.
struct LearnerConfig {
    double learning_rate = 0.1;
    int iterations = 200;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
};

/// L2-regularized logistic model over internally standardized inputs.
/// scales[j] == 0 marks a column that was constant in training; such columns
/// standardize to 0 at prediction time.
struct BinaryModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> means;
    std::vector<double> scales;
    LearnerConfig config;

    std::size_t width() const { return weights.size(); }
};

/// Mean logistic loss plus (l2/2)*||w||^2 on raw (unstandardized) inputs.
/// Exposed so tests can difference it against the analytic gradient.
double logistic_loss(const Matrix& inputs, std::span<const std::uint8_t> targets,
                     std::span<const double> weights, double bias, double l2);

/// Analytic gradient of logistic_loss with respect to (weights, bias).
void logistic_gradient(const Matrix& inputs, std::span<const std::uint8_t> targets,
                       std::span<const double> weights, double bias, double l2,
                       std::span<double> grad_weights, double& grad_bias);

/// Full-batch gradient descent from zero weights, fixed iteration count.
/// Features are standardized per column with the training statistics stored
/// in the model. Throws DataError on non-finite feature values.
BinaryModel train_binary(const Matrix& features, std::span<const std::uint8_t> targets,
                         const LearnerConfig& cfg);

/// As above, and appends the loss at each iteration (plus the final loss) to
/// loss_trace.
BinaryModel train_binary(const Matrix& features, std::span<const std::uint8_t> targets,
                         const LearnerConfig& cfg, std::vector<double>& loss_trace);

/// Sigmoid of the standardized affine score, in [0, 1].
double predict_proba(const BinaryModel& m, std::span<const double> x);

/// 1 iff predict_proba >= 0.5 (the boundary maps to 1).
int predict_label(const BinaryModel& m, std::span<const double> x);

nlohmann::json binary_model_to_json(const BinaryModel& m);
BinaryModel binary_model_from_json(const nlohmann::json& j);

}  // namespace mlcc

#endif  // MLCC_LEARNER_HPP_
