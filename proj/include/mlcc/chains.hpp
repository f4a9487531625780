#ifndef MLCC_CHAINS_HPP_
#define MLCC_CHAINS_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlcc/dataset.hpp"
#include "mlcc/learner.hpp"
#include "mlcc/ordering.hpp"

namespace mlcc {

/// Classifier chain: one binary model per chain position. The model at
/// position c consumes the original features plus the c preceding labels in
/// chain order, so widths grow by exactly one along the chain.
struct TrainedChain {
    ChainOrder order;
    std::vector<BinaryModel> models;
    std::vector<std::string> label_names;
    std::size_t feature_width = 0;
};

/// Binary relevance: q independent models over the raw features.
struct TrainedBR {
    std::vector<BinaryModel> models;
    std::vector<std::string> label_names;
    std::size_t feature_width = 0;
};

/// Ensemble of chains over random orders and bootstrap resamples,
/// aggregated by per-label voting.
struct TrainedECC {
    std::vector<TrainedChain> members;
    std::vector<std::uint64_t> member_seeds;
    double vote_threshold = 0.5;
};

/// Trains a chain in the given order. Each position trains against the
/// ground-truth values of its predecessors.
TrainedChain train_cc(const Dataset& d, const ChainOrder& order, const LearnerConfig& cfg);

/// Predicts sequentially along the chain, feeding each model the hard 0/1
/// predictions of its predecessors. The result is in original label order.
std::vector<std::uint8_t> predict_cc(const TrainedChain& chain, std::span<const double> x);
LabelMatrix predict_cc(const TrainedChain& chain, const Matrix& inputs);

TrainedBR train_br(const Dataset& d, const LearnerConfig& cfg);
std::vector<std::uint8_t> predict_br(const TrainedBR& br, std::span<const double> x);
LabelMatrix predict_br(const TrainedBR& br, const Matrix& inputs);

/// Each member gets a seeded random order and (unless disabled) a same-size
/// bootstrap resample of the training instances. Member seeds derive from
/// the master seed, so the ensemble is fully reproducible.
TrainedECC train_ecc(const Dataset& d, int n_members, const LearnerConfig& cfg,
                     std::uint64_t seed, bool bootstrap = true);

/// Per label: 1 iff the fraction of members voting 1 reaches the threshold.
std::vector<std::uint8_t> predict_ecc(const TrainedECC& ecc, std::span<const double> x);
LabelMatrix predict_ecc(const TrainedECC& ecc, const Matrix& inputs);

using AnyModel = std::variant<TrainedBR, TrainedChain, TrainedECC>;

LabelMatrix predict_any(const AnyModel& model, const Matrix& inputs);
const std::vector<std::string>& model_label_names(const AnyModel& model);
std::size_t model_feature_width(const AnyModel& model);

/// Model persistence: a single JSON document per model, round-tripping every
/// double bit-exactly.
nlohmann::json model_to_json(const AnyModel& model);
AnyModel model_from_json(const nlohmann::json& j);
void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

}  // namespace mlcc

#endif  // MLCC_CHAINS_HPP_
