#ifndef MLCC_METRICS_HPP_
#define MLCC_METRICS_HPP_

#include <chrono>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlcc/matrix.hpp"

namespace mlcc {

/// Paired truth/prediction matrices of identical shape.
struct PredictionSet {
    LabelMatrix truth;
    LabelMatrix predicted;
    std::vector<std::string> label_names;
};

struct MetricsReport {
    double accuracy = 0.0;      // mean per-instance Jaccard
    double f1 = 0.0;            // macro F1 over labels
    double hamming_loss = 0.0;  // mean fraction of wrong label slots
    double example_f1 = 0.0;    // per-instance F1, reported for comparison
    double wall_time_seconds = 0.0;
};

/// Mean per-instance Jaccard overlap. An instance with empty truth and
/// empty prediction scores 1.
double example_accuracy(const PredictionSet& p);

/// Macro F1: per label, precision and recall over instances, with 0/0
/// ratios taken as 0 and a label absent from both sides scoring 1.
double macro_f1(const PredictionSet& p);

/// Per-instance F1 (2|Y∩P| / (|Y|+|P|)), empty/empty scoring 1. Distinct
/// from macro_f1; reported alongside it for comparison.
double example_f1(const PredictionSet& p);

/// Mean over instances of the fraction of label slots predicted wrongly.
double hamming_loss(const PredictionSet& p);

/// All of the above; wall_time_seconds is left 0 for the caller to fill.
MetricsReport compute_metrics(const PredictionSet& p);

struct AlgoAggregate {
    double avg_accuracy = 0.0;
    double avg_f1 = 0.0;
    double avg_hamming_loss = 0.0;
    double avg_time = 0.0;
};

/// Unweighted means across datasets.
AlgoAggregate aggregate(std::span<const MetricsReport> reports);

struct AlgoNormalized {
    double accuracy = 0.0;
    double f1 = 0.0;
    double hamming_loss = 0.0;  // min-max normalized; lower is better
    double time = 0.0;
};

/// Per-dataset, per-algorithm results plus cross-dataset aggregates and
/// min-max normalized indices.
struct BenchTable {
    nlohmann::json config_echo;  // embedded verbatim in every emitted file
    std::vector<std::string> datasets;
    std::vector<std::string> algorithms;
    std::vector<MetricsReport> cells;  // row-major: datasets x algorithms
    std::vector<AlgoAggregate> aggregates;
    std::vector<AlgoNormalized> normalized;
    struct {
        bool accuracy = false, f1 = false, hamming_loss = false, time = false;
    } degenerate;  // max == min for that quantity; all normalized values 0
    bool has_aggregates = false;
    bool has_normalized = false;

    MetricsReport& cell(std::size_t dataset, std::size_t algorithm) {
        return cells[dataset * algorithms.size() + algorithm];
    }
    const MetricsReport& cell(std::size_t dataset, std::size_t algorithm) const {
        return cells[dataset * algorithms.size() + algorithm];
    }
};

/// Fills per-algorithm unweighted means across datasets.
void compute_aggregates(BenchTable& bench);

/// Min-max normalizes each averaged quantity across algorithms (needs at
/// least two). Hamming loss uses the same formula with no sign flip, so
/// lower stays better. A zero spread maps every value to 0 and sets the
/// degenerate flag.
void normalize(BenchTable& bench);

/// CSV with one section per metric, rows = datasets plus an avg row,
/// columns = algorithms. Contains no wall-clock quantities, so identical
/// configurations produce byte-identical files.
std::string bench_to_csv(const BenchTable& bench);

/// JSON with raw per-cell results, aggregates, and normalized indices.
nlohmann::json bench_to_json(const BenchTable& bench);

/// Runs fn and returns {result, elapsed seconds} on the monotonic clock.
template <class F>
auto timed(F&& fn) {
    auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
        std::forward<F>(fn)();
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return elapsed.count();
    } else {
        auto result = std::forward<F>(fn)();
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        return std::pair{std::move(result), elapsed.count()};
    }
}

}  // namespace mlcc

#endif  // MLCC_METRICS_HPP_
