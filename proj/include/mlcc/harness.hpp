#ifndef MLCC_HARNESS_HPP_
#define MLCC_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlcc/chains.hpp"
#include "mlcc/dataset.hpp"
#include "mlcc/metrics.hpp"

namespace mlcc {

/// One dataset to benchmark: where it lives and how to parse it.
/// format is "arff" or "csv"; labels is the ARFF label spec (sign selects
/// front/back placement) or the CSV trailing label count.
struct DatasetRef {
    std::string name;
    std::string path;
    std::string format = "arff";
    std::optional<int> labels;
};

/// One algorithm column of the benchmark. kind is one of
/// gocc | tocc | ngram | cc_random | br | ecc; ngram_n applies to ngram only.
struct AlgorithmSpec {
    std::string kind;
    int ngram_n = 3;

    std::string display_name() const;
};

struct ExperimentConfig {
    std::vector<DatasetRef> datasets;
    std::vector<AlgorithmSpec> algorithms;
    int n_folds = 5;
    std::uint64_t master_seed = 0;
    LearnerConfig learner;
    int ecc_members = 4;
    std::string output_dir;  // empty: nothing written
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// Results of one algorithm on one held-out fold. Orders are recomputed per
/// fold from the training portion only; order_seconds and
/// train_predict_seconds are kept separate and summed into the dataset-level
/// time.
struct FoldResult {
    int fold = 0;
    std::vector<std::vector<int>> orders;  // one entry (ecc: one per member); empty for br
    double order_seconds = 0.0;
    double train_predict_seconds = 0.0;
    MetricsReport metrics;
};

struct AlgoResult {
    std::string algorithm;
    std::vector<FoldResult> folds;
    MetricsReport summary;  // fold means; wall_time_seconds = total time
};

struct DatasetResult {
    std::string dataset;
    DatasetStats stats;
    std::vector<AlgoResult> algorithms;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<DatasetResult> datasets;
    std::string started_at;   // the only wall-clock fields; everything else
    std::string finished_at;  // is reproducible from config + master_seed
};

/// Cross-validated evaluation of every (dataset, algorithm) pair. For each
/// fold the co-occurrence matrix, head pair, and chain order are computed
/// from the training portion only, then the chain is trained and applied to
/// the held-out fold.
RunReport run_cv(const ExperimentConfig& cfg);

/// As run_cv but over datasets already in memory, matched positionally to
/// cfg.datasets (paths ignored).
RunReport run_cv(const ExperimentConfig& cfg, std::span<const Dataset> loaded);

/// Collapses a report into a bench table (cells = per-dataset summaries),
/// computes aggregates, and normalizes when two or more algorithms ran.
BenchTable bench_from_report(const RunReport& report);

/// run_cv + bench_from_report; when cfg.output_dir is set, writes bench.csv,
/// bench.json, orders.json, and run_report.json there.
BenchTable run_bench(const ExperimentConfig& cfg);

struct NSweepRow {
    std::string dataset;
    int n = 0;
    double accuracy = 0.0;
    double f1 = 0.0;
};

/// Full CV of the n-gram ordering for each requested n. When cfg.output_dir
/// is set, writes nsweep.csv.
std::vector<NSweepRow> run_nsweep(const ExperimentConfig& cfg, std::span<const int> n_values);

std::string nsweep_to_csv(std::span<const NSweepRow> rows, const nlohmann::json& config_echo);
nlohmann::json run_report_to_json(const RunReport& report);
nlohmann::json orders_json_from_report(const RunReport& report);

}  // namespace mlcc

#endif  // MLCC_HARNESS_HPP_
