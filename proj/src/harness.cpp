#include "mlcc/harness.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlcc/cooccurrence.hpp"
#include "mlcc/errors.hpp"
#include "mlcc/rng.hpp"

namespace mlcc {

namespace {

constexpr int kReportFormatVersion = 1;

const char* kKnownAlgorithms[] = {"gocc", "tocc", "ngram", "cc_random", "br", "ecc"};

bool known_algorithm(const std::string& kind) {
    for (const char* k : kKnownAlgorithms)
        if (kind == k) return true;
    return false;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write output file: " + path.string());
    out << text;
    if (!out) throw DataError("write failed: " + path.string());
}

// One algorithm applied to one training fold: computes whatever order it
// needs, trains, and exposes prediction.
struct FittedAlgorithm {
    std::vector<std::vector<int>> orders;
    AnyModel model{TrainedBR{}};
};

FittedAlgorithm fit_algorithm(const AlgorithmSpec& algo, const Dataset& train,
                              const ExperimentConfig& cfg, const std::string& dataset_name,
                              int fold, double& order_seconds) {
    FittedAlgorithm fitted;
    const int q = static_cast<int>(train.n_labels());

    if (algo.kind == "gocc" || algo.kind == "tocc" || algo.kind == "ngram") {
        auto [order, seconds] = timed([&] {
            CRMatrix m = build_cr_matrix(train);
            HeadPair head = select_head_pair(m, head_candidates(m));
            if (algo.kind == "gocc") return gocc_order(m, head);
            if (algo.kind == "tocc") return tocc_order(train, head);
            return ngram_order(train, head, algo.ngram_n);
        });
        order_seconds = seconds;
        fitted.orders.push_back(order.order);
        fitted.model = train_cc(train, order, cfg.learner);
    } else if (algo.kind == "cc_random") {
        std::uint64_t seed = derive_seed(
            cfg.master_seed, dataset_name + "/cc_random/fold" + std::to_string(fold));
        ChainOrder order = random_order(q, seed);
        fitted.orders.push_back(order.order);
        fitted.model = train_cc(train, order, cfg.learner);
    } else if (algo.kind == "br") {
        fitted.model = train_br(train, cfg.learner);
    } else if (algo.kind == "ecc") {
        std::uint64_t seed =
            derive_seed(cfg.master_seed, dataset_name + "/ecc/fold" + std::to_string(fold));
        TrainedECC ecc = train_ecc(train, cfg.ecc_members, cfg.learner, seed);
        for (const TrainedChain& member : ecc.members) fitted.orders.push_back(member.order.order);
        fitted.model = std::move(ecc);
    } else {
        throw ConfigError("unknown algorithm: " + algo.kind);
    }
    return fitted;
}

void check_config(const ExperimentConfig& cfg) {
    if (cfg.datasets.empty()) throw ConfigError("config names no datasets");
    if (cfg.algorithms.empty()) throw ConfigError("config names no algorithms");
    for (const AlgorithmSpec& a : cfg.algorithms) {
        if (!known_algorithm(a.kind)) throw ConfigError("unknown algorithm: " + a.kind);
        if (a.kind == "ngram" && a.ngram_n < 1)
            throw ConfigError("ngram algorithm needs n >= 1");
    }
    if (cfg.n_folds < 2) throw ConfigError("n_folds must be >= 2");
    if (cfg.ecc_members < 1) throw ConfigError("ecc_members must be >= 1");
}

Dataset load_dataset(const DatasetRef& ref) {
    if (ref.format == "arff") return load_arff(ref.path, ref.labels);
    if (ref.format == "csv") {
        if (!ref.labels) throw ConfigError("dataset '" + ref.name + "': csv needs a label count");
        return load_csv(ref.path, *ref.labels);
    }
    throw ConfigError("dataset '" + ref.name + "': unknown format '" + ref.format + "'");
}

}  // namespace

std::string AlgorithmSpec::display_name() const {
    return kind == "ngram" ? "ngram" + std::to_string(ngram_n) : kind;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    for (const auto& d : j.value("datasets", nlohmann::json::array())) {
        DatasetRef ref;
        ref.name = d.value("name", "");
        d.at("path").get_to(ref.path);
        ref.format = d.value("format", "arff");
        if (d.contains("labels") && !d["labels"].is_null())
            ref.labels = d["labels"].get<int>();
        if (ref.name.empty()) ref.name = std::filesystem::path(ref.path).stem().string();
        cfg.datasets.push_back(std::move(ref));
    }
    for (const auto& a : j.value("algorithms", nlohmann::json::array())) {
        AlgorithmSpec spec;
        if (a.is_string()) {
            spec.kind = a.get<std::string>();
        } else {
            a.at("kind").get_to(spec.kind);
            spec.ngram_n = a.value("n", 3);
        }
        cfg.algorithms.push_back(std::move(spec));
    }
    cfg.n_folds = j.value("n_folds", 5);
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.ecc_members = j.value("ecc_members", 4);
    cfg.output_dir = j.value("output_dir", "");
    if (j.contains("learner")) {
        const auto& l = j["learner"];
        cfg.learner.learning_rate = l.value("learning_rate", 0.1);
        cfg.learner.iterations = l.value("iterations", 200);
        cfg.learner.l2 = l.value("l2", 1e-4);
        cfg.learner.seed = l.value("seed", std::uint64_t{0});
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json datasets = nlohmann::json::array();
    for (const DatasetRef& d : cfg.datasets) {
        nlohmann::json ref{{"name", d.name}, {"path", d.path}, {"format", d.format}};
        ref["labels"] = d.labels ? nlohmann::json(*d.labels) : nlohmann::json(nullptr);
        datasets.push_back(std::move(ref));
    }
    nlohmann::json algorithms = nlohmann::json::array();
    for (const AlgorithmSpec& a : cfg.algorithms) {
        if (a.kind == "ngram") algorithms.push_back({{"kind", a.kind}, {"n", a.ngram_n}});
        else algorithms.push_back(a.kind);
    }
    return nlohmann::json{{"datasets", std::move(datasets)},
                          {"algorithms", std::move(algorithms)},
                          {"n_folds", cfg.n_folds},
                          {"master_seed", cfg.master_seed},
                          {"ecc_members", cfg.ecc_members},
                          {"output_dir", cfg.output_dir},
                          {"learner",
                           {{"learning_rate", cfg.learner.learning_rate},
                            {"iterations", cfg.learner.iterations},
                            {"l2", cfg.learner.l2},
                            {"seed", cfg.learner.seed}}}};
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    return config_from_json(j);
}

RunReport run_cv(const ExperimentConfig& cfg) {
    check_config(cfg);
    std::vector<Dataset> loaded;
    loaded.reserve(cfg.datasets.size());
    for (const DatasetRef& ref : cfg.datasets) loaded.push_back(load_dataset(ref));
    return run_cv(cfg, loaded);
}

RunReport run_cv(const ExperimentConfig& cfg, std::span<const Dataset> loaded) {
    check_config(cfg);
    if (loaded.size() != cfg.datasets.size())
        throw ConfigError("loaded dataset count does not match config");

    RunReport report;
    report.config = cfg;
    report.started_at = utc_timestamp();

    for (std::size_t di = 0; di < loaded.size(); ++di) {
        const Dataset& d = loaded[di];
        d.validate();
        const std::string& name = cfg.datasets[di].name;

        DatasetResult dr;
        dr.dataset = name;
        dr.stats = label_stats(d);

        FoldPlan plan =
            split_kfold(d, cfg.n_folds, derive_seed(cfg.master_seed, "folds/" + name));

        for (const AlgorithmSpec& algo : cfg.algorithms) {
            AlgoResult ar;
            ar.algorithm = algo.display_name();

            for (int fold = 0; fold < cfg.n_folds; ++fold) {
                auto train_idx = plan.train_indices(fold);
                auto test_idx = plan.test_indices(fold);
                Dataset train = select_rows(d, train_idx);
                Dataset test = select_rows(d, test_idx);

                FoldResult fr;
                fr.fold = fold;
                FittedAlgorithm fitted;
                fr.train_predict_seconds = timed([&] {
                    fitted = fit_algorithm(algo, train, cfg, name, fold, fr.order_seconds);
                });
                // order time is measured inside fit_algorithm; keep it separate
                fr.train_predict_seconds -= fr.order_seconds;

                PredictionSet pred;
                pred.label_names = d.label_names;
                pred.truth = test.labels;
                auto [predicted, predict_seconds] =
                    timed([&] { return predict_any(fitted.model, test.features); });
                pred.predicted = std::move(predicted);
                fr.train_predict_seconds += predict_seconds;

                fr.orders = std::move(fitted.orders);
                fr.metrics = compute_metrics(pred);
                fr.metrics.wall_time_seconds = fr.order_seconds + fr.train_predict_seconds;
                ar.folds.push_back(std::move(fr));
            }

            MetricsReport sum;
            for (const FoldResult& fr : ar.folds) {
                sum.accuracy += fr.metrics.accuracy;
                sum.f1 += fr.metrics.f1;
                sum.example_f1 += fr.metrics.example_f1;
                sum.hamming_loss += fr.metrics.hamming_loss;
                sum.wall_time_seconds += fr.metrics.wall_time_seconds;
            }
            const double folds = static_cast<double>(ar.folds.size());
            ar.summary.accuracy = sum.accuracy / folds;
            ar.summary.f1 = sum.f1 / folds;
            ar.summary.example_f1 = sum.example_f1 / folds;
            ar.summary.hamming_loss = sum.hamming_loss / folds;
            ar.summary.wall_time_seconds = sum.wall_time_seconds;  // total, not mean
            dr.algorithms.push_back(std::move(ar));
        }
        report.datasets.push_back(std::move(dr));
    }

    report.finished_at = utc_timestamp();
    return report;
}

BenchTable bench_from_report(const RunReport& report) {
    BenchTable bench;
    bench.config_echo = config_to_json(report.config);
    for (const DatasetResult& dr : report.datasets) bench.datasets.push_back(dr.dataset);
    for (const AlgorithmSpec& a : report.config.algorithms)
        bench.algorithms.push_back(a.display_name());
    bench.cells.resize(bench.datasets.size() * bench.algorithms.size());
    for (std::size_t d = 0; d < report.datasets.size(); ++d)
        for (std::size_t a = 0; a < report.datasets[d].algorithms.size(); ++a)
            bench.cell(d, a) = report.datasets[d].algorithms[a].summary;
    compute_aggregates(bench);
    if (bench.algorithms.size() >= 2) normalize(bench);
    return bench;
}

BenchTable run_bench(const ExperimentConfig& cfg) {
    RunReport report = run_cv(cfg);
    BenchTable bench = bench_from_report(report);
    if (!cfg.output_dir.empty()) {
        std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);
        write_text_file(dir / "bench.csv", bench_to_csv(bench));
        write_text_file(dir / "bench.json", bench_to_json(bench).dump(2) + "\n");
        write_text_file(dir / "orders.json", orders_json_from_report(report).dump(2) + "\n");
        write_text_file(dir / "run_report.json", run_report_to_json(report).dump(2) + "\n");
    }
    return bench;
}

std::vector<NSweepRow> run_nsweep(const ExperimentConfig& cfg, std::span<const int> n_values) {
    if (n_values.empty()) throw ConfigError("n sweep needs at least one n value");
    for (int n : n_values)
        if (n < 1) throw ConfigError("n sweep values must be >= 1");

    std::vector<Dataset> loaded;
    for (const DatasetRef& ref : cfg.datasets) loaded.push_back(load_dataset(ref));

    std::vector<NSweepRow> rows;
    for (int n : n_values) {
        ExperimentConfig sub = cfg;
        sub.algorithms = {AlgorithmSpec{"ngram", n}};
        sub.output_dir.clear();
        RunReport report = run_cv(sub, loaded);
        for (const DatasetResult& dr : report.datasets) {
            const MetricsReport& s = dr.algorithms.front().summary;
            rows.push_back({dr.dataset, n, s.accuracy, s.f1});
        }
    }

    if (!cfg.output_dir.empty()) {
        std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);
        write_text_file(dir / "nsweep.csv", nsweep_to_csv(rows, config_to_json(cfg)));
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string nsweep_to_csv(std::span<const NSweepRow> rows, const nlohmann::json& config_echo) {
    std::ostringstream out;
    out << "# format_version: 1\n";
    out << "# config: " << config_echo.dump() << "\n";
    out << "dataset,n,accuracy,f1\n";
    for (const NSweepRow& r : rows)
        out << r.dataset << ',' << r.n << ',' << format_double(r.accuracy) << ','
            << format_double(r.f1) << '\n';
    return out.str();
}

nlohmann::json run_report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["format_version"] = kReportFormatVersion;
    j["config"] = config_to_json(report.config);
    j["started_at"] = report.started_at;
    j["finished_at"] = report.finished_at;

    nlohmann::json datasets = nlohmann::json::array();
    for (const DatasetResult& dr : report.datasets) {
        nlohmann::json dj;
        dj["name"] = dr.dataset;
        dj["stats"] = {{"n", dr.stats.n}, {"k", dr.stats.k}, {"q", dr.stats.q},
                       {"lcard", dr.stats.lcard}};
        nlohmann::json algos = nlohmann::json::array();
        for (const AlgoResult& ar : dr.algorithms) {
            nlohmann::json aj;
            aj["algorithm"] = ar.algorithm;
            nlohmann::json folds = nlohmann::json::array();
            for (const FoldResult& fr : ar.folds) {
                folds.push_back({{"fold", fr.fold},
                                 {"orders", fr.orders},
                                 {"order_seconds", fr.order_seconds},
                                 {"train_predict_seconds", fr.train_predict_seconds},
                                 {"accuracy", fr.metrics.accuracy},
                                 {"f1", fr.metrics.f1},
                                 {"example_f1", fr.metrics.example_f1},
                                 {"hamming_loss", fr.metrics.hamming_loss}});
            }
            aj["folds"] = std::move(folds);
            aj["summary"] = {{"accuracy", ar.summary.accuracy},
                             {"f1", ar.summary.f1},
                             {"example_f1", ar.summary.example_f1},
                             {"hamming_loss", ar.summary.hamming_loss},
                             {"time_seconds", ar.summary.wall_time_seconds}};
            algos.push_back(std::move(aj));
        }
        dj["algorithms"] = std::move(algos);
        datasets.push_back(std::move(dj));
    }
    j["datasets"] = std::move(datasets);
    return j;
}

nlohmann::json orders_json_from_report(const RunReport& report) {
    nlohmann::json j;
    j["format_version"] = kReportFormatVersion;
    j["config"] = config_to_json(report.config);
    nlohmann::json datasets;
    for (const DatasetResult& dr : report.datasets) {
        nlohmann::json per_algo;
        for (const AlgoResult& ar : dr.algorithms) {
            nlohmann::json folds = nlohmann::json::array();
            for (const FoldResult& fr : ar.folds) folds.push_back(fr.orders);
            per_algo[ar.algorithm] = std::move(folds);
        }
        datasets[dr.dataset] = std::move(per_algo);
    }
    j["orders"] = std::move(datasets);
    return j;
}

}  // namespace mlcc
