// mlcc: chain-order optimization and benchmarking for multi-label
// classification. Subcommands: stats, order, train, predict, bench, sweep-n.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "CLI11.hpp"

#include "mlcc/chains.hpp"
#include "mlcc/cooccurrence.hpp"
#include "mlcc/dataset.hpp"
#include "mlcc/errors.hpp"
#include "mlcc/harness.hpp"
#include "mlcc/metrics.hpp"
#include "mlcc/ordering.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

struct DataArgs {
    std::string path;
    std::string format = "auto";
    std::optional<int> labels;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
    cmd->add_option("--data", args.path, "dataset file")->required();
    cmd->add_option("--format", args.format, "arff|csv|auto (default: by extension)")
        ->check(CLI::IsMember({"arff", "csv", "auto"}));
    cmd->add_option("--labels", args.labels,
                    "ARFF: label count, sign selects front/back placement "
                    "(overrides the header -C token); CSV: trailing label count");
}

std::string resolve_format(const DataArgs& args) {
    if (args.format != "auto") return args.format;
    std::string ext = std::filesystem::path(args.path).extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".arff") return "arff";
    if (ext == ".csv") return "csv";
    throw mlcc::ConfigError("cannot infer format of '" + args.path + "'; pass --format");
}

mlcc::Dataset load_data(const DataArgs& args) {
    std::string format = resolve_format(args);
    if (format == "arff") return mlcc::load_arff(args.path, args.labels);
    if (!args.labels) throw mlcc::ConfigError("--labels is required for csv data");
    return mlcc::load_csv(args.path, *args.labels);
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        std::size_t pos = csv.find(',', start);
        if (pos == std::string::npos) pos = csv.size();
        if (pos > start) out.push_back(csv.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

int parse_label_token(const std::string& token, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == token) return static_cast<int>(i);
    try {
        return std::stoi(token);
    } catch (const std::exception&) {
        throw mlcc::ConfigError("unknown label '" + token + "' in --order-spec");
    }
}

mlcc::ChainOrder make_order(const mlcc::Dataset& d, const std::string& method, int n,
                            std::uint64_t seed, const std::string& order_spec,
                            mlcc::CRMatrix* matrix_out) {
    const int q = static_cast<int>(d.n_labels());
    if (method == "random") return mlcc::random_order(q, seed);
    if (method == "given") {
        if (order_spec.empty())
            throw mlcc::ConfigError("--order-spec is required with the given order");
        std::vector<int> order;
        for (const std::string& token : split_list(order_spec))
            order.push_back(parse_label_token(token, d.label_names));
        return mlcc::given_order(std::move(order));
    }
    mlcc::CRMatrix m = mlcc::build_cr_matrix(d);
    mlcc::HeadPair head = mlcc::select_head_pair(m, mlcc::head_candidates(m));
    mlcc::ChainOrder order;
    if (method == "gocc") order = mlcc::gocc_order(m, head);
    else if (method == "tocc") order = mlcc::tocc_order(d, head);
    else if (method == "ngram") order = mlcc::ngram_order(d, head, n);
    else throw mlcc::ConfigError("unknown order method: " + method);
    if (matrix_out) *matrix_out = std::move(m);
    return order;
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mlcc::DataError("cannot write: " + out_path);
    out << text;
    if (!out) throw mlcc::DataError("write failed: " + out_path);
}

int run(int argc, char** argv) {
    CLI::App app{"multi-label classifier chains with co-occurrence chain ordering"};
    app.require_subcommand(1);

    // stats
    DataArgs stats_data;
    CLI::App* stats = app.add_subcommand("stats", "describe a dataset");
    add_data_options(stats, stats_data);

    // order
    DataArgs order_data;
    std::string order_method = "gocc";
    int order_n = 3;
    std::uint64_t order_seed = 0;
    bool emit_matrix = false;
    CLI::App* order = app.add_subcommand("order", "compute a chain order without training");
    add_data_options(order, order_data);
    order->add_option("--method", order_method, "gocc|tocc|ngram|random")
        ->check(CLI::IsMember({"gocc", "tocc", "ngram", "random"}));
    order->add_option("--n", order_n, "n-gram window (ngram method)");
    order->add_option("--seed", order_seed, "seed (random method)");
    order->add_flag("--emit-matrix", emit_matrix, "include the full co-occurrence matrix");

    // train
    DataArgs train_data;
    std::string train_algo = "cc", train_order = "gocc", train_order_spec, train_out;
    int train_n = 3, train_members = 4;
    std::uint64_t train_seed = 0;
    mlcc::LearnerConfig learner;
    CLI::App* train = app.add_subcommand("train", "train a model on a full dataset");
    add_data_options(train, train_data);
    train->add_option("--algo", train_algo, "cc|br|ecc")
        ->check(CLI::IsMember({"cc", "br", "ecc"}));
    train->add_option("--order", train_order, "cc order: gocc|tocc|ngram|random|given")
        ->check(CLI::IsMember({"gocc", "tocc", "ngram", "random", "given"}));
    train->add_option("--order-spec", train_order_spec, "comma-separated labels (given order)");
    train->add_option("--n", train_n, "n-gram window (ngram order)");
    train->add_option("--seed", train_seed, "seed for random orders / ecc");
    train->add_option("--members", train_members, "ensemble size (ecc)");
    train->add_option("--learning-rate", learner.learning_rate, "learner step size");
    train->add_option("--iterations", learner.iterations, "learner iteration count");
    train->add_option("--l2", learner.l2, "learner L2 penalty");
    train->add_option("--out", train_out, "model file to write")->required();

    // predict
    DataArgs predict_data;
    std::string model_path, predict_out;
    bool with_metrics = false;
    CLI::App* predict = app.add_subcommand("predict", "apply a saved model");
    predict->add_option("--model", model_path, "model file")->required();
    add_data_options(predict, predict_data);
    predict->add_option("--out", predict_out, "predictions CSV (default: stdout)");
    predict->add_flag("--metrics", with_metrics, "print metrics JSON to stdout");

    // bench
    std::string bench_config, bench_out, bench_algos;
    std::optional<std::uint64_t> bench_seed;
    std::optional<int> bench_folds;
    DataArgs bench_data;
    CLI::App* bench = app.add_subcommand("bench", "cross-validated multi-algorithm benchmark");
    bench->add_option("--config", bench_config, "experiment config JSON");
    bench->add_option("--out", bench_out, "output directory");
    bench->add_option("--algos", bench_algos, "comma-separated algorithm list override");
    bench->add_option("--seed", bench_seed, "master seed override");
    bench->add_option("--folds", bench_folds, "fold count override");
    bench->add_option("--data", bench_data.path, "single dataset file (alternative to --config)");
    bench->add_option("--format", bench_data.format, "arff|csv|auto");
    bench->add_option("--labels", bench_data.labels, "label count for --data");

    // sweep-n
    std::string sweep_config, sweep_out, sweep_values = "1,2,3,4,5";
    std::optional<std::uint64_t> sweep_seed;
    DataArgs sweep_data;
    CLI::App* sweep = app.add_subcommand("sweep-n", "accuracy/F1 over n-gram window sizes");
    sweep->add_option("--config", sweep_config, "experiment config JSON");
    sweep->add_option("--n-values", sweep_values, "comma-separated n values");
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--seed", sweep_seed, "master seed override");
    sweep->add_option("--data", sweep_data.path, "single dataset file (alternative to --config)");
    sweep->add_option("--format", sweep_data.format, "arff|csv|auto");
    sweep->add_option("--labels", sweep_data.labels, "label count for --data");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    auto build_config = [&](const std::string& config_path, const DataArgs& data,
                            const std::string& algos, std::optional<std::uint64_t> seed,
                            std::optional<int> folds, const std::string& out_dir) {
        mlcc::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = mlcc::load_config(config_path);
        if (!data.path.empty()) {
            mlcc::DatasetRef ref;
            ref.path = data.path;
            ref.format = resolve_format(data);
            ref.labels = data.labels;
            ref.name = std::filesystem::path(data.path).stem().string();
            cfg.datasets.push_back(std::move(ref));
        }
        if (!algos.empty()) {
            cfg.algorithms.clear();
            for (const std::string& kind : split_list(algos)) {
                if (kind.rfind("ngram", 0) == 0 && kind.size() > 5)
                    cfg.algorithms.push_back({"ngram", std::stoi(kind.substr(5))});
                else
                    cfg.algorithms.push_back({kind, 3});
            }
        }
        if (cfg.algorithms.empty() && !cfg.datasets.empty())
            cfg.algorithms = {{"gocc", 3}, {"tocc", 3}, {"cc_random", 3}, {"br", 3}, {"ecc", 3}};
        if (seed) cfg.master_seed = *seed;
        if (folds) cfg.n_folds = *folds;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        return cfg;
    };

    if (stats->parsed()) {
        mlcc::Dataset d = load_data(stats_data);
        mlcc::DatasetStats s = mlcc::label_stats(d);
        nlohmann::json j{{"name", d.name}, {"n", s.n}, {"k", s.k}, {"q", s.q},
                         {"lcard", s.lcard}};
        std::cout << j.dump(2) << '\n';
    } else if (order->parsed()) {
        mlcc::Dataset d = load_data(order_data);
        mlcc::CRMatrix matrix;
        mlcc::ChainOrder chain =
            make_order(d, order_method, order_n, order_seed, "", emit_matrix ? &matrix : nullptr);
        nlohmann::json j;
        j["dataset"] = d.name;
        j["order"] = mlcc::chain_order_to_json(chain, d.label_names);
        if (chain.head) {
            j["head"] = {{"first", d.label_names[static_cast<std::size_t>(chain.head->first)]},
                         {"second", d.label_names[static_cast<std::size_t>(chain.head->second)]},
                         {"tied_candidates", nlohmann::json::array()},
                         {"index_order_default", chain.head->index_order_default}};
            for (const mlcc::IndexPair& p : chain.head->tied_candidates)
                j["head"]["tied_candidates"].push_back(
                    {d.label_names[static_cast<std::size_t>(p.first)],
                     d.label_names[static_cast<std::size_t>(p.second)]});
        }
        if (emit_matrix && order_method != "random")
            j["cr_matrix"] = mlcc::cr_matrix_to_json(matrix);
        std::cout << j.dump(2) << '\n';
    } else if (train->parsed()) {
        mlcc::Dataset d = load_data(train_data);
        mlcc::AnyModel model{mlcc::TrainedBR{}};
        if (train_algo == "br") {
            model = mlcc::train_br(d, learner);
        } else if (train_algo == "ecc") {
            model = mlcc::train_ecc(d, train_members, learner, train_seed);
        } else {
            mlcc::ChainOrder chain =
                make_order(d, train_order, train_n, train_seed, train_order_spec, nullptr);
            model = mlcc::train_cc(d, chain, learner);
        }
        mlcc::save_model(model, train_out);
        std::cout << "wrote " << train_out << '\n';
    } else if (predict->parsed()) {
        mlcc::AnyModel model = mlcc::load_model(model_path);
        mlcc::Dataset d = load_data(predict_data);
        if (d.n_features() != mlcc::model_feature_width(model))
            throw mlcc::DataError("dataset feature width does not match the model");
        mlcc::LabelMatrix predicted = mlcc::predict_any(model, d.features);
        const auto& names = mlcc::model_label_names(model);
        std::ostringstream out;
        for (std::size_t l = 0; l < names.size(); ++l) out << (l ? "," : "") << names[l];
        out << '\n';
        for (std::size_t i = 0; i < predicted.rows; ++i) {
            for (std::size_t l = 0; l < predicted.cols; ++l)
                out << (l ? "," : "") << int(predicted.at(i, l));
            out << '\n';
        }
        write_or_print(predict_out, out.str());
        if (with_metrics) {
            mlcc::PredictionSet p{d.labels, predicted, d.label_names};
            mlcc::MetricsReport r = mlcc::compute_metrics(p);
            nlohmann::json j{{"accuracy", r.accuracy},
                             {"f1", r.f1},
                             {"example_f1", r.example_f1},
                             {"hamming_loss", r.hamming_loss}};
            std::cout << j.dump(2) << '\n';
        }
    } else if (bench->parsed()) {
        mlcc::ExperimentConfig cfg = build_config(bench_config, bench_data, bench_algos,
                                                  bench_seed, bench_folds, bench_out);
        mlcc::BenchTable table = mlcc::run_bench(cfg);
        std::cout << mlcc::bench_to_csv(table);
        if (!cfg.output_dir.empty())
            std::cout << "# wrote bench.csv, bench.json, orders.json, run_report.json to "
                      << cfg.output_dir << '\n';
    } else if (sweep->parsed()) {
        mlcc::ExperimentConfig cfg = build_config(sweep_config, sweep_data, "", sweep_seed,
                                                  std::nullopt, sweep_out);
        std::vector<int> ns;
        for (const std::string& v : split_list(sweep_values)) ns.push_back(std::stoi(v));
        std::vector<mlcc::NSweepRow> rows = mlcc::run_nsweep(cfg, ns);
        std::cout << mlcc::nsweep_to_csv(rows, mlcc::config_to_json(cfg));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mlcc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const mlcc::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    }
}
