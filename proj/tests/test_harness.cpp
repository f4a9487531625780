#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "mlcc/errors.hpp"
#include "mlcc/harness.hpp"
#include "mlcc/synthetic.hpp"
#include "test_util.hpp"

using namespace mlcc;
namespace tu = mlcc::testutil;

namespace {

ExperimentConfig memory_config(const std::string& name, std::vector<AlgorithmSpec> algos,
                               int folds = 3, std::uint64_t seed = 7) {
    ExperimentConfig cfg;
    DatasetRef ref;
    ref.name = name;
    ref.path = "(in-memory)";
    cfg.datasets.push_back(ref);
    cfg.algorithms = std::move(algos);
    cfg.n_folds = folds;
    cfg.master_seed = seed;
    cfg.learner.iterations = 60;  // fast fits for unit tests
    return cfg;
}

// strips wall-clock content so reports can be compared for determinism
nlohmann::json strip_time(nlohmann::json j) {
    if (j.is_object()) {
        nlohmann::json out = nlohmann::json::object();
        for (auto& [key, value] : j.items()) {
            if (key.find("time") != std::string::npos ||
                key.find("seconds") != std::string::npos || key == "started_at" ||
                key == "finished_at")
                continue;
            out[key] = strip_time(value);
        }
        return out;
    }
    if (j.is_array()) {
        nlohmann::json out = nlohmann::json::array();
        for (auto& value : j) out.push_back(strip_time(value));
        return out;
    }
    return j;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("config json round trip and defaults") {
    nlohmann::json j = {
        {"datasets", {{{"name", "synth"}, {"path", "synth.csv"}, {"format", "csv"},
                       {"labels", 4}}}},
        {"algorithms", {"gocc", "br", nlohmann::json{{"kind", "ngram"}, {"n", 2}}}},
        {"master_seed", 99}};
    ExperimentConfig cfg = config_from_json(j);
    CHECK(cfg.datasets.size() == 1);
    CHECK(cfg.datasets[0].labels == 4);
    CHECK(cfg.n_folds == 5);
    CHECK(cfg.ecc_members == 4);
    CHECK(cfg.master_seed == 99);
    REQUIRE(cfg.algorithms.size() == 3);
    CHECK(cfg.algorithms[2].kind == "ngram");
    CHECK(cfg.algorithms[2].ngram_n == 2);
    CHECK(cfg.algorithms[2].display_name() == "ngram2");
    CHECK(cfg.learner.iterations == 200);

    ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("config validation failures") {
    ExperimentConfig empty;
    CHECK_THROWS_AS(run_cv(empty), ConfigError);

    ExperimentConfig bad = memory_config("x", {{"mystery", 3}});
    SyntheticSpec spec;
    spec.n_instances = 30;
    spec.n_labels = 3;
    std::vector<Dataset> data{make_chained_dataset(spec, 1)};
    CHECK_THROWS_AS(run_cv(bad, data), ConfigError);
}

TEST_CASE("cross validation is deterministic and self-consistent") {
    SyntheticSpec spec;
    spec.n_instances = 90;
    spec.n_labels = 4;
    spec.n_features = 3;
    std::vector<Dataset> data{make_chained_dataset(spec, 3)};

    ExperimentConfig cfg =
        memory_config("synth", {{"gocc", 3}, {"tocc", 3}, {"cc_random", 3}, {"br", 3}, {"ecc", 3}});
    cfg.ecc_members = 2;

    RunReport a = run_cv(cfg, data);
    RunReport b = run_cv(cfg, data);
    CHECK(strip_time(run_report_to_json(a)) == strip_time(run_report_to_json(b)));

    // fold means must equal the summary
    for (const DatasetResult& dr : a.datasets)
        for (const AlgoResult& ar : dr.algorithms) {
            double acc = 0, f1 = 0, hl = 0;
            for (const FoldResult& fr : ar.folds) {
                acc += fr.metrics.accuracy;
                f1 += fr.metrics.f1;
                hl += fr.metrics.hamming_loss;
            }
            double folds = static_cast<double>(ar.folds.size());
            CHECK(ar.summary.accuracy == doctest::Approx(acc / folds).epsilon(1e-12));
            CHECK(ar.summary.f1 == doctest::Approx(f1 / folds).epsilon(1e-12));
            CHECK(ar.summary.hamming_loss == doctest::Approx(hl / folds).epsilon(1e-12));
        }

    // every chain algorithm reports one order per fold; br reports none
    for (const AlgoResult& ar : a.datasets[0].algorithms) {
        for (const FoldResult& fr : ar.folds) {
            if (ar.algorithm == "br") CHECK(fr.orders.empty());
            else if (ar.algorithm == "ecc") CHECK(fr.orders.size() == 2);
            else CHECK(fr.orders.size() == 1);
        }
    }
}

TEST_CASE("held-out labels cannot influence the chain orders") {
    SyntheticSpec spec;
    spec.n_instances = 80;
    spec.n_labels = 4;
    spec.n_features = 3;
    Dataset base = make_chained_dataset(spec, 5);

    ExperimentConfig cfg = memory_config("synth", {{"gocc", 3}, {"tocc", 3}});
    std::vector<Dataset> data{base};
    RunReport reference = run_cv(cfg, data);

    FoldPlan plan = split_kfold(base, cfg.n_folds, derive_seed(cfg.master_seed, "folds/synth"));
    SplitMix64 rng(999);
    for (int fold = 0; fold < cfg.n_folds; ++fold) {
        Dataset tampered = base;
        for (std::size_t idx : plan.test_indices(fold))
            for (std::size_t l = 0; l < tampered.n_labels(); ++l)
                tampered.labels.at(idx, l) = rng.next_double() < 0.5 ? 1 : 0;
        std::vector<Dataset> tampered_data{tampered};
        RunReport perturbed = run_cv(cfg, tampered_data);
        for (std::size_t a = 0; a < reference.datasets[0].algorithms.size(); ++a) {
            const auto& ref_fold = reference.datasets[0].algorithms[a].folds[fold];
            const auto& got_fold = perturbed.datasets[0].algorithms[a].folds[fold];
            CHECK(ref_fold.orders == got_fold.orders);
        }
    }
}

TEST_CASE("n sweep at window three equals the trigram bench row") {
    SyntheticSpec spec;
    spec.n_instances = 70;
    spec.n_labels = 4;
    spec.n_features = 3;
    Dataset d = make_chained_dataset(spec, 9);
    auto csv = tu::temp_path("sweep-data", ".csv");
    save_csv(d, csv.string());

    ExperimentConfig cfg;
    DatasetRef ref;
    ref.name = "synth";
    ref.path = csv.string();
    ref.format = "csv";
    ref.labels = spec.n_labels;
    cfg.datasets.push_back(ref);
    cfg.algorithms = {{"tocc", 3}};
    cfg.n_folds = 3;
    cfg.master_seed = 21;
    cfg.learner.iterations = 60;

    RunReport report = run_cv(cfg);
    const int ns[] = {3};
    std::vector<NSweepRow> rows = run_nsweep(cfg, ns);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == 3);
    CHECK(rows[0].accuracy == report.datasets[0].algorithms[0].summary.accuracy);
    CHECK(rows[0].f1 == report.datasets[0].algorithms[0].summary.f1);

    const int bad[] = {0};
    CHECK_THROWS_AS(run_nsweep(cfg, bad), ConfigError);
}

TEST_CASE("bench table endpoints and emitted files") {
    SyntheticSpec spec;
    spec.n_instances = 80;
    spec.n_labels = 4;
    spec.n_features = 3;
    Dataset d = make_chained_dataset(spec, 13);
    auto csv = tu::temp_path("bench-data", ".csv");
    save_csv(d, csv.string());

    auto out_a = tu::temp_path("bench-out-a", "");
    ExperimentConfig cfg;
    DatasetRef ref;
    ref.name = "synth";
    ref.path = csv.string();
    ref.format = "csv";
    ref.labels = spec.n_labels;
    cfg.datasets.push_back(ref);
    cfg.algorithms = {{"gocc", 3}, {"cc_random", 3}, {"br", 3}};
    cfg.n_folds = 3;
    cfg.master_seed = 17;
    cfg.learner.iterations = 60;
    cfg.output_dir = out_a.string();

    BenchTable bench = run_bench(cfg);
    REQUIRE(bench.has_normalized);

    auto count_endpoint = [&](auto field) {
        int zeros = 0, ones = 0;
        for (const AlgoNormalized& n : bench.normalized) {
            if (n.*field == 0.0) zeros++;
            if (n.*field == 1.0) ones++;
        }
        return std::pair{zeros, ones};
    };
    if (!bench.degenerate.accuracy) {
        auto [zeros, ones] = count_endpoint(&AlgoNormalized::accuracy);
        CHECK(zeros >= 1);
        CHECK(ones >= 1);
    }

    for (const char* name : {"bench.csv", "bench.json", "orders.json", "run_report.json"})
        CHECK(std::filesystem::exists(out_a / name));

    // rerun into a second directory: identical csv, identical json up to time
    auto out_b = tu::temp_path("bench-out-b", "");
    ExperimentConfig cfg_b = cfg;
    cfg_b.output_dir = out_b.string();
    run_bench(cfg_b);
    std::string csv_a = slurp(out_a / "bench.csv");
    std::string csv_b = slurp(out_b / "bench.csv");
    // config echoes differ only in output_dir; align them before comparing
    auto normalize_dir = [](std::string text, const std::string& dir) {
        std::size_t pos;
        while ((pos = text.find(dir)) != std::string::npos) text.replace(pos, dir.size(), "<out>");
        return text;
    };
    CHECK(normalize_dir(csv_a, out_a.string()) == normalize_dir(csv_b, out_b.string()));

    nlohmann::json ja = strip_time(nlohmann::json::parse(slurp(out_a / "bench.json")));
    nlohmann::json jb = strip_time(nlohmann::json::parse(slurp(out_b / "bench.json")));
    ja["config"]["output_dir"] = "<out>";
    jb["config"]["output_dir"] = "<out>";
    CHECK(ja == jb);

    std::filesystem::remove_all(out_a);
    std::filesystem::remove_all(out_b);
}

TEST_CASE("window three orders beat frequency orders on chained data") {
    // median over 10 generator seeds of 3-fold CV accuracy
    std::vector<double> acc3, acc1;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SyntheticSpec spec;
        spec.n_instances = 150;
        spec.n_labels = 6;
        spec.n_features = 4;
        std::vector<Dataset> data{make_chained_dataset(spec, derive_seed(777, std::to_string(seed)))};
        ExperimentConfig cfg = memory_config("synth", {{"ngram", 3}}, 3, seed);
        RunReport r3 = run_cv(cfg, data);
        cfg.algorithms = {{"ngram", 1}};
        RunReport r1 = run_cv(cfg, data);
        acc3.push_back(r3.datasets[0].algorithms[0].summary.accuracy);
        acc1.push_back(r1.datasets[0].algorithms[0].summary.accuracy);
    }
    std::sort(acc3.begin(), acc3.end());
    std::sort(acc1.begin(), acc1.end());
    double median3 = (acc3[4] + acc3[5]) / 2.0;
    double median1 = (acc1[4] + acc1[5]) / 2.0;
    CHECK(median3 >= median1);
}

TEST_CASE("synthetic generator plants the dependency it promises") {
    SyntheticSpec spec;
    spec.n_instances = 2000;
    spec.n_labels = 5;
    spec.n_features = 3;
    spec.noise = 0.2;
    Dataset d = make_chained_dataset(spec, 31);
    d.validate();

    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < d.n_instances(); ++i) {
        CHECK(d.labels.at(i, 0) == (d.features.at(i, 0) > 0.5 ? 1 : 0));
        for (std::size_t l = 1; l < d.n_labels(); ++l)
            disagreements += d.labels.at(i, l) != d.labels.at(i, l - 1);
    }
    double rate = static_cast<double>(disagreements) /
                  static_cast<double>(d.n_instances() * (d.n_labels() - 1));
    CHECK(rate == doctest::Approx(spec.noise).epsilon(0.15));

    CHECK(make_chained_dataset(spec, 31).labels == d.labels);  // seeded determinism
}
