#include "mlcc/metrics.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "mlcc/errors.hpp"

namespace mlcc {

namespace {

void check_shapes(const PredictionSet& p) {
    if (p.truth.rows != p.predicted.rows || p.truth.cols != p.predicted.cols)
        throw std::invalid_argument("truth and prediction shapes differ");
    if (p.truth.rows == 0 || p.truth.cols == 0)
        throw std::invalid_argument("empty prediction set");
}

std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

double example_accuracy(const PredictionSet& p) {
    check_shapes(p);
    const std::size_t n = p.truth.rows, q = p.truth.cols;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t inter = 0, uni = 0;
        for (std::size_t l = 0; l < q; ++l) {
            inter += p.truth.at(i, l) & p.predicted.at(i, l);
            uni += p.truth.at(i, l) | p.predicted.at(i, l);
        }
        total += uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }
    return total / static_cast<double>(n);
}

double macro_f1(const PredictionSet& p) {
    check_shapes(p);
    const std::size_t n = p.truth.rows, q = p.truth.cols;
    double total = 0.0;
    for (std::size_t l = 0; l < q; ++l) {
        std::size_t tp = 0, truth_pos = 0, pred_pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            tp += p.truth.at(i, l) & p.predicted.at(i, l);
            truth_pos += p.truth.at(i, l);
            pred_pos += p.predicted.at(i, l);
        }
        if (truth_pos == 0 && pred_pos == 0) {
            total += 1.0;  // label absent from both sides: counted as agreement
            continue;
        }
        double precision = truth_pos ? static_cast<double>(tp) / truth_pos : 0.0;
        double recall = pred_pos ? static_cast<double>(tp) / pred_pos : 0.0;
        if (precision + recall > 0.0)
            total += 2.0 * precision * recall / (precision + recall);
    }
    return total / static_cast<double>(q);
}

double example_f1(const PredictionSet& p) {
    check_shapes(p);
    const std::size_t n = p.truth.rows, q = p.truth.cols;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t inter = 0, truth_pos = 0, pred_pos = 0;
        for (std::size_t l = 0; l < q; ++l) {
            inter += p.truth.at(i, l) & p.predicted.at(i, l);
            truth_pos += p.truth.at(i, l);
            pred_pos += p.predicted.at(i, l);
        }
        std::size_t denom = truth_pos + pred_pos;
        total += denom == 0 ? 1.0 : 2.0 * static_cast<double>(inter) / static_cast<double>(denom);
    }
    return total / static_cast<double>(n);
}

double hamming_loss(const PredictionSet& p) {
    check_shapes(p);
    const std::size_t n = p.truth.rows, q = p.truth.cols;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t wrong = 0;
        for (std::size_t l = 0; l < q; ++l) wrong += p.truth.at(i, l) != p.predicted.at(i, l);
        total += static_cast<double>(wrong) / static_cast<double>(q);
    }
    return total / static_cast<double>(n);
}

MetricsReport compute_metrics(const PredictionSet& p) {
    MetricsReport r;
    r.accuracy = example_accuracy(p);
    r.f1 = macro_f1(p);
    r.example_f1 = example_f1(p);
    r.hamming_loss = hamming_loss(p);
    return r;
}

AlgoAggregate aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) throw std::invalid_argument("aggregate needs at least one report");
    AlgoAggregate a;
    for (const MetricsReport& r : reports) {
        a.avg_accuracy += r.accuracy;
        a.avg_f1 += r.f1;
        a.avg_hamming_loss += r.hamming_loss;
        a.avg_time += r.wall_time_seconds;
    }
    const double count = static_cast<double>(reports.size());
    a.avg_accuracy /= count;
    a.avg_f1 /= count;
    a.avg_hamming_loss /= count;
    a.avg_time /= count;
    return a;
}

void compute_aggregates(BenchTable& bench) {
    bench.aggregates.clear();
    for (std::size_t a = 0; a < bench.algorithms.size(); ++a) {
        std::vector<MetricsReport> column;
        for (std::size_t d = 0; d < bench.datasets.size(); ++d)
            column.push_back(bench.cell(d, a));
        bench.aggregates.push_back(aggregate(column));
    }
    bench.has_aggregates = true;
}

namespace {

// (v - min) / (max - min); zero spread maps everything to 0.
void minmax(const std::vector<double>& values, std::vector<double>& out, bool& degenerate) {
    double lo = values.front(), hi = values.front();
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    degenerate = hi == lo;
    out.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = degenerate ? 0.0 : (values[i] - lo) / (hi - lo);
}

}  // namespace

void normalize(BenchTable& bench) {
    if (bench.algorithms.size() < 2)
        throw ConfigError("normalization needs at least two algorithms");
    if (!bench.has_aggregates) compute_aggregates(bench);

    std::vector<double> acc, f1, hloss, time;
    for (const AlgoAggregate& a : bench.aggregates) {
        acc.push_back(a.avg_accuracy);
        f1.push_back(a.avg_f1);
        hloss.push_back(a.avg_hamming_loss);
        time.push_back(a.avg_time);
    }
    std::vector<double> n_acc, n_f1, n_hloss, n_time;
    minmax(acc, n_acc, bench.degenerate.accuracy);
    minmax(f1, n_f1, bench.degenerate.f1);
    minmax(hloss, n_hloss, bench.degenerate.hamming_loss);
    minmax(time, n_time, bench.degenerate.time);

    bench.normalized.resize(bench.algorithms.size());
    for (std::size_t a = 0; a < bench.algorithms.size(); ++a) {
        bench.normalized[a].accuracy = n_acc[a];
        bench.normalized[a].f1 = n_f1[a];
        bench.normalized[a].hamming_loss = n_hloss[a];
        bench.normalized[a].time = n_time[a];
    }
    bench.has_normalized = true;
}

std::string bench_to_csv(const BenchTable& bench) {
    std::ostringstream out;
    out << "# format_version: 1\n";
    out << "# config: " << bench.config_echo.dump() << "\n";
    out << "metric,dataset";
    for (const std::string& a : bench.algorithms) out << ',' << a;
    out << '\n';

    struct Section {
        const char* name;
        double MetricsReport::* field;
        double AlgoAggregate::* avg;
    };
    const Section sections[] = {
        {"accuracy", &MetricsReport::accuracy, &AlgoAggregate::avg_accuracy},
        {"f1", &MetricsReport::f1, &AlgoAggregate::avg_f1},
        {"hamming_loss", &MetricsReport::hamming_loss, &AlgoAggregate::avg_hamming_loss},
    };
    for (const Section& s : sections) {
        for (std::size_t d = 0; d < bench.datasets.size(); ++d) {
            out << s.name << ',' << bench.datasets[d];
            for (std::size_t a = 0; a < bench.algorithms.size(); ++a)
                out << ',' << format_double(bench.cell(d, a).*s.field);
            out << '\n';
        }
        if (bench.has_aggregates) {
            out << s.name << ",avg";
            for (std::size_t a = 0; a < bench.algorithms.size(); ++a)
                out << ',' << format_double(bench.aggregates[a].*s.avg);
            out << '\n';
        }
    }
    return out.str();
}

nlohmann::json bench_to_json(const BenchTable& bench) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["config"] = bench.config_echo;
    j["datasets"] = bench.datasets;
    j["algorithms"] = bench.algorithms;

    nlohmann::json results;
    for (std::size_t d = 0; d < bench.datasets.size(); ++d) {
        nlohmann::json row;
        for (std::size_t a = 0; a < bench.algorithms.size(); ++a) {
            const MetricsReport& r = bench.cell(d, a);
            row[bench.algorithms[a]] = {{"accuracy", r.accuracy},
                                        {"f1", r.f1},
                                        {"example_f1", r.example_f1},
                                        {"hamming_loss", r.hamming_loss},
                                        {"time_seconds", r.wall_time_seconds}};
        }
        results[bench.datasets[d]] = std::move(row);
    }
    j["results"] = std::move(results);

    if (bench.has_aggregates) {
        nlohmann::json agg;
        for (std::size_t a = 0; a < bench.algorithms.size(); ++a) {
            const AlgoAggregate& v = bench.aggregates[a];
            agg[bench.algorithms[a]] = {{"avg_accuracy", v.avg_accuracy},
                                        {"avg_f1", v.avg_f1},
                                        {"avg_hamming_loss", v.avg_hamming_loss},
                                        {"avg_time_seconds", v.avg_time}};
        }
        j["aggregates"] = std::move(agg);
    }
    if (bench.has_normalized) {
        nlohmann::json norm;
        for (std::size_t a = 0; a < bench.algorithms.size(); ++a) {
            const AlgoNormalized& v = bench.normalized[a];
            norm[bench.algorithms[a]] = {{"accuracy", v.accuracy},
                                         {"f1", v.f1},
                                         {"hamming_loss", v.hamming_loss},
                                         {"time", v.time}};
        }
        j["normalized"] = std::move(norm);
        j["normalized_note"] =
            "hamming_loss and time are min-max normalized without sign flip: lower is better";
        j["normalization_degenerate"] = {{"accuracy", bench.degenerate.accuracy},
                                         {"f1", bench.degenerate.f1},
                                         {"hamming_loss", bench.degenerate.hamming_loss},
                                         {"time", bench.degenerate.time}};
    }
    return j;
}

}  // namespace mlcc
