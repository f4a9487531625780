#ifndef MLCC_TESTS_TEST_UTIL_HPP_
#define MLCC_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mlcc/cooccurrence.hpp"
#include "mlcc/dataset.hpp"
#include "mlcc/rng.hpp"

namespace mlcc::testutil {

/// Random dataset: uniform features, i.i.d. Bernoulli(density) labels.
inline Dataset random_dataset(SplitMix64& rng, std::size_t n, std::size_t k, std::size_t q,
                              double density = 0.4) {
    Dataset d;
    d.name = "random";
    d.features = Matrix(n, k);
    d.labels = LabelMatrix(n, q);
    for (std::size_t j = 0; j < k; ++j) d.feature_names.push_back("x" + std::to_string(j));
    for (std::size_t l = 0; l < q; ++l) d.label_names.push_back("y" + std::to_string(l));
    for (double& v : d.features.values) v = rng.next_double() * 10.0 - 5.0;
    for (std::uint8_t& v : d.labels.values) v = rng.next_double() < density ? 1 : 0;
    return d;
}

/// Dataset with the given label rows and a single constant-ish feature.
inline Dataset dataset_from_labels(const std::vector<std::vector<int>>& rows) {
    Dataset d;
    d.name = "fixture";
    const std::size_t n = rows.size();
    const std::size_t q = rows.front().size();
    d.features = Matrix(n, 1);
    d.labels = LabelMatrix(n, q);
    d.feature_names = {"x0"};
    for (std::size_t l = 0; l < q; ++l) d.label_names.push_back("y" + std::to_string(l));
    for (std::size_t i = 0; i < n; ++i) {
        d.features.at(i, 0) = static_cast<double>(i);
        for (std::size_t l = 0; l < q; ++l)
            d.labels.at(i, l) = static_cast<std::uint8_t>(rows[i][l]);
    }
    return d;
}

/// Five-label co-occurrence fixture with a unique maximum at (0, 1).
inline CRMatrix five_label_fixture() {
    CRMatrix m = CRMatrix::make(5);
    m.set_pair(0, 1, 0.255);
    m.set_pair(0, 2, 0.063);
    m.set_pair(0, 3, 0.045);
    m.set_pair(0, 4, 0.035);
    m.set_pair(1, 2, 0.232);
    m.set_pair(1, 3, 0.073);
    m.set_pair(1, 4, 0.063);
    m.set_pair(2, 3, 0.246);
    m.set_pair(2, 4, 0.051);
    m.set_pair(3, 4, 0.135);
    return m;
}

/// Independent brute-force recomputation of the co-occurrence rate: counts
/// both-relevant and both-irrelevant rows separately, then divides by n.
inline double cr_oracle(const Dataset& d, int i, int j) {
    std::size_t both_relevant = 0, both_irrelevant = 0;
    for (std::size_t r = 0; r < d.n_instances(); ++r) {
        int a = d.labels.at(r, static_cast<std::size_t>(i));
        int b = d.labels.at(r, static_cast<std::size_t>(j));
        if (a == 1 && b == 1) ++both_relevant;
        if (a == 0 && b == 0) ++both_irrelevant;
    }
    return static_cast<double>(both_relevant + both_irrelevant) /
           static_cast<double>(d.n_instances());
}

/// Independent greedy-ordering oracle: recomputes every step's smoothed
/// conditional by scanning rows directly, window = last min(n-1, placed)
/// labels, zero-probability fallback over the rate row of the last label.
inline std::vector<int> ngram_order_oracle(const Dataset& d, int first, int second, int n) {
    const int q = static_cast<int>(d.n_labels());
    std::vector<int> order = {first, second};
    std::vector<bool> placed(static_cast<std::size_t>(q), false);
    placed[static_cast<std::size_t>(first)] = placed[static_cast<std::size_t>(second)] = true;
    while (static_cast<int>(order.size()) < q) {
        int window = std::min(n - 1, static_cast<int>(order.size()));
        int best = -1;
        double best_p = 0.0;
        for (int j = 0; j < q; ++j) {
            if (placed[static_cast<std::size_t>(j)]) continue;
            std::size_t b_size = 0, hits = 0;
            for (std::size_t r = 0; r < d.n_instances(); ++r) {
                bool in_b = true;
                for (int w = 0; w < window; ++w) {
                    int l = order[order.size() - 1 - static_cast<std::size_t>(w)];
                    if (!d.labels.at(r, static_cast<std::size_t>(l))) {
                        in_b = false;
                        break;
                    }
                }
                if (!in_b) continue;
                ++b_size;
                hits += d.labels.at(r, static_cast<std::size_t>(j));
            }
            double p = static_cast<double>(hits) / (static_cast<double>(b_size) + 1.0);
            if (p > best_p) {
                best_p = p;
                best = j;
            }
        }
        if (best < 0) {
            int last = order.back();
            double best_rate = -1.0;
            for (int j = 0; j < q; ++j) {
                if (placed[static_cast<std::size_t>(j)] || j == last) continue;
                double rate = cr_oracle(d, last, j);
                if (rate > best_rate) {
                    best_rate = rate;
                    best = j;
                }
            }
        }
        order.push_back(best);
        placed[static_cast<std::size_t>(best)] = true;
    }
    return order;
}

inline std::vector<int> trigram_order_oracle(const Dataset& d, int first, int second) {
    return ngram_order_oracle(d, first, second, 3);
}

/// Unique temp file path under the system temp directory.
inline std::filesystem::path temp_path(const std::string& stem, const std::string& ext) {
    static std::uint64_t counter = 0;
    return std::filesystem::temp_directory_path() /
           (stem + "-" + std::to_string(++counter) + ext);
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace mlcc::testutil

#endif  // MLCC_TESTS_TEST_UTIL_HPP_
