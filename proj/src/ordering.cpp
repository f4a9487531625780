#include "mlcc/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mlcc/errors.hpp"
#include "mlcc/rng.hpp"

namespace mlcc {

namespace {

constexpr double kLogEpsilon = 1e-12;

void check_head(const HeadPair& head, int q) {
    if (head.first == head.second || head.first < 0 || head.second < 0 || head.first >= q ||
        head.second >= q)
        throw std::invalid_argument("head pair does not name two distinct labels");
}

// Unplaced label with the highest rate in the matrix row of `row_label`.
int best_by_cr_row(const CRMatrix& m, int row_label, const std::vector<char>& placed) {
    int best = -1;
    double best_rate = -1.0;
    for (int j = 0; j < m.q; ++j) {
        if (placed[j] || j == row_label) continue;
        double v = m.at(row_label, j);
        if (v > best_rate) {
            best_rate = v;
            best = j;
        }
    }
    return best;
}

// Rows of d where every label in `window` is relevant.
std::vector<std::size_t> rows_with_all_relevant(const Dataset& d, std::span<const int> window) {
    std::vector<std::size_t> rows;
    const std::size_t n = d.n_instances();
    for (std::size_t r = 0; r < n; ++r) {
        bool all = true;
        for (int l : window)
            if (!d.labels.at(r, static_cast<std::size_t>(l))) {
                all = false;
                break;
            }
        if (all) rows.push_back(r);
    }
    return rows;
}

// Smoothed conditional counts over B for one candidate label.
double conditional_probability(const Dataset& d, const std::vector<std::size_t>& b_rows,
                               int candidate) {
    std::size_t count = 0;
    for (std::size_t r : b_rows) count += d.labels.at(r, static_cast<std::size_t>(candidate));
    return static_cast<double>(count) / (static_cast<double>(b_rows.size()) + 1.0);
}

}  // namespace

std::string order_method_name(OrderMethod method) {
    switch (method) {
        case OrderMethod::gocc: return "gocc";
        case OrderMethod::tocc: return "tocc";
        case OrderMethod::ngram: return "ngram";
        case OrderMethod::random: return "random";
        case OrderMethod::given: return "given";
    }
    return "unknown";
}

ChainOrder gocc_order(const CRMatrix& m, const HeadPair& head) {
    check_head(head, m.q);
    ChainOrder chain;
    chain.method = OrderMethod::gocc;
    chain.head = head;
    chain.order = {head.first, head.second};
    std::vector<char> placed(static_cast<std::size_t>(m.q), 0);
    placed[head.first] = placed[head.second] = 1;
    while (chain.order.size() < static_cast<std::size_t>(m.q)) {
        int next = best_by_cr_row(m, chain.order.back(), placed);
        chain.order.push_back(next);
        placed[next] = 1;
    }
    return chain;
}

ChainOrder tocc_order(const Dataset& d, const HeadPair& head) {
    const int q = static_cast<int>(d.n_labels());
    check_head(head, q);
    ChainOrder chain;
    chain.method = OrderMethod::tocc;
    chain.head = head;
    chain.order = {head.first, head.second};
    std::vector<char> placed(static_cast<std::size_t>(q), 0);
    placed[head.first] = placed[head.second] = 1;

    std::optional<CRMatrix> cr;  // built only if a zero-probability step occurs
    while (chain.order.size() < static_cast<std::size_t>(q)) {
        const int pair[2] = {chain.order[chain.order.size() - 2], chain.order.back()};
        std::vector<std::size_t> b_rows = rows_with_all_relevant(d, pair);
        int best = -1;
        double best_p = 0.0;
        for (int j = 0; j < q; ++j) {
            if (placed[j]) continue;
            double p = conditional_probability(d, b_rows, j);
            if (p > best_p) {
                best_p = p;
                best = j;
            }
        }
        if (best < 0) {
            if (!cr) cr = build_cr_matrix(d);
            best = best_by_cr_row(*cr, chain.order.back(), placed);
        }
        chain.order.push_back(best);
        placed[best] = 1;
    }
    return chain;
}

ChainOrder ngram_order(const Dataset& d, const HeadPair& head, int n) {
    if (n < 1) throw ConfigError("ngram order requires n >= 1, got " + std::to_string(n));
    const int q = static_cast<int>(d.n_labels());
    check_head(head, q);
    ChainOrder chain;
    chain.method = OrderMethod::ngram;
    chain.ngram_n = n;
    chain.head = head;
    chain.order = {head.first, head.second};
    std::vector<char> placed(static_cast<std::size_t>(q), 0);
    placed[head.first] = placed[head.second] = 1;

    std::optional<CRMatrix> cr;
    while (chain.order.size() < static_cast<std::size_t>(q)) {
        const std::size_t window =
            std::min<std::size_t>(static_cast<std::size_t>(n - 1), chain.order.size());
        std::span<const int> context(chain.order.data() + chain.order.size() - window, window);
        std::vector<std::size_t> b_rows = rows_with_all_relevant(d, context);
        int best = -1;
        double best_p = 0.0;
        for (int j = 0; j < q; ++j) {
            if (placed[j]) continue;
            double p = conditional_probability(d, b_rows, j);
            if (p > best_p) {
                best_p = p;
                best = j;
            }
        }
        if (best < 0) {
            if (!cr) cr = build_cr_matrix(d);
            best = best_by_cr_row(*cr, chain.order.back(), placed);
        }
        chain.order.push_back(best);
        placed[best] = 1;
    }
    return chain;
}

ChainOrder random_order(int q, std::uint64_t seed) {
    if (q < 1) throw ConfigError("random order requires q >= 1");
    ChainOrder chain;
    chain.method = OrderMethod::random;
    chain.seed = seed;
    chain.order.resize(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) chain.order[static_cast<std::size_t>(i)] = i;
    SplitMix64 rng(seed);
    shuffle(chain.order, rng);
    return chain;
}

ChainOrder given_order(std::vector<int> order) {
    std::vector<char> seen(order.size(), 0);
    for (int v : order) {
        if (v < 0 || static_cast<std::size_t>(v) >= order.size() || seen[v])
            throw std::invalid_argument("given order is not a permutation");
        seen[v] = 1;
    }
    ChainOrder chain;
    chain.method = OrderMethod::given;
    chain.order = std::move(order);
    return chain;
}

double chain_log_probability(const Dataset& d, const ChainOrder& order, int n) {
    if (n < 2) throw ConfigError("chain_log_probability requires n >= 2");
    const std::size_t q = d.n_labels();
    if (order.order.size() != q)
        throw std::invalid_argument("order length does not match label count");
    double total = 0.0;
    for (std::size_t c = 2; c < q; ++c) {
        const std::size_t window = std::min<std::size_t>(static_cast<std::size_t>(n - 1), c);
        std::span<const int> context(order.order.data() + c - window, window);
        std::vector<std::size_t> b_rows = rows_with_all_relevant(d, context);
        double p = conditional_probability(d, b_rows, order.order[c]);
        total += std::log(p + kLogEpsilon);
    }
    return total;
}

nlohmann::json chain_order_to_json(const ChainOrder& order,
                                   const std::vector<std::string>& label_names) {
    nlohmann::json j;
    j["method"] = order_method_name(order.method);
    j["n"] = order.method == OrderMethod::ngram ? nlohmann::json(order.ngram_n)
                                                : nlohmann::json(nullptr);
    j["seed"] = order.method == OrderMethod::random ? nlohmann::json(order.seed)
                                                    : nlohmann::json(nullptr);
    nlohmann::json names = nlohmann::json::array();
    for (int idx : order.order) names.push_back(label_names.at(static_cast<std::size_t>(idx)));
    j["order"] = std::move(names);
    if (order.head) {
        j["head"] = {{"first", label_names.at(static_cast<std::size_t>(order.head->first))},
                     {"second", label_names.at(static_cast<std::size_t>(order.head->second))}};
    }
    return j;
}

}  // namespace mlcc
