#ifndef MLCC_ORDERING_HPP_
#define MLCC_ORDERING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlcc/cooccurrence.hpp"
#include "mlcc/dataset.hpp"

namespace mlcc {

enum class OrderMethod { gocc, tocc, ngram, random, given };

std::string order_method_name(OrderMethod method);

/// A chain order: a permutation of the label indices plus provenance.
struct ChainOrder {
    std::vector<int> order;
    OrderMethod method = OrderMethod::given;
    int ngram_n = 0;        // ngram only
    std::uint64_t seed = 0;  // random only
    std::optional<HeadPair> head;

    std::size_t size() const { return order.size(); }
};

/// Greedy extension over the co-occurrence matrix: after the head pair, each
/// step appends the unplaced label with the highest rate against the label
/// placed last. Ties go to the smallest index.
ChainOrder gocc_order(const CRMatrix& m, const HeadPair& head);

/// Trigram extension: each step appends the unplaced label with the highest
/// smoothed conditional probability given the last two placed labels,
/// p_j = |{rows where both predecessors and j are relevant}| / (|B| + 1).
/// When every candidate scores zero the step falls back to the co-occurrence
/// row of the last placed label. Ties go to the smallest index.
ChainOrder tocc_order(const Dataset& d, const HeadPair& head);

/// n-gram generalization of tocc_order conditioning on the last
/// min(n - 1, placed) labels; n = 1 ranks by smoothed marginal frequency and
/// n = 3 reproduces tocc_order exactly.
ChainOrder ngram_order(const Dataset& d, const HeadPair& head, int n);

/// Seeded uniform permutation of [0, q).
ChainOrder random_order(int q, std::uint64_t seed);

/// Wraps an explicit permutation; throws if it is not one.
ChainOrder given_order(std::vector<int> order);

/// Diagnostic score of an order under the n-gram conditional model: the sum
/// over positions >= 2 of log(p + 1e-12). Never used for ordering.
double chain_log_probability(const Dataset& d, const ChainOrder& order, int n);

/// {"method": ..., "n": ..., "seed": ..., "order": [label names]}
nlohmann::json chain_order_to_json(const ChainOrder& order,
                                   const std::vector<std::string>& label_names);

}  // namespace mlcc

#endif  // MLCC_ORDERING_HPP_
