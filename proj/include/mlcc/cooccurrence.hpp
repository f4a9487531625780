#ifndef MLCC_COOCCURRENCE_HPP_
#define MLCC_COOCCURRENCE_HPP_

#include <compare>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlcc/dataset.hpp"

namespace mlcc {

/// Symmetric q x q co-occurrence-rate matrix. Entry (i, j) is the fraction of
/// instances on which labels i and j agree (both relevant or both
/// irrelevant). The diagonal is undefined and stored as NaN.
struct CRMatrix {
    int q = 0;
    std::vector<double> values;  // row-major q*q, diagonal NaN

    static CRMatrix make(int q);

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * q + j]; }

    /// Sets both (i, j) and (j, i); i must differ from j.
    void set_pair(int i, int j, double v);
};

struct IndexPair {
    int first = 0;
    int second = 0;
    auto operator<=>(const IndexPair&) const = default;
};

/// The first two labels of a chain. tied_candidates echoes the full set of
/// maximal pairs the selection considered. With only two labels there is no
/// third label to compare against, so the pair defaults to index order and
/// index_order_default is set.
struct HeadPair {
    int first = 0;
    int second = 0;
    std::vector<IndexPair> tied_candidates;
    bool index_order_default = false;
};

/// Builds the co-occurrence-rate matrix by counting, for every label pair,
/// the instances where the two labels take the same value. O(n * q^2).
CRMatrix build_cr_matrix(const Dataset& d);

/// All pairs (i, j), i < j, attaining the maximum off-diagonal value.
std::vector<IndexPair> head_candidates(const CRMatrix& m);

/// Resolves the candidate set to an ordered head pair. Ties between pairs are
/// scored by the sum of each endpoint's best rate against outside labels;
/// remaining ties fall to the lexicographically smallest pair. Within the
/// winning pair the label with the higher outside rate goes first.
HeadPair select_head_pair(const CRMatrix& m, const std::vector<IndexPair>& candidates);

/// {"q": q, "values": row-major list with null diagonal}
nlohmann::json cr_matrix_to_json(const CRMatrix& m);

}  // namespace mlcc

#endif  // MLCC_COOCCURRENCE_HPP_
