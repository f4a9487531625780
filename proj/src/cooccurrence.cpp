#include "mlcc/cooccurrence.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mlcc/errors.hpp"

namespace mlcc {

CRMatrix CRMatrix::make(int q) {
    CRMatrix m;
    m.q = q;
    m.values.assign(static_cast<std::size_t>(q) * q, std::numeric_limits<double>::quiet_NaN());
    return m;
}

void CRMatrix::set_pair(int i, int j, double v) {
    if (i == j) throw std::invalid_argument("CRMatrix diagonal is undefined");
    values[static_cast<std::size_t>(i) * q + j] = v;
    values[static_cast<std::size_t>(j) * q + i] = v;
}

CRMatrix build_cr_matrix(const Dataset& d) {
    const std::size_t n = d.n_instances();
    const int q = static_cast<int>(d.n_labels());
    CRMatrix m = CRMatrix::make(q);
    const std::uint8_t* y = d.labels.values.data();
    for (int i = 0; i < q; ++i) {
        for (int j = i + 1; j < q; ++j) {
            // both-relevant plus both-irrelevant == value equality on {0,1}
            std::size_t agreements = 0;
            for (std::size_t r = 0; r < n; ++r)
                agreements += (y[r * q + i] == y[r * q + j]);
            m.set_pair(i, j, static_cast<double>(agreements) / static_cast<double>(n));
        }
    }
    return m;
}

std::vector<IndexPair> head_candidates(const CRMatrix& m) {
    double best = -1.0;
    std::vector<IndexPair> out;
    for (int i = 0; i < m.q; ++i) {
        for (int j = i + 1; j < m.q; ++j) {
            double v = m.at(i, j);
            if (v > best) {
                best = v;
                out.clear();
            }
            if (v == best) out.push_back({i, j});
        }
    }
    return out;
}

namespace {

// Best rate of label a against any label outside the pair.
double best_outside_rate(const CRMatrix& m, int a, const IndexPair& pair) {
    double best = -1.0;
    for (int r = 0; r < m.q; ++r) {
        if (r == pair.first || r == pair.second) continue;
        best = std::max(best, m.at(a, r));
    }
    return best;
}

}  // namespace

HeadPair select_head_pair(const CRMatrix& m, const std::vector<IndexPair>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("head candidate set is empty");

    HeadPair head;
    head.tied_candidates = candidates;

    if (m.q == 2) {
        // no third label exists to compare against
        head.first = candidates.front().first;
        head.second = candidates.front().second;
        head.index_order_default = true;
        return head;
    }

    IndexPair winner = candidates.front();
    if (candidates.size() > 1) {
        double best_score = -1.0;
        for (const IndexPair& p : candidates) {
            double score =
                best_outside_rate(m, p.first, p) + best_outside_rate(m, p.second, p);
            if (score > best_score) {  // ties keep the lexicographically smaller pair
                best_score = score;
                winner = p;
            }
        }
    }

    double first_rate = best_outside_rate(m, winner.first, winner);
    double second_rate = best_outside_rate(m, winner.second, winner);
    if (first_rate >= second_rate) {
        head.first = winner.first;
        head.second = winner.second;
    } else {
        head.first = winner.second;
        head.second = winner.first;
    }
    return head;
}

nlohmann::json cr_matrix_to_json(const CRMatrix& m) {
    nlohmann::json values = nlohmann::json::array();
    for (int i = 0; i < m.q; ++i)
        for (int j = 0; j < m.q; ++j)
            values.push_back(i == j ? nlohmann::json(nullptr) : nlohmann::json(m.at(i, j)));
    return nlohmann::json{{"q", m.q}, {"values", std::move(values)}};
}

}  // namespace mlcc
