#ifndef MLCC_DATASET_HPP_
#define MLCC_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlcc/matrix.hpp"

namespace mlcc {

/// A multi-label dataset: n instances, k real features, q binary labels.
/// Immutable after construction; q >= 2 because chain ordering is meaningless
/// for fewer labels.
struct Dataset {
    std::string name;
    Matrix features;   // n x k
    LabelMatrix labels;  // n x q, every cell 0 or 1
    std::vector<std::string> label_names;
    std::vector<std::string> feature_names;

    std::size_t n_instances() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
    std::size_t n_labels() const { return labels.cols; }

    /// Throws DataError if any structural invariant is violated.
    void validate() const;
};

struct DatasetStats {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t q = 0;
    double lcard = 0.0;  // average number of relevant labels per instance
};

/// Assignment of every instance to one of n_folds cross-validation folds.
/// Fold sizes differ by at most one.
struct FoldPlan {
    int n_folds = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignments;  // instance index -> fold in [0, n_folds)

    std::vector<std::size_t> train_indices(int fold) const;
    std::vector<std::size_t> test_indices(int fold) const;
};

/// Loads a dense ARFF file. Label placement follows the MEKA convention:
/// positive count = first attributes, negative = last |count|. When
/// labels_spec is absent the @relation line must carry a `-C k` token.
/// Nominal label attributes must take values in {0,1}; feature attributes
/// must parse as finite reals. Missing values ('?') are rejected.
Dataset load_arff(const std::string& path, std::optional<int> labels_spec = std::nullopt);

/// Loads the toolkit CSV format: one header row, '.'-decimal real feature
/// columns followed by label_count trailing label columns of literal 0/1.
Dataset load_csv(const std::string& path, int label_count);

/// Writes a Dataset in the CSV format accepted by load_csv. Doubles are
/// printed with shortest round-trip notation, so reloading reproduces the
/// values bit-exactly.
void save_csv(const Dataset& d, const std::string& path);

DatasetStats label_stats(const Dataset& d);

/// Deterministic k-fold split: a seeded shuffle of [0, n) dealt round-robin
/// into folds. Identical inputs yield identical assignments.
FoldPlan split_kfold(const Dataset& d, int n_folds, std::uint64_t seed);

/// New Dataset holding the given rows, in the given order (repeats allowed,
/// so this also serves bootstrap resampling).
Dataset select_rows(const Dataset& d, std::span<const std::size_t> rows);

}  // namespace mlcc

#endif  // MLCC_DATASET_HPP_
