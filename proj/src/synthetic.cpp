#include "mlcc/synthetic.hpp"

#include "mlcc/errors.hpp"
#include "mlcc/rng.hpp"

namespace mlcc {

double chained_hop_rate(const SyntheticSpec& spec, int hop) {
    if (spec.n_labels < 3) return spec.noise;
    double position = static_cast<double>(hop - 1) / static_cast<double>(spec.n_labels - 2);
    return spec.noise * (1.0 / 3.0 + 4.0 / 3.0 * position);
}

Dataset make_chained_dataset(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.n_instances == 0 || spec.n_labels < 2 || spec.n_features < 1 || spec.noise < 0.0 ||
        spec.noise > 0.6)
        throw ConfigError("invalid synthetic dataset parameters");

    const std::size_t n = spec.n_instances;
    const std::size_t q = static_cast<std::size_t>(spec.n_labels);
    const std::size_t k = static_cast<std::size_t>(spec.n_features);

    Dataset d;
    d.name = "synthetic-chain";
    d.features = Matrix(n, k);
    d.labels = LabelMatrix(n, q);
    for (std::size_t j = 0; j < k; ++j) d.feature_names.push_back("x" + std::to_string(j));
    for (std::size_t l = 0; l < q; ++l) d.label_names.push_back("y" + std::to_string(l));

    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = d.features.row(i);
        for (std::size_t j = 0; j < k; ++j) row[j] = rng.next_double();
        d.labels.at(i, 0) = row[0] > 0.5 ? 1 : 0;
        for (std::size_t l = 1; l < q; ++l) {
            double rate = chained_hop_rate(spec, static_cast<int>(l));
            std::uint8_t flip = rng.next_double() < rate ? 1 : 0;
            d.labels.at(i, l) = d.labels.at(i, l - 1) ^ flip;
        }
    }
    return d;
}

}  // namespace mlcc
