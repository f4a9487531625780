#ifndef MLCC_SYNTHETIC_HPP_
#define MLCC_SYNTHETIC_HPP_

#include <cstdint>

#include "mlcc/dataset.hpp"

namespace mlcc {

/// Parameters for the planted-dependency generator used by tests and
/// benchmarks. Features are independent uniforms on [0,1); label 0 is a
/// threshold on feature 0; each later label copies its predecessor with an
/// XOR'd Bernoulli flip. The per-hop flip rates ramp linearly along the
/// chain (mean = noise, from noise/3 up to 5*noise/3), so the strongest
/// co-occurrence sits next to the feature-anchored end of the chain and
/// rate-guided orders can find it.
struct SyntheticSpec {
    std::size_t n_instances = 600;
    int n_labels = 8;
    int n_features = 8;
    double noise = 0.1;
};

/// Flip probability of hop `hop` (1-based, hop = label index).
double chained_hop_rate(const SyntheticSpec& spec, int hop);

Dataset make_chained_dataset(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace mlcc

#endif  // MLCC_SYNTHETIC_HPP_
