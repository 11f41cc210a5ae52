#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ebpois/prior.hpp"

namespace testing {

/// Random prior with k distinct atoms in [0, max_atom] and Dirichlet(1) weights.
inline ebpois::DiscretePrior random_prior(std::mt19937_64& rng, int k, double max_atom) {
    std::uniform_real_distribution<double> u(0.0, max_atom);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> atoms, weights;
    while (static_cast<int>(atoms.size()) < k) {
        const double a = u(rng);
        if (std::none_of(atoms.begin(), atoms.end(), [&](double b) { return std::abs(a - b) < 1e-6; })) {
            atoms.push_back(a);
            weights.push_back(e(rng) + 1e-3);
        }
    }
    return ebpois::DiscretePrior::from_unnormalized(atoms, weights);
}

}  // namespace testing
