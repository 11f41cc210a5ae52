#include "ebpois/prior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ebpois {

DiscretePrior::DiscretePrior(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty() || atoms_.size() != weights_.size())
        throw std::invalid_argument("DiscretePrior: atoms and weights must be nonempty and of equal length");
    double total = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
        if (!std::isfinite(atoms_[j]) || atoms_[j] < 0.0)
            throw std::invalid_argument("DiscretePrior: atoms must be finite and nonnegative");
        if (j > 0 && !(atoms_[j] > atoms_[j - 1]))
            throw std::invalid_argument("DiscretePrior: atoms must be strictly increasing");
        if (!(weights_[j] > 0.0) || !std::isfinite(weights_[j]))
            throw std::invalid_argument("DiscretePrior: weights must be positive");
        total += weights_[j];
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("DiscretePrior: weights must sum to one");
}

DiscretePrior DiscretePrior::point_mass(double atom) { return DiscretePrior({atom}, {1.0}); }

DiscretePrior DiscretePrior::from_unnormalized(std::span<const double> atoms,
                                               std::span<const double> weights) {
    if (atoms.size() != weights.size())
        throw std::invalid_argument("DiscretePrior: atoms and weights must be of equal length");
    std::map<double, double> merged;
    for (std::size_t j = 0; j < atoms.size(); ++j)
        if (weights[j] > 0.0) merged[atoms[j]] += weights[j];
    double total = 0.0;
    for (const auto& [a, w] : merged) total += w;
    if (merged.empty() || !(total > 0.0))
        throw std::invalid_argument("DiscretePrior: no positive weight");
    std::vector<double> a, w;
    a.reserve(merged.size());
    w.reserve(merged.size());
    for (const auto& [atom, weight] : merged) {
        a.push_back(atom);
        w.push_back(weight / total);
    }
    return DiscretePrior(std::move(a), std::move(w));
}

double DiscretePrior::mean() const {
    return std::inner_product(atoms_.begin(), atoms_.end(), weights_.begin(), 0.0);
}

double DiscretePrior::second_moment() const {
    double s = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) s += weights_[j] * atoms_[j] * atoms_[j];
    return s;
}

double DiscretePrior::variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t j = 0; j < atoms_.size(); ++j) s += weights_[j] * (atoms_[j] - m) * (atoms_[j] - m);
    return s;
}

EmpiricalPMF::EmpiricalPMF(std::span<const std::int64_t> sample) {
    std::map<std::int64_t, std::int64_t> table;
    for (auto y : sample) {
        if (y < 0) throw std::invalid_argument("EmpiricalPMF: counts must be nonnegative");
        ++table[y];
    }
    for (const auto& [y, c] : table) {
        values_.push_back(y);
        counts_.push_back(c);
        n_ += c;
    }
}

std::int64_t EmpiricalPMF::count_of(std::int64_t y) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), y);
    if (it == values_.end() || *it != y) return 0;
    return counts_[static_cast<std::size_t>(it - values_.begin())];
}

std::vector<double> EmpiricalPMF::probabilities() const {
    std::vector<double> p(values_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = probability(i);
    return p;
}

}  // namespace ebpois
