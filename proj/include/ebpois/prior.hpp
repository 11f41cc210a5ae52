#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ebpois {

/// Finitely supported mixing distribution: strictly increasing nonnegative
/// atoms with positive weights summing to one.
class DiscretePrior {
public:
    /// Validates; throws std::invalid_argument on any broken invariant.
    DiscretePrior(std::vector<double> atoms, std::vector<double> weights);

    static DiscretePrior point_mass(double atom);
    /// Sorts by atom, sums weights of coincident atoms, drops non-positive
    /// weights and normalizes.
    static DiscretePrior from_unnormalized(std::span<const double> atoms,
                                           std::span<const double> weights);

    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return atoms_.size(); }
    double min_atom() const { return atoms_.front(); }
    double max_atom() const { return atoms_.back(); }

    double mean() const;
    double second_moment() const;
    double variance() const;

    bool operator==(const DiscretePrior&) const = default;

private:
    std::vector<double> atoms_;
    std::vector<double> weights_;
};

/// Count table of a sample of nonnegative integers.
class EmpiricalPMF {
public:
    EmpiricalPMF() = default;
    /// Throws std::invalid_argument on a negative value.
    explicit EmpiricalPMF(std::span<const std::int64_t> sample);

    /// Distinct observed values, increasing.
    const std::vector<std::int64_t>& values() const { return values_; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    std::int64_t n() const { return n_; }
    std::size_t support_size() const { return values_.size(); }
    bool empty() const { return n_ == 0; }
    std::int64_t y_min() const { return values_.front(); }
    std::int64_t y_max() const { return values_.back(); }

    /// N(y); zero when y was not observed.
    std::int64_t count_of(std::int64_t y) const;
    /// p(y_i) for the i-th distinct value.
    double probability(std::size_t i) const {
        return static_cast<double>(counts_[i]) / static_cast<double>(n_);
    }
    std::vector<double> probabilities() const;

private:
    std::vector<std::int64_t> values_;
    std::vector<std::int64_t> counts_;
    std::int64_t n_ = 0;
};

}  // namespace ebpois
