#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ebpois/prior.hpp"

namespace ebpois {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Thrown when the posterior given y is undefined because f_G(y) = 0.
struct UndefinedPosterior : std::domain_error {
    using std::domain_error::domain_error;
};

/// log f_theta(y) = y log(theta) - theta - log(y!). Degenerate at theta = 0.
double poisson_log_pmf(double theta, std::int64_t y);

double log_mixture_pmf(const DiscretePrior& prior, std::int64_t y);
double mixture_pmf(const DiscretePrior& prior, std::int64_t y);
/// f_G(0), ..., f_G(last).
std::vector<double> mixture_pmf_table(const DiscretePrior& prior, std::int64_t last);

/// Posterior mean E[theta | Y = y] = (y+1) f_G(y+1) / f_G(y).
double bayes_estimate(const DiscretePrior& prior, std::int64_t y);

/// Robbins rule (y+1) N(y+1) / N(y); unseen y uses max(N(y), 1) as denominator.
double robbins_estimate(const EmpiricalPMF& emp, std::int64_t y);

/// P[Y >= k] under f_G. k = 0 gives 1.
double tail_mass(const DiscretePrior& prior, std::int64_t k);

/// Smallest K with tail_mass(prior, K) <= 1e-12, capped at
/// max(10 * max atom, 200). Infinite sums over y run on [0, K).
std::int64_t truncation_point(const DiscretePrior& prior);

}  // namespace ebpois
