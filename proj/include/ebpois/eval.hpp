#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "ebpois/prior.hpp"

namespace ebpois {

struct PredictionMetrics {
    double rmse = 0.0;
    double mad = 0.0;
    std::int64_t n = 0;
};

struct RegretReport {
    double regret = 0.0;
    double training_regret = 0.0;
    double mmse_true = 0.0;
    double hellinger_sq = 0.0;
};

/// A posterior-mean rule y -> theta_hat(y).
using BayesRule = std::function<double(std::int64_t)>;

/// Bayes risk of the posterior mean, summed as sum_y f_G(y) Var(theta | y).
double mmse(const DiscretePrior& prior);
/// Same quantity as E[theta^2] - sum_y (y+1)^2 f_G(y+1)^2 / f_G(y).
double mmse_series(const DiscretePrior& prior);

/// sum_y (theta_hat_{G_hat}(y) - theta_hat_G(y))^2 f_G(y). Throws
/// UndefinedPosterior when the estimated rule is undefined where f_G(y) > 0.
double regret(const DiscretePrior& prior_hat, const DiscretePrior& prior_true);

/// (1/n) sum_i (theta_hat_G(Y_i) - theta_hat_{G_hat}(Y_i))^2.
double training_regret(const DiscretePrior& prior_hat, const DiscretePrior& prior_true,
                       std::span<const std::int64_t> sample);
double training_regret(const BayesRule& truth, const BayesRule& estimate, std::span<const std::int64_t> sample);

RegretReport regret_report(const DiscretePrior& prior_hat, const DiscretePrior& prior_true,
                           std::span<const std::int64_t> sample);

/// RMSE and MAD of predictions against truths. Throws std::domain_error on a
/// length mismatch or empty input.
PredictionMetrics prediction_metrics(std::span<const double> predictions, std::span<const double> truths);

}  // namespace ebpois
