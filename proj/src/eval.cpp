#include "ebpois/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "ebpois/divergence.hpp"
#include "ebpois/poisson.hpp"

namespace ebpois {

double mmse(const DiscretePrior& prior) {
    const auto last = truncation_point(prior);
    const auto& atoms = prior.atoms();
    const auto& weights = prior.weights();
    std::vector<double> logw(atoms.size());
    double total = 0.0;
    for (std::int64_t y = 0; y <= last; ++y) {
        double peak = kNegInf;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            logw[j] = std::log(weights[j]) + poisson_log_pmf(atoms[j], y);
            peak = std::max(peak, logw[j]);
        }
        if (peak == kNegInf) continue;
        double den = 0.0, m1 = 0.0;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            logw[j] = std::exp(logw[j] - peak);
            den += logw[j];
            m1 += logw[j] * atoms[j];
        }
        const double mean = m1 / den;
        double var = 0.0;
        for (std::size_t j = 0; j < atoms.size(); ++j) var += logw[j] * (atoms[j] - mean) * (atoms[j] - mean);
        total += std::exp(peak) * var;  // f_G(y) Var = exp(peak) * sum_j w_j (theta_j - mean)^2
    }
    return total;
}

double mmse_series(const DiscretePrior& prior) {
    const auto last = truncation_point(prior);
    const auto f = mixture_pmf_table(prior, last + 1);
    double s = 0.0;
    for (std::int64_t y = 0; y <= last; ++y) {
        const auto u = static_cast<std::size_t>(y);
        if (f[u] > 0.0) s += (y + 1.0) * (y + 1.0) * f[u + 1] * f[u + 1] / f[u];
    }
    return std::max(0.0, prior.second_moment() - s);
}

double regret(const DiscretePrior& prior_hat, const DiscretePrior& prior_true) {
    const auto last = truncation_point(prior_true);
    double s = 0.0;
    for (std::int64_t y = 0; y <= last; ++y) {
        const double f = mixture_pmf(prior_true, y);
        if (f == 0.0) continue;
        const double d = bayes_estimate(prior_hat, y) - bayes_estimate(prior_true, y);
        s += d * d * f;
    }
    return s;
}

double training_regret(const BayesRule& truth, const BayesRule& estimate, std::span<const std::int64_t> sample) {
    if (sample.empty()) throw std::domain_error("training_regret: empty sample");
    std::map<std::int64_t, double> cache;
    double s = 0.0;
    for (auto y : sample) {
        auto it = cache.find(y);
        if (it == cache.end()) {
            const double d = truth(y) - estimate(y);
            it = cache.emplace(y, d * d).first;
        }
        s += it->second;
    }
    return s / static_cast<double>(sample.size());
}

double training_regret(const DiscretePrior& prior_hat, const DiscretePrior& prior_true,
                       std::span<const std::int64_t> sample) {
    return training_regret([&](std::int64_t y) { return bayes_estimate(prior_true, y); },
                           [&](std::int64_t y) { return bayes_estimate(prior_hat, y); }, sample);
}

RegretReport regret_report(const DiscretePrior& prior_hat, const DiscretePrior& prior_true,
                           std::span<const std::int64_t> sample) {
    RegretReport r;
    r.regret = regret(prior_hat, prior_true);
    r.training_regret = sample.empty() ? 0.0 : training_regret(prior_hat, prior_true, sample);
    r.mmse_true = mmse(prior_true);
    r.hellinger_sq = hellinger_sq_mixtures(prior_hat, prior_true);
    return r;
}

PredictionMetrics prediction_metrics(std::span<const double> predictions, std::span<const double> truths) {
    if (predictions.size() != truths.size())
        throw std::domain_error("prediction_metrics: predictions and truths differ in length");
    if (predictions.empty()) throw std::domain_error("prediction_metrics: empty input");
    double sq = 0.0, ab = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double e = truths[i] - predictions[i];
        sq += e * e;
        ab += std::abs(e);
    }
    const double n = static_cast<double>(predictions.size());
    return {std::sqrt(sq / n), ab / n, static_cast<std::int64_t>(predictions.size())};
}

}  // namespace ebpois
