#include "ebpois/poisson.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

namespace ebpois {

namespace {

constexpr double kTruncationTail = 1e-12;

void check_count(std::int64_t y) {
    if (y < 0) throw std::domain_error("Poisson count must be nonnegative");
}

}  // namespace

double poisson_log_pmf(double theta, std::int64_t y) {
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::domain_error("Poisson mean must be finite and nonnegative");
    check_count(y);
    if (theta == 0.0) return y == 0 ? 0.0 : kNegInf;
    const double yd = static_cast<double>(y);
    return yd * std::log(theta) - theta - std::lgamma(yd + 1.0);
}

double log_mixture_pmf(const DiscretePrior& prior, std::int64_t y) {
    check_count(y);
    const auto& atoms = prior.atoms();
    const auto& weights = prior.weights();
    double peak = kNegInf;
    std::vector<double> terms(atoms.size());
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        terms[j] = std::log(weights[j]) + poisson_log_pmf(atoms[j], y);
        peak = std::max(peak, terms[j]);
    }
    if (peak == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - peak);
    return peak + std::log(s);
}

double mixture_pmf(const DiscretePrior& prior, std::int64_t y) {
    return std::exp(log_mixture_pmf(prior, y));
}

std::vector<double> mixture_pmf_table(const DiscretePrior& prior, std::int64_t last) {
    std::vector<double> table(static_cast<std::size_t>(last + 1));
    for (std::int64_t y = 0; y <= last; ++y) table[static_cast<std::size_t>(y)] = mixture_pmf(prior, y);
    return table;
}

double bayes_estimate(const DiscretePrior& prior, std::int64_t y) {
    check_count(y);
    const auto& atoms = prior.atoms();
    const auto& weights = prior.weights();
    // Posterior weights are proportional to mu_j f_{theta_j}(y).
    std::vector<double> logw(atoms.size());
    double peak = kNegInf;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        logw[j] = std::log(weights[j]) + poisson_log_pmf(atoms[j], y);
        peak = std::max(peak, logw[j]);
    }
    if (peak == kNegInf) throw UndefinedPosterior("posterior undefined: f_G(y) = 0");
    // Written as max atom minus a posterior gap of positive terms: in the upper
    // tail the gap shrinks smoothly and rounding of top - gap stays monotone in y.
    const double top = prior.max_atom();
    double gap = 0.0, den = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const double w = std::exp(logw[j] - peak);
        gap += w * (top - atoms[j]);
        den += w;
    }
    return std::clamp(top - gap / den, prior.min_atom(), top);
}

double robbins_estimate(const EmpiricalPMF& emp, std::int64_t y) {
    check_count(y);
    const auto next = emp.count_of(y + 1);
    if (next == 0) return 0.0;
    const auto here = std::max<std::int64_t>(emp.count_of(y), 1);
    return static_cast<double>(y + 1) * static_cast<double>(next) / static_cast<double>(here);
}

double tail_mass(const DiscretePrior& prior, std::int64_t k) {
    if (k <= 0) return 1.0;
    double s = 0.0;
    const auto& atoms = prior.atoms();
    const auto& weights = prior.weights();
    // P[Poi(theta) >= k] = P(k, theta), the regularized lower incomplete gamma.
    for (std::size_t j = 0; j < atoms.size(); ++j)
        if (atoms[j] > 0.0) s += weights[j] * boost::math::gamma_p(static_cast<double>(k), atoms[j]);
    return std::min(s, 1.0);
}

std::int64_t truncation_point(const DiscretePrior& prior) {
    const auto cap = std::max<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(10.0 * prior.max_atom())), 200);
    if (tail_mass(prior, cap) > kTruncationTail) return cap;
    std::int64_t lo = 1, hi = cap;  // tail(hi) <= tol
    while (lo < hi) {
        const auto mid = lo + (hi - lo) / 2;
        if (tail_mass(prior, mid) <= kTruncationTail) hi = mid;
        else lo = mid + 1;
    }
    return hi;
}

}  // namespace ebpois
