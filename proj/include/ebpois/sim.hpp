#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ebpois/divergence.hpp"
#include "ebpois/prior.hpp"
#include "ebpois/solver.hpp"

namespace ebpois {

namespace priors {
struct PointMass { double c; };
struct FiniteDiscrete { std::vector<double> atoms, weights; };
struct Uniform { double lo, hi; };
struct Gamma { double shape, scale; };
struct Exponential { double scale; };
/// theta itself drawn from a mixture of Poisson distributions (integer valued).
struct PoissonMixture { std::vector<double> means, weights; };
/// |N(m, sd^2)| with m uniform over the listed means.
struct AbsGaussianMixture { std::vector<double> means; double sd; };
}  // namespace priors

using PriorSpec = std::variant<priors::PointMass, priors::FiniteDiscrete, priors::Uniform, priors::Gamma,
                               priors::Exponential, priors::PoissonMixture, priors::AbsGaussianMixture>;

/// Throws std::domain_error on parameters outside their natural domain.
void validate(const PriorSpec& spec);

/// Text form used on the command line, e.g. "uniform:0,3", "gamma:4,2",
/// "exp:0.3", "point:2", "discrete:1@0.5,2@0.5", "poismix:1@0.2,2@0.3,8@0.5",
/// "absgauss:1:2,8,16,32" (sd, then means).
PriorSpec parse_prior_spec(const std::string& text);
std::string to_string(const PriorSpec& spec);

/// Data-generating prior with its exact or quadrature-based marginal and Bayes rule.
class TruePrior {
public:
    explicit TruePrior(PriorSpec spec);

    const PriorSpec& spec() const { return spec_; }
    /// Set for point/finite/Poisson-mixture priors.
    const std::optional<DiscretePrior>& discrete() const { return discrete_; }

    double log_marginal(std::int64_t y) const;
    double marginal(std::int64_t y) const;
    /// E[theta | Y = y] = (y+1) f_G(y+1) / f_G(y).
    double bayes(std::int64_t y) const;
    /// f_G(0..K) with K the first y where the remaining mass is below 1e-12.
    std::vector<double> marginal_table() const;

private:
    PriorSpec spec_;
    std::optional<DiscretePrior> discrete_;
};

std::vector<double> sample_thetas(const PriorSpec& spec, std::int64_t n, std::uint64_t seed);
/// One Poisson draw per theta; throws std::domain_error on negative theta.
std::vector<std::int64_t> sample_counts(std::span<const double> thetas, std::uint64_t seed);

enum class Method { Raw, Robbins, KL, HellingerSq, ChiSq };
std::string method_name(Method m);
Method parse_method(const std::string& name);  // raw | robbins | kl | h2 | chi2
/// Distance used by a minimum-distance method; throws for Raw and Robbins.
DistanceSpec method_distance(Method m);

struct ExperimentResult {
    Method method = Method::KL;
    double x = 0.0;            ///< sweep coordinate (sample size or dimension)
    double mean = 0.0;
    double sd = 0.0;           ///< sample standard deviation over replicates
    double half_width = 0.0;   ///< 1.96 sd / sqrt(reps)
    int reps = 0;              ///< successful replicates
    int failed = 0;
    std::vector<double> values;  ///< per replicate; NaN marks a failure
};

/// Summary statistics over the finite entries of values.
ExperimentResult summarize(Method method, double x, std::vector<double> values);

/// Training regret (1/n) sum_i (theta_G(Y_i) - theta_hat(Y_i))^2 per replicate;
/// replicate r uses seed + r.
std::vector<ExperimentResult> run_regret_experiment(const PriorSpec& spec, std::int64_t n, int reps,
                                                    const std::vector<Method>& methods, std::uint64_t seed,
                                                    const SolverConfig& cfg = {});

/// H^2(f_G, f_Ghat) per replicate for minimum-distance methods, one result
/// per (n, method).
std::vector<ExperimentResult> run_hellinger_experiment(const PriorSpec& spec, const std::vector<std::int64_t>& ns,
                                                       int reps, const std::vector<Method>& methods,
                                                       std::uint64_t seed, const SolverConfig& cfg = {});

struct RegressionOptions {
    std::vector<double> component_means{2, 8, 16, 32};
    double component_sd = 1.0;
    double beta_bound = 5.0;
    bool zero_beta = false;
};

/// OLS of y = theta beta on raw or EB-filtered Poisson covariates; in-sample
/// RMSE of y_hat per replicate. Method::Raw is the unfiltered baseline.
std::vector<ExperimentResult> run_regression_experiment(int d, std::int64_t n, int reps,
                                                        const std::vector<Method>& methods, std::uint64_t seed,
                                                        const SolverConfig& cfg = {},
                                                        const RegressionOptions& opts = {});

/// Column filter used by the regression experiment: replaces each count by
/// the posterior mean under the prior fitted to the column.
std::vector<double> eb_filter(std::span<const std::int64_t> column, Method method, const SolverConfig& cfg);

/// OLS fit with intercept via normal equations; returns in-sample RMSE. Sets
/// ridge_used when normal equations needed a 1e-8 * trace jitter.
double ols_rmse(const std::vector<std::vector<double>>& columns, std::span<const double> y, bool& ridge_used);

}  // namespace ebpois
