#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebpois/divergence.hpp"
#include "ebpois/prior.hpp"

namespace ebpois {

struct WeightOptConfig {
    double initial_step = 1.0;   ///< exponentiated-gradient step before backtracking
    int max_iters = 500;         ///< exponentiated-gradient budget
    double grad_tol = 1e-8;      ///< relative to sum_i |ell'(p_i, f_i)| f_i
    int newton_max_atoms = 256;  ///< active-set Newton polish when support is this small
    int newton_max_iters = 200;
};

struct SolverConfig {
    double merge_tol = 0.01;    ///< eta_1
    double prune_tol = 0.001;   ///< eta_2
    int max_iters = 15;
    int init_grid_size = 1000;
    double objective_tol = 1e-8;  ///< epsilon: stop when the improvement is below this
    std::optional<double> support_max;  ///< constrain the prior to [0, h]
    WeightOptConfig weight_opt;
    double root_tol = 1e-9;
    /// Relative level at which D < 0 counts as a violation when deciding to stop
    /// or to keep a small atom during pruning.
    double certificate_tol = 1e-7;

    /// Throws std::invalid_argument on out-of-range settings.
    void validate() const;
};

struct Certificate {
    double min_D = 0.0;               ///< min of D over the audit grid
    double max_abs_D_at_atoms = 0.0;  ///< max |D(theta_j)| over atoms
    double scale = 1.0;               ///< sum_i |ell'(p_i, f(y_i))| f(y_i)

    bool passes(double tol) const {
        return min_D >= -tol * scale && max_abs_D_at_atoms <= tol * scale;
    }
};

struct FitResult {
    DiscretePrior prior = DiscretePrior::point_mass(0.0);
    double objective = 0.0;               ///< dist(p_emp || f_prior)
    std::vector<double> objective_trace;  ///< initial value, then one per iteration
    Certificate certificate;
    int iterations_used = 0;
    bool converged = false;
};

struct WeightFit {
    std::vector<double> weights;  ///< on the simplex; may contain exact zeros
    double objective = 0.0;       ///< dist(p_emp || f) for these weights
    bool converged = false;
    int iterations = 0;
};

/// Raised when the objective becomes non-finite; carries the trace so far.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const { return trace_; }

private:
    std::vector<double> trace_;
};

/// Minimize sum_i ell(p(y_i), f_{atoms, mu}(y_i)) over the simplex:
/// exponentiated gradient with Armijo backtracking, then, for small supports,
/// an active-set Newton polish.
WeightFit optimize_weights(const DistanceSpec& spec, const EmpiricalPMF& emp,
                           std::span<const double> atoms, std::span<const double> init_weights,
                           const WeightOptConfig& cfg = {});

struct AtomSet {
    std::vector<double> atoms;
    std::vector<double> weights;
};

/// Greedy left-to-right clustering of sorted atoms closer than tol; each
/// cluster becomes its weight-weighted mean carrying the summed weight.
/// Passes repeat until all output atoms are more than tol apart.
AtomSet merge_atoms(std::span<const double> atoms, std::span<const double> weights, double tol);

/// D(theta) = sum_i ell'(p_i, f(y_i)) (f_theta(y_i) - f(y_i)) on a grid and at the atoms.
Certificate first_order_certificate(const DistanceSpec& spec, const EmpiricalPMF& emp,
                                    const DiscretePrior& prior, std::span<const double> audit_grid);

/// Evenly spaced points on [lo, hi], endpoints included.
std::vector<double> uniform_grid(double lo, double hi, int points);

/// Support-update iteration: roots of the first-order polynomial, merge,
/// weight re-optimization and pruning, repeated until the objective stalls.
FitResult fit(const DistanceSpec& spec, const EmpiricalPMF& emp, const SolverConfig& cfg = {});

/// Exhaustive search over all num_atoms-subsets of grid with optimized weights.
/// Throws std::domain_error if the subset count exceeds max_subsets.
FitResult brute_force_fit(const DistanceSpec& spec, const EmpiricalPMF& emp, int num_atoms,
                          std::span<const double> grid, long long max_subsets = 2'000'000);

struct AscentConfig {
    double step = 0.1;  ///< step at iteration t is step / sqrt(t)
    int iters = 2000;
};

struct WorstCaseResult {
    DiscretePrior prior = DiscretePrior::point_mass(0.0);
    std::vector<double> mmse_trace;
};

/// Least favorable prior on an evenly spaced grid over [0, h]: multiplicative
/// ascent of mmse(G) on the grid weights.
WorstCaseResult worst_case_prior(double h, int grid_size, const AscentConfig& ascent = {});

}  // namespace ebpois
