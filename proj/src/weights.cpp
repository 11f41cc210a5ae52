#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ebpois/solver.hpp"
#include "weight_problem.hpp"

namespace ebpois {

namespace {

using detail::WeightProblem;
using Eigen::Index;
using Eigen::VectorXd;

constexpr double kArmijo = 1e-4;

struct Optimality {
    double fw_gap;  // lambda - min_j grad_j over all coordinates
    double spread;  // max - min of grad over the support
    double scale;
};

Optimality optimality(const WeightProblem& prob, const VectorXd& mu, const VectorXd& f, VectorXd& grad) {
    const VectorXd g = prob.ell_grad(f);
    grad.noalias() = prob.lik.transpose() * g;
    const double lambda = mu.dot(grad);
    double lo = grad.minCoeff();
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    for (Index j = 0; j < mu.size(); ++j)
        if (mu(j) > 0.0) {
            smin = std::min(smin, grad(j));
            smax = std::max(smax, grad(j));
        }
    return {lambda - lo, smax - smin, WeightProblem::scale(g, f)};
}

// Exponentiated gradient: mu_j <- mu_j exp(-eta grad_j) / Z with Armijo backtracking.
int exponentiated_gradient(const WeightProblem& prob, VectorXd& mu, const WeightOptConfig& cfg,
                           int budget, bool& converged) {
    double eta = cfg.initial_step;
    VectorXd grad(mu.size()), trial(mu.size());
    VectorXd f = prob.density(mu);
    double obj = prob.value(f);
    int it = 0;
    converged = false;
    for (; it < budget; ++it) {
        const auto opt = optimality(prob, mu, f, grad);
        if (opt.spread <= cfg.grad_tol * opt.scale && opt.fw_gap <= cfg.grad_tol * opt.scale) {
            converged = true;
            break;
        }
        if (opt.spread <= cfg.grad_tol * opt.scale) break;  // only zero coordinates could help
        const double shift = grad.minCoeff();
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (Index j = 0; j < mu.size(); ++j)
                trial(j) = mu(j) > 0.0 ? mu(j) * std::exp(-eta * (grad(j) - shift)) : 0.0;
            trial /= trial.sum();
            const VectorXd ft = prob.density(trial);
            const double to = prob.value(ft);
            if (std::isfinite(to) && to <= obj + kArmijo * grad.dot(trial - mu)) {
                mu = trial;
                f = ft;
                obj = to;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;
        eta = std::min(eta * 2.0, 1e12);
    }
    return it;
}

// Active-set Newton on the simplex. Coordinates leave the support when a step
// hits zero and re-enter when their gradient falls below the multiplier.
int newton_polish(const WeightProblem& prob, VectorXd& mu, const WeightOptConfig& cfg, bool& converged) {
    const Index k = mu.size();
    VectorXd grad(k);
    VectorXd f = prob.density(mu);
    double obj = prob.value(f);
    converged = false;
    int it = 0;
    for (; it < cfg.newton_max_iters; ++it) {
        const auto opt = optimality(prob, mu, f, grad);
        const double tol = cfg.grad_tol * opt.scale;
        if (opt.fw_gap <= tol && opt.spread <= tol) {
            converged = true;
            break;
        }
        const double lambda = mu.dot(grad);
        std::vector<Index> free;
        for (Index j = 0; j < k; ++j)
            if (mu(j) > 0.0) free.push_back(j);
        // Re-admit the most promising zero coordinate.
        Index entering = -1;
        double best = lambda - tol;
        for (Index j = 0; j < k; ++j)
            if (mu(j) == 0.0 && grad(j) < best) {
                best = grad(j);
                entering = j;
            }
        if (entering >= 0) {
            free.push_back(entering);
            std::sort(free.begin(), free.end());
        }

        const VectorXd curv = prob.ell_curv(f);
        VectorXd d;
        for (int attempt = 0; attempt < 2; ++attempt) {
            const auto nf = static_cast<Index>(free.size());
            Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + 1, nf + 1);
            Eigen::MatrixXd lf(prob.lik.rows(), nf);
            for (Index a = 0; a < nf; ++a) lf.col(a) = prob.lik.col(free[static_cast<std::size_t>(a)]);
            Eigen::MatrixXd h = lf.transpose() * curv.asDiagonal() * lf;
            const double ridge = 1e-12 * std::max(h.trace() / static_cast<double>(nf), 1e-300);
            h.diagonal().array() += ridge;
            kkt.topLeftCorner(nf, nf) = h;
            kkt.block(0, nf, nf, 1).setOnes();
            kkt.block(nf, 0, 1, nf).setOnes();
            VectorXd rhs = VectorXd::Zero(nf + 1);
            for (Index a = 0; a < nf; ++a) rhs(a) = -grad(free[static_cast<std::size_t>(a)]);
            const VectorXd sol = kkt.fullPivLu().solve(rhs);
            d = VectorXd::Zero(k);
            for (Index a = 0; a < nf; ++a) d(free[static_cast<std::size_t>(a)]) = sol(a);
            if (entering >= 0 && d(entering) < 0.0) {
                free.erase(std::find(free.begin(), free.end(), entering));
                entering = -1;
                continue;
            }
            break;
        }
        if (!d.allFinite()) break;
        const double slope = grad.dot(d);
        if (!(slope < 0.0)) break;

        double alpha_max = 1.0;
        Index blocking = -1;
        for (Index j = 0; j < k; ++j)
            if (d(j) < 0.0 && mu(j) / -d(j) < alpha_max) {
                alpha_max = mu(j) / -d(j);
                blocking = j;
            }
        double alpha = alpha_max;
        bool accepted = false;
        VectorXd trial(k);
        for (int bt = 0; bt < 50; ++bt) {
            trial = (mu + alpha * d).cwiseMax(0.0);
            if (alpha == alpha_max && blocking >= 0) trial(blocking) = 0.0;
            trial /= trial.sum();
            const VectorXd ft = prob.density(trial);
            const double to = prob.value(ft);
            if (std::isfinite(to) && to <= obj + kArmijo * alpha * slope) {
                mu = trial;
                f = ft;
                obj = to;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    if (!converged) {
        const auto opt = optimality(prob, mu, f, grad);
        converged = opt.fw_gap <= cfg.grad_tol * opt.scale && opt.spread <= cfg.grad_tol * opt.scale;
    }
    return it;
}

}  // namespace

WeightFit optimize_weights(const DistanceSpec& spec, const EmpiricalPMF& emp,
                           std::span<const double> atoms, std::span<const double> init_weights,
                           const WeightOptConfig& cfg) {
    if (atoms.empty() || atoms.size() != init_weights.size())
        throw std::invalid_argument("optimize_weights: atoms and weights must be nonempty and equal length");
    if (emp.empty()) throw std::domain_error("optimize_weights: empty sample");
    const WeightProblem prob(spec, emp, atoms);
    VectorXd mu = detail::to_eigen(init_weights).cwiseMax(0.0);
    if (!(mu.sum() > 0.0)) throw std::invalid_argument("optimize_weights: initial weights must have positive mass");
    mu /= mu.sum();
    const VectorXd start = mu;
    const double start_obj = prob.value(prob.density(mu));

    WeightFit out;
    if (mu.size() == 1) {
        out.weights = {1.0};
        out.objective = prob.value(prob.density(mu));
        out.converged = true;
        return out;
    }
    // Exponentiated gradient, then the active-set Newton polish, which
    // re-admits any coordinate the full gradient asks for. Large atom sets get
    // the full gradient budget first and are then cut to their heaviest
    // coordinates, since the optimum has at most as many atoms as there are
    // distinct observations.
    const auto keep = static_cast<Index>(std::min<std::size_t>(cfg.newton_max_atoms, 2 * prob.ys.size() + 2));
    const bool large = (mu.array() > 0.0).count() > keep;
    bool converged = false;
    out.iterations = exponentiated_gradient(prob, mu, cfg, large ? cfg.max_iters : std::min(cfg.max_iters, 25),
                                            converged);
    if (!converged) {
        const VectorXd before = mu;
        const double before_obj = prob.value(prob.density(mu));
        if (large) {
            std::vector<Index> order(static_cast<std::size_t>(mu.size()));
            std::iota(order.begin(), order.end(), Index{0});
            std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return mu(a) > mu(b); });
            for (std::size_t r = static_cast<std::size_t>(keep); r < order.size(); ++r) mu(order[r]) = 0.0;
        }
        for (Index j = 0; j < mu.size(); ++j)
            if (mu(j) < 1e-14) mu(j) = 0.0;
        mu /= mu.sum();
        out.iterations += newton_polish(prob, mu, cfg, converged);
        if (prob.value(prob.density(mu)) > before_obj) {
            mu = before;
            converged = false;
        }
    }
    if (!converged && cfg.max_iters > out.iterations) {
        out.iterations += exponentiated_gradient(prob, mu, cfg, cfg.max_iters - out.iterations, converged);
    }
    out.objective = prob.value(prob.density(mu));
    if (out.objective > start_obj) {
        mu = start;
        out.objective = start_obj;
    }
    out.weights = detail::to_std(mu);
    out.converged = converged;
    return out;
}

}  // namespace ebpois
