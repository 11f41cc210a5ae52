#include <cmath>
#include <stdexcept>

#include "ebpois/kernels.hpp"
#include "ebpois/poisson.hpp"
#include "ebpois/solver.hpp"
#include "weight_problem.hpp"

namespace ebpois {

namespace {

using Eigen::VectorXd;

struct BayesRisk {
    VectorXd risk;  // R(theta_j) of the current Bayes rule
    double mmse;
};

// For a grid prior mu: R(theta_j) = sum_y f_{theta_j}(y) (theta_j - a_y)^2 with
// a_y = (y+1) F(y+1) / F(y); mmse = sum_j mu_j R(theta_j). R is also the
// gradient of mmse with respect to mu.
BayesRisk bayes_risk(const detail::RowMatrix& lik, const std::vector<double>& grid, const VectorXd& mu) {
    const VectorXd marg = lik * mu;
    const Eigen::Index rows = lik.rows() - 1;  // last row only feeds a_{rows-1}
    VectorXd a(rows);
    for (Eigen::Index y = 0; y < rows; ++y)
        a(y) = marg(y) > 0.0 ? static_cast<double>(y + 1) * marg(y + 1) / marg(y) : 0.0;
    BayesRisk br{VectorXd::Zero(mu.size()), 0.0};
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
        const double theta = grid[static_cast<std::size_t>(j)];
        double r = 0.0;
        for (Eigen::Index y = 0; y < rows; ++y) r += lik(y, j) * (theta - a(y)) * (theta - a(y));
        br.risk(j) = r;
    }
    br.mmse = mu.dot(br.risk);
    return br;
}

}  // namespace

WorstCaseResult worst_case_prior(double h, int grid_size, const AscentConfig& ascent) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::domain_error("worst_case_prior: h must be positive");
    if (grid_size < 2) throw std::domain_error("worst_case_prior: grid_size must be at least 2");
    if (ascent.iters < 0 || !(ascent.step > 0.0)) throw std::domain_error("worst_case_prior: bad ascent settings");

    const auto grid = uniform_grid(0.0, h, grid_size);
    const auto last = truncation_point(DiscretePrior::point_mass(h)) + 1;
    std::vector<std::int64_t> ys(static_cast<std::size_t>(last + 1));
    for (std::int64_t y = 0; y <= last; ++y) ys[static_cast<std::size_t>(y)] = y;
    detail::RowMatrix lik(static_cast<Eigen::Index>(ys.size()), static_cast<Eigen::Index>(grid.size()));
    kernels::likelihood_matrix(grid, ys, std::span<double>(lik.data(), static_cast<std::size_t>(lik.size())));

    VectorXd mu = VectorXd::Constant(grid_size, 1.0 / grid_size);
    BayesRisk cur = bayes_risk(lik, grid, mu);
    WorstCaseResult out;
    out.mmse_trace.push_back(cur.mmse);
    VectorXd trial(mu.size());
    for (int t = 1; t <= ascent.iters; ++t) {
        const double spread = cur.risk.maxCoeff() - cur.risk.minCoeff();
        if (!(spread > 0.0)) break;
        double eta = ascent.step / std::sqrt(static_cast<double>(t));
        bool accepted = false;
        for (int bt = 0; bt < 30 && !accepted; ++bt, eta *= 0.5) {
            const double top = cur.risk.maxCoeff();
            for (Eigen::Index j = 0; j < mu.size(); ++j)
                trial(j) = mu(j) * std::exp(eta * (cur.risk(j) - top) / spread);
            trial /= trial.sum();
            BayesRisk next = bayes_risk(lik, grid, trial);
            if (std::isfinite(next.mmse) && next.mmse >= cur.mmse) {
                mu = trial;
                cur = std::move(next);
                accepted = true;
            }
        }
        if (!accepted) break;
        out.mmse_trace.push_back(cur.mmse);
    }
    out.prior = DiscretePrior::from_unnormalized(grid, detail::to_std(mu));
    return out;
}

}  // namespace ebpois
