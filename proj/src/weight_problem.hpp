#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "ebpois/divergence.hpp"
#include "ebpois/kernels.hpp"
#include "ebpois/prior.hpp"

namespace ebpois::detail {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Likelihood matrix of a fixed atom set against the empirical support, with
/// the objective pieces the optimizers need.
struct WeightProblem {
    DistanceSpec spec;
    std::span<const std::int64_t> ys;
    Eigen::VectorXd p;
    RowMatrix lik;  // rows: distinct y, cols: atoms

    WeightProblem(const DistanceSpec& s, const EmpiricalPMF& emp, std::span<const double> atoms)
        : spec(s), ys(emp.values()), p(static_cast<Eigen::Index>(emp.support_size())),
          lik(static_cast<Eigen::Index>(emp.support_size()), static_cast<Eigen::Index>(atoms.size())) {
        for (std::size_t i = 0; i < emp.support_size(); ++i) p(static_cast<Eigen::Index>(i)) = emp.probability(i);
        kernels::likelihood_matrix(atoms, ys, std::span<double>(lik.data(), static_cast<std::size_t>(lik.size())));
    }

    Eigen::Index atoms() const { return lik.cols(); }

    Eigen::VectorXd density(const Eigen::VectorXd& mu) const {
        return (lik * mu).cwiseMax(kDensityFloor);
    }

    /// Full distance value from a density vector (t + sum ell).
    double value(const Eigen::VectorXd& f) const {
        double s = spec.t_constant();
        for (Eigen::Index i = 0; i < p.size(); ++i) s += spec.ell(p(i), f(i));
        return s;
    }

    Eigen::VectorXd ell_grad(const Eigen::VectorXd& f) const {
        Eigen::VectorXd g(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) g(i) = spec.ell_db(p(i), f(i));
        return g;
    }

    Eigen::VectorXd ell_curv(const Eigen::VectorXd& f) const {
        Eigen::VectorXd h(p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) h(i) = spec.ell_dbb(p(i), f(i));
        return h;
    }

    /// sum_i |g_i| f_i: the natural magnitude of D.
    static double scale(const Eigen::VectorXd& g, const Eigen::VectorXd& f) {
        return std::max(g.cwiseAbs().dot(f), 1e-300);
    }
};

inline Eigen::VectorXd to_eigen(std::span<const double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

inline std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace ebpois::detail
