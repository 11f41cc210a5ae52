#include "ebpois/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebpois/kernels.hpp"
#include "ebpois/poisson.hpp"
#include "ebpois/roots.hpp"
#include "weight_problem.hpp"

namespace ebpois {

void SolverConfig::validate() const {
    if (!(merge_tol > 0.0)) throw std::invalid_argument("merge_tol must be positive");
    if (!(prune_tol > 0.0 && prune_tol < 1.0)) throw std::invalid_argument("prune_tol must lie in (0, 1)");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
    if (init_grid_size < 2) throw std::invalid_argument("init_grid_size must be at least 2");
    if (support_max && !(*support_max >= 0.0 && std::isfinite(*support_max)))
        throw std::invalid_argument("support_max must be finite and nonnegative");
    if (!(root_tol > 0.0)) throw std::invalid_argument("root_tol must be positive");
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("uniform_grid: need at least one point");
    if (points == 1 || lo == hi) return std::vector<double>(1, lo);
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int t = 0; t < points; ++t)
        grid[static_cast<std::size_t>(t)] = t + 1 == points ? hi : lo + (hi - lo) * t / (points - 1);
    return grid;
}

AtomSet merge_atoms(std::span<const double> atoms, std::span<const double> weights, double tol) {
    if (atoms.size() != weights.size()) throw std::invalid_argument("merge_atoms: size mismatch");
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return atoms[a] < atoms[b]; });
    AtomSet cur;
    for (auto i : order) {
        cur.atoms.push_back(atoms[i]);
        cur.weights.push_back(weights[i]);
    }
    for (;;) {
        AtomSet next;
        std::size_t i = 0;
        while (i < cur.atoms.size()) {
            const double anchor = cur.atoms[i];
            double w = 0.0, wx = 0.0, x = 0.0;
            std::size_t c = 0;
            for (; i < cur.atoms.size() && cur.atoms[i] - anchor < tol; ++i, ++c) {
                w += cur.weights[i];
                wx += cur.weights[i] * cur.atoms[i];
                x += cur.atoms[i];
            }
            next.atoms.push_back(w > 0.0 ? wx / w : x / static_cast<double>(c));
            next.weights.push_back(w);
        }
        const bool stable = next.atoms.size() == cur.atoms.size();
        cur = std::move(next);
        if (stable) break;
    }
    return cur;
}

namespace {

using detail::WeightProblem;

struct Direction {
    std::vector<double> g;  // ell'(p_i, f_i)
    std::vector<double> f;
    double lambda = 0.0;    // sum_i g_i f_i
    double scale = 1.0;
};

Direction direction_at(const DistanceSpec& spec, const EmpiricalPMF& emp, std::span<const double> atoms,
                       std::span<const double> weights) {
    const WeightProblem prob(spec, emp, atoms);
    const Eigen::VectorXd f = prob.density(detail::to_eigen(weights));
    const Eigen::VectorXd g = prob.ell_grad(f);
    Direction d;
    d.g = detail::to_std(g);
    d.f = detail::to_std(f);
    d.lambda = g.dot(f);
    d.scale = WeightProblem::scale(g, f);
    return d;
}

std::vector<double> d_values(const EmpiricalPMF& emp, const Direction& dir, std::span<const double> points) {
    std::vector<double> out(points.size());
    kernels::directional_derivative(points, emp.values(), dir.g, dir.lambda, out);
    return out;
}

struct Candidate {
    double theta;
    double d;
};

// Sign/log-magnitude coefficients of the first-order polynomial; owns the
// storage the kernel view points into.
struct Slope {
    std::vector<double> log_abs;
    std::vector<int> sign;
    kernels::SlopeTerms terms;
};

Slope slope_terms(const EmpiricalPMF& emp, const Direction& dir) {
    const auto& ys = emp.values();
    Slope s;
    s.log_abs.resize(ys.size());
    s.sign.resize(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        s.sign[i] = (dir.g[i] > 0.0) - (dir.g[i] < 0.0);
        s.log_abs[i] = s.sign[i] == 0 ? 0.0 : std::log(std::abs(dir.g[i])) - std::lgamma(static_cast<double>(ys[i]) + 1.0);
    }
    s.terms = {ys, s.log_abs, s.sign};
    return s;
}

// Local minima of D on [lo, hi]: interior roots of the first-order polynomial
// where it turns from negative to positive, plus endpoints where D slopes outward.
std::vector<Candidate> descent_candidates(const EmpiricalPMF& emp, const Direction& dir,
                                          const kernels::SlopeTerms& terms, double lo, double hi,
                                          const SolverConfig& cfg) {
    std::vector<double> thetas;
    if (lo == hi) {
        thetas.push_back(lo);
    } else {
        if (kernels::scaled_slope(terms, lo) > 0.0) thetas.push_back(lo);
        RootOptions ro;
        ro.grid_points = std::max(2, 10 * cfg.init_grid_size);
        ro.tol = cfg.root_tol;
        for (const auto& r : slope_roots(terms, lo, hi, ro))
            if (r.direction > 0) thetas.push_back(r.theta);
        if (kernels::scaled_slope(terms, hi) < 0.0) thetas.push_back(hi);
    }
    const auto dv = d_values(emp, dir, thetas);
    std::vector<Candidate> out;
    for (std::size_t c = 0; c < thetas.size(); ++c) out.push_back({thetas[c], dv[c]});
    return out;
}

// Each atom slides downhill along D toward the first local minimum in that
// direction, covering the fraction step of the way and keeping its weight.
// Minima that receive no atom and have D < 0 join with zero weight for the
// weight optimizer to admit.
AtomSet relocate(const AtomSet& cur, const std::vector<Candidate>& cands, const kernels::SlopeTerms& terms,
                 double step) {
    std::vector<double> atoms, weights;
    std::vector<char> used(cands.size(), 0);
    for (std::size_t j = 0; j < cur.atoms.size(); ++j) {
        const double th = cur.atoms[j];
        const double s = kernels::scaled_slope(terms, th);
        std::ptrdiff_t target = -1;
        if (s < 0.0) {
            const auto it = std::upper_bound(cands.begin(), cands.end(), th,
                                             [](double v, const Candidate& c) { return v < c.theta; });
            if (it != cands.end()) target = it - cands.begin();
        } else if (s > 0.0) {
            const auto it = std::lower_bound(cands.begin(), cands.end(), th,
                                             [](const Candidate& c, double v) { return c.theta < v; });
            if (it != cands.begin()) target = (it - cands.begin()) - 1;
        }
        if (target >= 0) {
            used[static_cast<std::size_t>(target)] = 1;
            atoms.push_back(th + step * (cands[static_cast<std::size_t>(target)].theta - th));
        } else {
            atoms.push_back(th);
        }
        weights.push_back(cur.weights[j]);
    }
    for (std::size_t c = 0; c < cands.size(); ++c)
        if (!used[c] && cands[c].d < 0.0) {
            atoms.push_back(cands[c].theta);
            weights.push_back(0.0);
        }
    return merge_atoms(atoms, weights, 1e-12);
}

AtomSet augment(const AtomSet& cur, const std::vector<Candidate>& cands) {
    AtomSet out = cur;
    for (const auto& c : cands)
        if (c.d < 0.0) {
            out.atoms.push_back(c.theta);
            out.weights.push_back(0.0);
        }
    return merge_atoms(out.atoms, out.weights, 1e-12);
}

struct State {
    AtomSet set;
    double objective = 0.0;
    bool weights_converged = true;
};

void drop_zero_weights(AtomSet& s) {
    AtomSet out;
    for (std::size_t j = 0; j < s.atoms.size(); ++j)
        if (s.weights[j] > 0.0) {
            out.atoms.push_back(s.atoms[j]);
            out.weights.push_back(s.weights[j]);
        }
    s = std::move(out);
}

void normalize(AtomSet& s) {
    const double total = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
    for (auto& w : s.weights) w /= total;
}

State optimize(const DistanceSpec& spec, const EmpiricalPMF& emp, AtomSet set, const SolverConfig& cfg) {
    const auto wf = optimize_weights(spec, emp, set.atoms, set.weights, cfg.weight_opt);
    set.weights = wf.weights;
    drop_zero_weights(set);
    return {std::move(set), wf.objective, wf.converged};
}

// Remove atoms lighter than prune_tol, renormalize and re-optimize. A removed
// atom whose position then shows D < 0 beyond certificate_tol is restored.
State prune(const DistanceSpec& spec, const EmpiricalPMF& emp, const State& st, const SolverConfig& cfg) {
    AtomSet kept, removed;
    for (std::size_t j = 0; j < st.set.atoms.size(); ++j) {
        auto& dst = st.set.weights[j] < cfg.prune_tol ? removed : kept;
        dst.atoms.push_back(st.set.atoms[j]);
        dst.weights.push_back(st.set.weights[j]);
    }
    if (removed.atoms.empty() || kept.atoms.empty()) return st;
    normalize(kept);
    State pruned = optimize(spec, emp, kept, cfg);

    const auto dir = direction_at(spec, emp, pruned.set.atoms, pruned.set.weights);
    const auto dv = d_values(emp, dir, removed.atoms);
    AtomSet restore = pruned.set;
    bool any = false;
    for (std::size_t j = 0; j < removed.atoms.size(); ++j)
        if (dv[j] < -cfg.certificate_tol * dir.scale) {
            restore.atoms.push_back(removed.atoms[j]);
            restore.weights.push_back(removed.weights[j]);
            any = true;
        }
    if (!any) return pruned;
    auto merged = merge_atoms(restore.atoms, restore.weights, cfg.merge_tol);
    normalize(merged);
    State back = optimize(spec, emp, merged, cfg);
    return back.objective <= pruned.objective ? back : pruned;
}

// Merge within merge_tol, then prune.
State tidy(const DistanceSpec& spec, const EmpiricalPMF& emp, const State& st, const SolverConfig& cfg) {
    auto merged = merge_atoms(st.set.atoms, st.set.weights, cfg.merge_tol);
    const State m = merged.atoms.size() == st.set.atoms.size() ? st : optimize(spec, emp, merged, cfg);
    return prune(spec, emp, m, cfg);
}

// d/dtheta and d2/dtheta2 of the Poisson pmf at (theta, y).
void pmf_derivatives(double theta, std::int64_t y, double& d1, double& d2) {
    if (theta <= 0.0) {
        d1 = y == 0 ? -1.0 : y == 1 ? 1.0 : 0.0;
        d2 = y == 0 ? 1.0 : y == 1 ? -2.0 : y == 2 ? 1.0 : 0.0;
        return;
    }
    const double phi = std::exp(poisson_log_pmf(theta, y));
    const double yd = static_cast<double>(y);
    d1 = phi * (yd / theta - 1.0);
    d2 = phi * ((yd - theta) * (yd - theta) - yd) / (theta * theta);
}

// Joint damped Newton on atom positions and weights with the support held
// fixed. Atoms stay inside [lo, hi]; an atom on a bound with its gradient
// pointing outward keeps its position.
State refine(const DistanceSpec& spec, const EmpiricalPMF& emp, const State& st, double lo, double hi,
             int max_steps) {
    using Eigen::Index;
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const auto& ys = emp.values();
    const auto m = static_cast<Index>(ys.size());
    const auto k = static_cast<Index>(st.set.atoms.size());
    if (k == 0 || k > 128) return st;
    VectorXd p(m);
    for (Index i = 0; i < m; ++i) p(i) = emp.probability(static_cast<std::size_t>(i));

    VectorXd theta = detail::to_eigen(st.set.atoms), mu = detail::to_eigen(st.set.weights);
    auto objective = [&](const VectorXd& th, const VectorXd& w) {
        double v = spec.t_constant();
        for (Index i = 0; i < m; ++i) {
            double f = 0.0;
            for (Index j = 0; j < k; ++j) f += w(j) * std::exp(poisson_log_pmf(th(j), ys[static_cast<std::size_t>(i)]));
            v += spec.ell(p(i), std::max(f, kDensityFloor));
        }
        return v;
    };
    double obj = objective(theta, mu);
    double damping = 0.0;
    bool stationary = false;
    State out = st;
    for (int step = 0; step < max_steps; ++step) {
        MatrixXd phi(m, k), d1(m, k), d2(m, k);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < k; ++j) {
                const auto y = ys[static_cast<std::size_t>(i)];
                phi(i, j) = std::exp(poisson_log_pmf(theta(j), y));
                pmf_derivatives(theta(j), y, d1(i, j), d2(i, j));
            }
        const VectorXd f = (phi * mu).cwiseMax(kDensityFloor);
        VectorXd g1(m), g2(m);
        for (Index i = 0; i < m; ++i) {
            g1(i) = spec.ell_db(p(i), f(i));
            g2(i) = spec.ell_dbb(p(i), f(i));
        }
        const VectorXd grad_mu = phi.transpose() * g1;
        const VectorXd dtheta = d1.transpose() * g1;
        VectorXd grad_theta = mu.cwiseProduct(dtheta);

        std::vector<Index> mov;
        for (Index j = 0; j < k; ++j) {
            const bool pinned = (theta(j) <= lo && grad_theta(j) > 0.0) || (theta(j) >= hi && grad_theta(j) < 0.0);
            if (!pinned) mov.push_back(j);
        }
        const auto q = static_cast<Index>(mov.size());
        const Index nv = k + q;
        MatrixXd jac(m, nv);
        jac.leftCols(k) = phi;
        for (Index a = 0; a < q; ++a) jac.col(k + a) = d1.col(mov[static_cast<std::size_t>(a)]) * mu(mov[static_cast<std::size_t>(a)]);
        MatrixXd hess = jac.transpose() * g2.asDiagonal() * jac;
        VectorXd grad(nv);
        grad.head(k) = grad_mu;
        for (Index a = 0; a < q; ++a) {
            const Index j = mov[static_cast<std::size_t>(a)];
            grad(k + a) = grad_theta(j);
            hess(k + a, k + a) += mu(j) * d2.col(j).dot(g1);
            hess(k + a, j) += dtheta(j);
            hess(j, k + a) += dtheta(j);
        }
        const double lambda = mu.dot(grad_mu);
        double stationarity = 0.0;
        for (Index j = 0; j < k; ++j) stationarity = std::max(stationarity, std::abs(grad_mu(j) - lambda));
        for (Index a = 0; a < q; ++a) stationarity = std::max(stationarity, std::abs(grad(k + a)));
        if (stationarity <= 1e-13 * WeightProblem::scale(g1, f)) {
            stationary = true;
            break;
        }

        bool accepted = false;
        for (int tries = 0; tries < 12 && !accepted; ++tries) {
            MatrixXd kkt = MatrixXd::Zero(nv + 1, nv + 1);
            kkt.topLeftCorner(nv, nv) = hess;
            for (Index v = 0; v < nv; ++v) kkt(v, v) += damping * std::max(std::abs(hess(v, v)), 1e-12);
            kkt.block(0, nv, k, 1).setOnes();
            kkt.block(nv, 0, 1, k).setOnes();
            VectorXd rhs = VectorXd::Zero(nv + 1);
            rhs.head(nv) = -grad;
            const VectorXd sol = kkt.fullPivLu().solve(rhs);
            const VectorXd dx = sol.head(nv);
            const double slope = grad.dot(dx);
            if (!dx.allFinite() || !(slope < 0.0)) {
                damping = std::max(1e-6, damping * 10.0);
                continue;
            }
            double alpha = 1.0;
            for (Index j = 0; j < k; ++j)
                if (dx(j) < 0.0) alpha = std::min(alpha, 0.95 * mu(j) / -dx(j));
            for (int bt = 0; bt < 30; ++bt, alpha *= 0.5) {
                VectorXd th = theta, w = mu + alpha * dx.head(k);
                for (Index a = 0; a < q; ++a) {
                    const Index j = mov[static_cast<std::size_t>(a)];
                    th(j) = std::clamp(theta(j) + alpha * dx(k + a), lo, hi);
                }
                w = w.cwiseMax(0.0);
                w /= w.sum();
                const double to = objective(th, w);
                if (std::isfinite(to) && to <= obj + 1e-4 * alpha * slope) {
                    theta = th;
                    mu = w;
                    obj = to;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) damping = std::max(1e-6, damping * 10.0);
        }
        if (!accepted) break;
        damping /= 3.0;
        if (damping < 1e-9) damping = 0.0;
    }
    if (!(obj < st.objective)) return st;
    // Positions may have drifted together.
    AtomSet set;
    set.atoms = detail::to_std(theta);
    set.weights = detail::to_std(mu);
    std::vector<std::size_t> order(set.atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return set.atoms[a] < set.atoms[b]; });
    AtomSet sorted;
    for (auto i : order) {
        sorted.atoms.push_back(set.atoms[i]);
        sorted.weights.push_back(set.weights[i]);
    }
    out.set = merge_atoms(sorted.atoms, sorted.weights, 1e-12);
    drop_zero_weights(out.set);
    out.weights_converged = st.weights_converged || stationary;
    out.objective = eval_distance(spec, emp, DiscretePrior::from_unnormalized(out.set.atoms, out.set.weights));
    return out.objective < st.objective ? out : st;
}

DiscretePrior to_prior(const AtomSet& s) { return DiscretePrior::from_unnormalized(s.atoms, s.weights); }

// Weighted means in merges can land an ulp outside the feasible interval.
DiscretePrior to_prior(AtomSet s, double lo, double hi) {
    for (double& a : s.atoms) a = std::clamp(a, lo, hi);
    return to_prior(s);
}

FitResult finish(const DistanceSpec& spec, const EmpiricalPMF& emp, const DiscretePrior& prior,
                 std::vector<double> trace, int iters, bool weights_ok, double audit_hi, const SolverConfig& cfg) {
    FitResult r;
    r.prior = prior;
    r.objective = eval_distance(spec, emp, prior);
    r.objective_trace = std::move(trace);
    if (r.objective_trace.empty()) r.objective_trace.push_back(r.objective);
    r.iterations_used = iters;
    const auto grid = uniform_grid(0.0, audit_hi, std::max(2, 10 * cfg.init_grid_size));
    r.certificate = first_order_certificate(spec, emp, prior, grid);
    r.converged = weights_ok && r.certificate.passes(10.0 * cfg.certificate_tol);
    return r;
}

}  // namespace

Certificate first_order_certificate(const DistanceSpec& spec, const EmpiricalPMF& emp, const DiscretePrior& prior,
                                    std::span<const double> audit_grid) {
    const auto dir = direction_at(spec, emp, prior.atoms(), prior.weights());
    Certificate c;
    c.scale = dir.scale;
    const auto dg = d_values(emp, dir, audit_grid);
    c.min_D = dg.empty() ? 0.0 : *std::min_element(dg.begin(), dg.end());
    const auto da = d_values(emp, dir, prior.atoms());
    for (double v : da) c.max_abs_D_at_atoms = std::max(c.max_abs_D_at_atoms, std::abs(v));
    c.min_D = std::min(c.min_D, *std::min_element(da.begin(), da.end()));
    return c;
}

FitResult fit(const DistanceSpec& spec, const EmpiricalPMF& emp, const SolverConfig& cfg) {
    cfg.validate();
    if (emp.empty()) throw std::domain_error("fit: empty sample");
    const double y_min = static_cast<double>(emp.y_min());
    const double y_max = static_cast<double>(emp.y_max());
    const bool constrained = cfg.support_max.has_value();
    const double top = constrained ? *cfg.support_max : y_max;
    const double lo = constrained ? 0.0 : y_min;
    const double hi = top;

    // The optimum lives on [y_min, y_max]; a single observed value forces a point mass.
    if (lo == hi || (!constrained && y_min == y_max)) {
        const auto prior = DiscretePrior::point_mass(lo);
        return finish(spec, emp, prior, {eval_distance(spec, emp, prior)}, 0, true, std::max(top, lo), cfg);
    }

    const auto grid = uniform_grid(0.0, top, cfg.init_grid_size);
    AtomSet init;
    init.atoms = grid;
    init.weights.assign(grid.size(), 1.0 / static_cast<double>(grid.size()));
    std::vector<double> trace{eval_distance(spec, emp, to_prior(init))};
    if (!std::isfinite(trace.back())) throw SolverFailure("non-finite objective at initialization", trace);
    // First pass: a discretized fit on the grid.
    State st = optimize(spec, emp, init, cfg);
    trace.push_back(st.objective);

    int iters = 0;
    double improvement = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iters; ++it) {
        const auto dir = direction_at(spec, emp, st.set.atoms, st.set.weights);
        const auto slope = slope_terms(emp, dir);
        const auto& terms = slope.terms;
        const auto cands = descent_candidates(emp, dir, terms, lo, hi, cfg);
        double min_cand = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) min_cand = std::min(min_cand, c.d);
        // Stop once the objective has stalled and no descent direction remains.
        if (improvement < cfg.objective_tol && min_cand >= -cfg.certificate_tol * dir.scale) break;

        State next;
        bool moved = false;
        for (double step = 1.0; step > 0.1 && !moved; step *= 0.5) {
            next = optimize(spec, emp, relocate(st.set, cands, terms, step), cfg);
            moved = next.objective < st.objective;
        }
        if (!moved) next = optimize(spec, emp, augment(st.set, cands), cfg);
        if (!std::isfinite(next.objective)) {
            trace.push_back(next.objective);
            throw SolverFailure("non-finite objective during support update", trace);
        }
        next = refine(spec, emp, tidy(spec, emp, next, cfg), lo, hi, 30);
        ++iters;
        improvement = st.objective - next.objective;
        st = std::move(next);
        trace.push_back(st.objective);
    }
    return finish(spec, emp, to_prior(st.set, lo, hi), std::move(trace), iters, st.weights_converged, top, cfg);
}

FitResult brute_force_fit(const DistanceSpec& spec, const EmpiricalPMF& emp, int num_atoms,
                          std::span<const double> grid, long long max_subsets) {
    if (num_atoms < 1 || num_atoms > 3) throw std::domain_error("brute_force_fit: num_atoms must be 1, 2 or 3");
    if (emp.empty()) throw std::domain_error("brute_force_fit: empty sample");
    const auto g = static_cast<long long>(grid.size());
    if (g < num_atoms) throw std::domain_error("brute_force_fit: grid smaller than num_atoms");
    long long count = 1;
    for (int a = 0; a < num_atoms; ++a) count = count * (g - a) / (a + 1);
    if (count > max_subsets) throw std::domain_error("brute_force_fit: subset budget exceeded");

    std::vector<std::array<int, 3>> subsets;
    subsets.reserve(static_cast<std::size_t>(count));
    const int gi = static_cast<int>(g);
    for (int i = 0; i < gi; ++i) {
        if (num_atoms == 1) { subsets.push_back({i, -1, -1}); continue; }
        for (int j = i + 1; j < gi; ++j) {
            if (num_atoms == 2) { subsets.push_back({i, j, -1}); continue; }
            for (int l = j + 1; l < gi; ++l) subsets.push_back({i, j, l});
        }
    }

    WeightOptConfig wcfg;
    std::vector<double> objective(subsets.size());
    std::vector<std::array<double, 3>> best_weights(subsets.size());
    const auto total = static_cast<std::ptrdiff_t>(subsets.size());
    #pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t s = 0; s < total; ++s) {
        const auto& idx = subsets[static_cast<std::size_t>(s)];
        std::vector<double> atoms;
        for (int a = 0; a < num_atoms; ++a) atoms.push_back(grid[static_cast<std::size_t>(idx[a])]);
        const std::vector<double> init(atoms.size(), 1.0 / num_atoms);
        const auto wf = optimize_weights(spec, emp, atoms, init, wcfg);
        objective[static_cast<std::size_t>(s)] = wf.objective;
        for (int a = 0; a < num_atoms; ++a) best_weights[static_cast<std::size_t>(s)][a] = wf.weights[a];
    }
    // First minimum by index keeps the result schedule independent.
    std::size_t best = 0;
    for (std::size_t s = 1; s < objective.size(); ++s)
        if (objective[s] < objective[best]) best = s;

    AtomSet set;
    for (int a = 0; a < num_atoms; ++a) {
        set.atoms.push_back(grid[static_cast<std::size_t>(subsets[best][a])]);
        set.weights.push_back(best_weights[best][a]);
    }
    const auto prior = to_prior(set);
    SolverConfig cfg;
    const double hi = std::max(*std::max_element(grid.begin(), grid.end()), static_cast<double>(emp.y_max()));
    return finish(spec, emp, prior, {objective[best]}, 1, true, hi, cfg);
}

}  // namespace ebpois
