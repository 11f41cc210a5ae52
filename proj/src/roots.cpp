#include "ebpois/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace ebpois {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::vector<SlopeRoot> slope_roots(const kernels::SlopeTerms& terms, double lo, double hi,
                                   const RootOptions& opts) {
    if (!(lo <= hi)) throw std::invalid_argument("slope_roots: empty interval");
    if (opts.grid_points < 2) throw std::invalid_argument("slope_roots: need at least two grid points");
    // Only y = 0 present: the polynomial is constant.
    const bool constant = std::all_of(terms.ys.begin(), terms.ys.end(), [](auto y) { return y == 0; });
    std::vector<SlopeRoot> roots;
    if (constant) return roots;

    if (lo == hi) {
        if (kernels::scaled_slope(terms, lo) == 0.0) roots.push_back({lo, 0});
        return roots;
    }

    const auto n = static_cast<std::size_t>(opts.grid_points);
    std::vector<double> grid(n), vals(n);
    for (std::size_t t = 0; t < n; ++t)
        grid[t] = t + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(n - 1);
    kernels::slope_on_grid(terms, grid, vals);

    auto f = [&](double x) { return kernels::scaled_slope(terms, x); };
    auto close_enough = [&](double a, double b) { return std::abs(b - a) <= opts.tol; };

    int prev_sign = 0;  // last nonzero sign seen
    for (std::size_t t = 0; t < n; ++t) {
        const int s = sign_of(vals[t]);
        if (s == 0) {
            int next_sign = 0;
            for (std::size_t u = t + 1; u < n && next_sign == 0; ++u) next_sign = sign_of(vals[u]);
            int dir = 0;
            if (prev_sign < 0 && next_sign > 0) dir = 1;
            else if (prev_sign > 0 && next_sign < 0) dir = -1;
            if (roots.empty() || roots.back().theta != grid[t]) roots.push_back({grid[t], dir});
            continue;
        }
        if (t > 0 && sign_of(vals[t - 1]) == -s) {
            std::uintmax_t iters = 200;
            auto [a, b] = boost::math::tools::toms748_solve(f, grid[t - 1], grid[t], vals[t - 1], vals[t],
                                                            close_enough, iters);
            roots.push_back({0.5 * (a + b), s > 0 ? 1 : -1});
        }
        prev_sign = s;
    }
    return roots;
}

std::vector<double> support_roots(std::span<const double> w, std::span<const std::int64_t> ys,
                                  double lo, double hi, const RootOptions& opts) {
    if (w.size() != ys.size()) throw std::invalid_argument("support_roots: size mismatch");
    std::vector<double> log_abs(w.size());
    std::vector<int> sign(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        sign[i] = sign_of(w[i]);
        log_abs[i] = sign[i] == 0 ? 0.0 : std::log(std::abs(w[i]));
    }
    const kernels::SlopeTerms terms{ys, log_abs, sign};
    std::vector<double> out;
    for (const auto& r : slope_roots(terms, lo, hi, opts)) out.push_back(r.theta);
    return out;
}

}  // namespace ebpois
