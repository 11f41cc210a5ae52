#include "ebpois/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ebpois/poisson.hpp"

namespace ebpois::kernels {

namespace {

constexpr std::ptrdiff_t kParallelThreshold = 64;

inline double mixture_direction(double theta, std::span<const std::int64_t> ys,
                                std::span<const double> g) {
    double s = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (g[i] != 0.0) s += g[i] * std::exp(poisson_log_pmf(theta, ys[i]));
    return s;
}

void check_matrix(std::span<const double> atoms, std::span<const std::int64_t> ys, std::span<double> out) {
    if (out.size() != atoms.size() * ys.size())
        throw std::invalid_argument("likelihood_matrix: output size mismatch");
}

}  // namespace

double scaled_slope(const SlopeTerms& terms, double theta) {
    const auto& ys = terms.ys;
    const std::size_t m = ys.size();
    if (theta == 0.0) {
        // Only y = 0 (contributes -w) and y = 1 (contributes w) survive.
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (terms.sign_w[i] == 0) continue;
            const double w = terms.sign_w[i] * std::exp(terms.log_abs_w[i]);
            if (ys[i] == 0) s -= w;
            else if (ys[i] == 1) s += w;
        }
        return s;
    }
    const double log_theta = std::log(theta);
    // Scale by the largest |w_i| theta^(y_i - 1); the factor |y_i - theta| stays
    // outside the exponent since it is moderate.
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        if (terms.sign_w[i] == 0) continue;
        const double lt = terms.log_abs_w[i] + (static_cast<double>(ys[i]) - 1.0) * log_theta;
        if (lt > peak) peak = lt;
    }
    if (peak == -std::numeric_limits<double>::infinity()) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (terms.sign_w[i] == 0) continue;
        const double y = static_cast<double>(ys[i]);
        const double mag = std::exp(terms.log_abs_w[i] + (y - 1.0) * log_theta - peak);
        s += terms.sign_w[i] * mag * (y - theta);
    }
    return s;
}

namespace serial {

void likelihood_matrix(std::span<const double> atoms, std::span<const std::int64_t> ys,
                       std::span<double> out) {
    check_matrix(atoms, ys, out);
    const std::size_t k = atoms.size();
    for (std::size_t i = 0; i < ys.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) out[i * k + j] = std::exp(poisson_log_pmf(atoms[j], ys[i]));
}

void directional_derivative(std::span<const double> grid, std::span<const std::int64_t> ys,
                            std::span<const double> g, double baseline, std::span<double> out) {
    for (std::size_t t = 0; t < grid.size(); ++t) out[t] = mixture_direction(grid[t], ys, g) - baseline;
}

void slope_on_grid(const SlopeTerms& terms, std::span<const double> grid, std::span<double> out) {
    for (std::size_t t = 0; t < grid.size(); ++t) out[t] = scaled_slope(terms, grid[t]);
}

}  // namespace serial

namespace omp {

void likelihood_matrix(std::span<const double> atoms, std::span<const std::int64_t> ys,
                       std::span<double> out) {
    check_matrix(atoms, ys, out);
    const auto k = static_cast<std::ptrdiff_t>(atoms.size());
    const auto total = static_cast<std::ptrdiff_t>(ys.size()) * k;
    #pragma omp parallel for schedule(static) if (total > kParallelThreshold)
    for (std::ptrdiff_t c = 0; c < total; ++c) {
        const auto i = static_cast<std::size_t>(c / k);
        const auto j = static_cast<std::size_t>(c % k);
        out[static_cast<std::size_t>(c)] = std::exp(poisson_log_pmf(atoms[j], ys[i]));
    }
}

void directional_derivative(std::span<const double> grid, std::span<const std::int64_t> ys,
                            std::span<const double> g, double baseline, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    #pragma omp parallel for schedule(static) if (n > kParallelThreshold)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        const auto u = static_cast<std::size_t>(t);
        out[u] = mixture_direction(grid[u], ys, g) - baseline;
    }
}

void slope_on_grid(const SlopeTerms& terms, std::span<const double> grid, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    #pragma omp parallel for schedule(static) if (n > kParallelThreshold)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        const auto u = static_cast<std::size_t>(t);
        out[u] = scaled_slope(terms, grid[u]);
    }
}

}  // namespace omp

}  // namespace ebpois::kernels
