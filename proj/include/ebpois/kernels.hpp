#pragma once

// Data-parallel inner loops of the solver. Each kernel has a serial reference
// version and an OpenMP version; both write element i from the same
// floating-point expression, so their outputs are bitwise identical.

#include <cstdint>
#include <span>

namespace ebpois::kernels {

/// Coefficients of S(theta) = sum_i w_i theta^(y_i - 1) (y_i - theta), stored
/// as sign and log-magnitude so that w_i = g_i / y_i! never under/overflows.
struct SlopeTerms {
    std::span<const std::int64_t> ys;
    std::span<const double> log_abs_w;
    std::span<const int> sign_w;  // -1, 0 or +1
};

/// S(theta) times a positive, theta-dependent factor. Same sign as S.
double scaled_slope(const SlopeTerms& terms, double theta);

namespace serial {

/// out[i * atoms.size() + j] = f_{atoms[j]}(ys[i]) (row-major, rows = ys).
void likelihood_matrix(std::span<const double> atoms, std::span<const std::int64_t> ys,
                       std::span<double> out);

/// out[t] = sum_i g_i f_{grid[t]}(y_i) - baseline.
void directional_derivative(std::span<const double> grid, std::span<const std::int64_t> ys,
                            std::span<const double> g, double baseline, std::span<double> out);

/// out[t] = scaled_slope(terms, grid[t]).
void slope_on_grid(const SlopeTerms& terms, std::span<const double> grid, std::span<double> out);

}  // namespace serial

namespace omp {

void likelihood_matrix(std::span<const double> atoms, std::span<const std::int64_t> ys,
                       std::span<double> out);
void directional_derivative(std::span<const double> grid, std::span<const std::int64_t> ys,
                            std::span<const double> g, double baseline, std::span<double> out);
void slope_on_grid(const SlopeTerms& terms, std::span<const double> grid, std::span<double> out);

}  // namespace omp

// Default entry points used by the library.
using omp::directional_derivative;
using omp::likelihood_matrix;
using omp::slope_on_grid;

}  // namespace ebpois::kernels
