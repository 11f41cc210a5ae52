#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ebpois/kernels.hpp"

namespace ebpois {

struct RootOptions {
    int grid_points = 10000;  ///< sign-change scan resolution over [lo, hi]
    double tol = 1e-9;        ///< absolute accuracy of each root
};

struct SlopeRoot {
    double theta;
    /// +1 when the polynomial goes from negative to positive (a local minimum
    /// of the directional derivative D), -1 for the reverse, 0 for an exact
    /// grid zero without a sign change.
    int direction;
};

/// Real roots in [lo, hi] of sum_i w_i theta^(y_i - 1) (y_i - theta), found by
/// grid bracketing plus TOMS 748 polishing. Roots closer than the grid spacing
/// that do not change sign between grid points are not resolved.
std::vector<SlopeRoot> slope_roots(const kernels::SlopeTerms& terms, double lo, double hi,
                                   const RootOptions& opts = {});

/// Same polynomial given plain coefficients w_i.
std::vector<double> support_roots(std::span<const double> w, std::span<const std::int64_t> ys,
                                  double lo, double hi, const RootOptions& opts = {});

}  // namespace ebpois
