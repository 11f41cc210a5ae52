#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ebpois/prior.hpp"

namespace ebpois {

enum class Distance { KL, HellingerSq, ChiSq };

/// Generalized distance dist(q1 || q2) = t(q1) + sum_y ell(q1(y), q2(y)), with
/// ell(0, b) = 0 and ell(a, .) strictly decreasing and convex for a > 0.
///   KL:  t = 0,  ell(a, b) = a log(a / b)
///   H^2: t = 2,  ell(a, b) = -2 sqrt(a b)
///   chi^2: t = -1, ell(a, b) = a^2 / b
struct DistanceSpec {
    Distance kind = Distance::KL;

    double ell(double a, double b) const;
    /// d ell / d b; throws std::domain_error when b <= 0 and a > 0.
    double ell_db(double a, double b) const;
    double ell_dbb(double a, double b) const;
    /// Constant t(q) for a pmf q summing to one.
    double t_constant() const;

    std::string_view name() const;
    static DistanceSpec parse(std::string_view name);  // "kl" | "h2" | "chi2"
};

inline constexpr DistanceSpec kKL{Distance::KL};
inline constexpr DistanceSpec kHellinger{Distance::HellingerSq};
inline constexpr DistanceSpec kChiSq{Distance::ChiSq};

/// Densities are floored here before division or log.
inline constexpr double kDensityFloor = 1e-300;

/// dist(p_emp || f_prior) over all y >= 0. Off-support terms are handled in
/// closed form, so no truncation enters.
double eval_distance(const DistanceSpec& spec, const EmpiricalPMF& emp, const DiscretePrior& prior);

/// Same, from p(y_i) and f(y_i) on the empirical support.
double distance_from_support(const DistanceSpec& spec, std::span<const double> p,
                             std::span<const double> f);

/// sum_i ell(p_i, f_i): the part of the distance that depends on the prior.
double reduced_objective(const DistanceSpec& spec, std::span<const double> p,
                         std::span<const double> f);

double ell_derivative(const DistanceSpec& spec, double a, double f);

/// sum_y (sqrt f_G1(y) - sqrt f_G2(y))^2, truncated where both tails are below 1e-12.
double hellinger_sq_mixtures(const DiscretePrior& prior1, const DiscretePrior& prior2);

/// sum_y (sqrt p(y) - sqrt q(y))^2 over two pmf tables (shorter one zero-padded).
double hellinger_sq_tables(std::span<const double> p, std::span<const double> q);

}  // namespace ebpois
