#include "ebpois/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ebpois/poisson.hpp"

namespace ebpois {

double DistanceSpec::ell(double a, double b) const {
    if (a == 0.0) return 0.0;
    b = std::max(b, kDensityFloor);
    switch (kind) {
        case Distance::KL: return a * std::log(a / b);
        case Distance::HellingerSq: return -2.0 * std::sqrt(a * b);
        case Distance::ChiSq: return a * a / b;
    }
    return 0.0;
}

double DistanceSpec::ell_db(double a, double b) const {
    if (a == 0.0) return 0.0;
    if (!(b > 0.0)) throw std::domain_error("ell_db: density must be positive where a > 0");
    switch (kind) {
        case Distance::KL: return -a / b;
        case Distance::HellingerSq: return -std::sqrt(a / b);
        case Distance::ChiSq: return -(a / b) * (a / b);
    }
    return 0.0;
}

double DistanceSpec::ell_dbb(double a, double b) const {
    if (a == 0.0) return 0.0;
    if (!(b > 0.0)) throw std::domain_error("ell_dbb: density must be positive where a > 0");
    switch (kind) {
        case Distance::KL: return a / (b * b);
        case Distance::HellingerSq: return 0.5 * std::sqrt(a / b) / b;
        case Distance::ChiSq: return 2.0 * (a / b) * (a / b) / b;
    }
    return 0.0;
}

double DistanceSpec::t_constant() const {
    switch (kind) {
        case Distance::KL: return 0.0;
        case Distance::HellingerSq: return 2.0;
        case Distance::ChiSq: return -1.0;
    }
    return 0.0;
}

std::string_view DistanceSpec::name() const {
    switch (kind) {
        case Distance::KL: return "kl";
        case Distance::HellingerSq: return "h2";
        case Distance::ChiSq: return "chi2";
    }
    return "";
}

DistanceSpec DistanceSpec::parse(std::string_view name) {
    if (name == "kl") return kKL;
    if (name == "h2") return kHellinger;
    if (name == "chi2") return kChiSq;
    throw std::invalid_argument("unknown distance '" + std::string(name) + "' (expected kl, h2 or chi2)");
}

double reduced_objective(const DistanceSpec& spec, std::span<const double> p, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += spec.ell(p[i], f[i]);
    return s;
}

double distance_from_support(const DistanceSpec& spec, std::span<const double> p, std::span<const double> f) {
    switch (spec.kind) {
        case Distance::KL: return reduced_objective(spec, p, f);
        case Distance::HellingerSq: {
            double bc = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) bc += std::sqrt(p[i] * f[i]);
            return std::max(0.0, 2.0 - 2.0 * bc);
        }
        case Distance::ChiSq: {
            // Off-support terms (0 - f)^2 / f sum to 1 - sum_supp f.
            double on = 0.0, mass = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double fi = std::max(f[i], kDensityFloor);
                on += (p[i] - fi) * (p[i] - fi) / fi;
                mass += f[i];
            }
            return on + std::max(0.0, 1.0 - mass);
        }
    }
    return 0.0;
}

double eval_distance(const DistanceSpec& spec, const EmpiricalPMF& emp, const DiscretePrior& prior) {
    const auto& ys = emp.values();
    std::vector<double> p = emp.probabilities(), f(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) f[i] = mixture_pmf(prior, ys[i]);
    return distance_from_support(spec, p, f);
}

double ell_derivative(const DistanceSpec& spec, double a, double f) { return spec.ell_db(a, f); }

double hellinger_sq_tables(std::span<const double> p, std::span<const double> q) {
    const std::size_t n = std::max(p.size(), q.size());
    double s = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
        const double a = y < p.size() ? p[y] : 0.0;
        const double b = y < q.size() ? q[y] : 0.0;
        const double d = std::sqrt(a) - std::sqrt(b);
        s += d * d;
    }
    return s;
}

double hellinger_sq_mixtures(const DiscretePrior& prior1, const DiscretePrior& prior2) {
    const auto last = std::max(truncation_point(prior1), truncation_point(prior2));
    return hellinger_sq_tables(mixture_pmf_table(prior1, last), mixture_pmf_table(prior2, last));
}

}  // namespace ebpois
