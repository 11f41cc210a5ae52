#include "ebpois/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "ebpois/divergence.hpp"
#include "ebpois/eval.hpp"
#include "ebpois/poisson.hpp"
#include "ebpois/rng.hpp"

namespace ebpois {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_simplex(const std::vector<double>& w, const char* what) {
    double s = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) throw std::domain_error(std::string(what) + ": weights must be nonnegative");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::domain_error(std::string(what) + ": weights must sum to one");
}

DiscretePrior poisson_mixture_prior(const priors::PoissonMixture& pm) {
    const double top = *std::max_element(pm.means.begin(), pm.means.end());
    const auto last = static_cast<std::int64_t>(std::ceil(top + 40.0 * std::sqrt(top + 1.0) + 40.0));
    std::vector<double> atoms, weights;
    for (std::int64_t k = 0; k <= last; ++k) {
        double w = 0.0;
        for (std::size_t c = 0; c < pm.means.size(); ++c)
            w += pm.weights[c] * std::exp(poisson_log_pmf(pm.means[c], k));
        if (w > 0.0) {
            atoms.push_back(static_cast<double>(k));
            weights.push_back(w);
        }
    }
    return DiscretePrior::from_unnormalized(atoms, weights);
}

struct Density {
    double lo, hi;       // support, hi may be +inf
    double upper_ref;    // point above which the prior has negligible mass
    std::function<double(double)> log_density;
};

Density continuous_density(const PriorSpec& spec) {
    return std::visit(overloaded{
        [](const priors::Uniform& u) {
            const double lw = -std::log(u.hi - u.lo);
            return Density{u.lo, u.hi, u.hi, [lw](double) { return lw; }};
        },
        [](const priors::Gamma& g) {
            const double c = -std::lgamma(g.shape) - g.shape * std::log(g.scale);
            const double ref = g.shape * g.scale + 40.0 * g.scale * std::sqrt(g.shape) + 40.0 * g.scale;
            return Density{0.0, std::numeric_limits<double>::infinity(), ref, [g, c](double t) {
                if (t <= 0.0) return g.shape == 1.0 ? c : kNegInf;
                return (g.shape - 1.0) * std::log(t) - t / g.scale + c;
            }};
        },
        [](const priors::Exponential& e) {
            const double c = -std::log(e.scale);
            return Density{0.0, std::numeric_limits<double>::infinity(), 80.0 * e.scale,
                           [e, c](double t) { return -t / e.scale + c; }};
        },
        [](const priors::AbsGaussianMixture& a) {
            const double ref = *std::max_element(a.means.begin(), a.means.end()) + 40.0 * a.sd;
            return Density{0.0, std::numeric_limits<double>::infinity(), ref, [a](double t) {
                // log of (1/K) sum_k [phi((t-m)/sd) + phi((t+m)/sd)] / sd
                double peak = kNegInf;
                std::vector<double> terms;
                for (double m : a.means) {
                    for (double z : {(t - m) / a.sd, (t + m) / a.sd}) {
                        terms.push_back(-0.5 * z * z);
                        peak = std::max(peak, terms.back());
                    }
                }
                double s = 0.0;
                for (double v : terms) s += std::exp(v - peak);
                return peak + std::log(s) - kLogSqrt2Pi - std::log(a.sd) -
                       std::log(static_cast<double>(a.means.size()));
            }};
        },
        [](const auto&) -> Density { throw std::logic_error("not a continuous prior"); },
    }, spec);
}

// log of integral f_theta(y) g(theta) dtheta by adaptive Gauss-Kronrod on a
// peak-shifted integrand, split at the mode.
double log_marginal_quadrature(const Density& dens, std::int64_t y) {
    const double yd = static_cast<double>(y);
    const double hi = std::min(dens.hi, dens.upper_ref + yd + 30.0 * std::sqrt(yd + 1.0) + 30.0);
    const double lo = dens.lo;
    auto log_integrand = [&](double t) {
        const double lg = dens.log_density(t);
        if (lg == kNegInf) return kNegInf;
        return poisson_log_pmf(std::max(t, 0.0), y) + lg;
    };
    double peak = kNegInf, mode = lo;
    constexpr int kScan = 800;
    for (int s = 0; s <= kScan; ++s) {
        const double t = lo + (hi - lo) * s / kScan;
        const double v = log_integrand(t);
        if (v > peak) {
            peak = v;
            mode = t;
        }
    }
    if (peak == kNegInf) return kNegInf;
    auto f = [&](double t) {
        const double v = log_integrand(t);
        return v == kNegInf ? 0.0 : std::exp(v - peak);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    if (mode > lo) total += GK::integrate(f, lo, mode, 20, 1e-12);
    if (mode < hi) total += GK::integrate(f, mode, hi, 20, 1e-12);
    return peak + std::log(total);
}

std::vector<double> finite_values(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v)
        if (std::isfinite(x)) out.push_back(x);
    return out;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void parse_weighted(const std::string& s, std::vector<double>& values, std::vector<double>& weights) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto at = item.find('@');
        if (at == std::string::npos) throw std::invalid_argument("expected value@weight, got '" + item + "'");
        values.push_back(std::stod(item.substr(0, at)));
        weights.push_back(std::stod(item.substr(at + 1)));
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

std::string join_weighted(const std::vector<double>& v, const std::vector<double>& w) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]) + "@" + fmt(w[i]);
    return out;
}

Engine thetas_engine(std::uint64_t seed) { return make_engine(seed, 0); }
Engine counts_engine(std::uint64_t seed) { return make_engine(seed, 1); }

}  // namespace

void validate(const PriorSpec& spec) {
    std::visit(overloaded{
        [](const priors::PointMass& p) {
            if (!(p.c >= 0.0) || !std::isfinite(p.c)) throw std::domain_error("point mass must be finite and nonnegative");
        },
        [](const priors::FiniteDiscrete& d) {
            if (d.atoms.empty() || d.atoms.size() != d.weights.size())
                throw std::domain_error("discrete prior: atoms and weights must be nonempty and equal length");
            for (double a : d.atoms)
                if (!(a >= 0.0) || !std::isfinite(a)) throw std::domain_error("discrete prior: atoms must be nonnegative");
            check_simplex(d.weights, "discrete prior");
        },
        [](const priors::Uniform& u) {
            if (!(u.lo >= 0.0 && u.hi > u.lo) || !std::isfinite(u.hi)) throw std::domain_error("uniform prior needs 0 <= lo < hi");
        },
        [](const priors::Gamma& g) {
            if (!(g.shape > 0.0 && g.scale > 0.0)) throw std::domain_error("gamma prior needs positive shape and scale");
        },
        [](const priors::Exponential& e) {
            if (!(e.scale > 0.0)) throw std::domain_error("exponential prior needs a positive scale");
        },
        [](const priors::PoissonMixture& p) {
            if (p.means.empty() || p.means.size() != p.weights.size())
                throw std::domain_error("Poisson mixture: means and weights must be nonempty and equal length");
            for (double m : p.means)
                if (!(m > 0.0)) throw std::domain_error("Poisson mixture: means must be positive");
            check_simplex(p.weights, "Poisson mixture");
        },
        [](const priors::AbsGaussianMixture& a) {
            if (a.means.empty() || !(a.sd > 0.0)) throw std::domain_error("abs-Gaussian mixture needs means and sd > 0");
        },
    }, spec);
}

PriorSpec parse_prior_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("prior spec must look like kind:params");
    const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
    PriorSpec spec;
    try {
        if (kind == "point") {
            spec = priors::PointMass{std::stod(rest)};
        } else if (kind == "uniform") {
            const auto v = parse_list(rest);
            if (v.size() != 2) throw std::invalid_argument("uniform:lo,hi");
            spec = priors::Uniform{v[0], v[1]};
        } else if (kind == "gamma") {
            const auto v = parse_list(rest);
            if (v.size() != 2) throw std::invalid_argument("gamma:shape,scale");
            spec = priors::Gamma{v[0], v[1]};
        } else if (kind == "exp") {
            spec = priors::Exponential{std::stod(rest)};
        } else if (kind == "discrete") {
            priors::FiniteDiscrete d;
            parse_weighted(rest, d.atoms, d.weights);
            spec = d;
        } else if (kind == "poismix") {
            priors::PoissonMixture p;
            parse_weighted(rest, p.means, p.weights);
            spec = p;
        } else if (kind == "absgauss") {
            const auto c2 = rest.find(':');
            if (c2 == std::string::npos) throw std::invalid_argument("absgauss:sd:m1,m2,...");
            spec = priors::AbsGaussianMixture{parse_list(rest.substr(c2 + 1)), std::stod(rest.substr(0, c2))};
        } else {
            throw std::invalid_argument("unknown prior kind '" + kind + "'");
        }
    } catch (const std::logic_error& e) {
        throw std::invalid_argument("invalid prior spec '" + text + "': " + e.what());
    }
    validate(spec);
    return spec;
}

std::string to_string(const PriorSpec& spec) {
    return std::visit(overloaded{
        [](const priors::PointMass& p) { return "point:" + fmt(p.c); },
        [](const priors::FiniteDiscrete& d) { return "discrete:" + join_weighted(d.atoms, d.weights); },
        [](const priors::Uniform& u) { return "uniform:" + fmt(u.lo) + "," + fmt(u.hi); },
        [](const priors::Gamma& g) { return "gamma:" + fmt(g.shape) + "," + fmt(g.scale); },
        [](const priors::Exponential& e) { return "exp:" + fmt(e.scale); },
        [](const priors::PoissonMixture& p) { return "poismix:" + join_weighted(p.means, p.weights); },
        [](const priors::AbsGaussianMixture& a) { return "absgauss:" + fmt(a.sd) + ":" + join(a.means); },
    }, spec);
}

TruePrior::TruePrior(PriorSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    if (const auto* p = std::get_if<priors::PointMass>(&spec_)) discrete_ = DiscretePrior::point_mass(p->c);
    else if (const auto* d = std::get_if<priors::FiniteDiscrete>(&spec_))
        discrete_ = DiscretePrior::from_unnormalized(d->atoms, d->weights);
    else if (const auto* pm = std::get_if<priors::PoissonMixture>(&spec_))
        discrete_ = poisson_mixture_prior(*pm);
}

double TruePrior::log_marginal(std::int64_t y) const {
    if (y < 0) throw std::domain_error("count must be nonnegative");
    if (discrete_) return log_mixture_pmf(*discrete_, y);
    return log_marginal_quadrature(continuous_density(spec_), y);
}

double TruePrior::marginal(std::int64_t y) const { return std::exp(log_marginal(y)); }

double TruePrior::bayes(std::int64_t y) const {
    if (discrete_) return bayes_estimate(*discrete_, y);
    const double a = log_marginal(y), b = log_marginal(y + 1);
    if (a == kNegInf) throw UndefinedPosterior("posterior undefined: f_G(y) = 0");
    return static_cast<double>(y + 1) * std::exp(b - a);
}

std::vector<double> TruePrior::marginal_table() const {
    std::vector<double> table;
    double mass = 0.0;
    constexpr std::int64_t kMaxY = 100000;
    for (std::int64_t y = 0; y < kMaxY; ++y) {
        table.push_back(marginal(y));
        mass += table.back();
        if (1.0 - mass <= 1e-12 && table.size() > 1) break;
    }
    return table;
}

std::vector<double> sample_thetas(const PriorSpec& spec, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample_thetas: n must be at least 1");
    validate(spec);
    Engine eng = thetas_engine(seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    auto categorical = [&](const std::vector<double>& w) {
        boost::random::uniform_01<double> u01;
        double u = u01(eng), acc = 0.0;
        for (std::size_t c = 0; c < w.size(); ++c) {
            acc += w[c];
            if (u < acc) return c;
        }
        return w.size() - 1;
    };
    std::visit(overloaded{
        [&](const priors::PointMass& p) { std::fill(out.begin(), out.end(), p.c); },
        [&](const priors::FiniteDiscrete& d) {
            for (auto& t : out) t = d.atoms[categorical(d.weights)];
        },
        [&](const priors::Uniform& u) {
            boost::random::uniform_real_distribution<double> dist(u.lo, u.hi);
            for (auto& t : out) t = dist(eng);
        },
        [&](const priors::Gamma& g) {
            boost::random::gamma_distribution<double> dist(g.shape, g.scale);
            for (auto& t : out) t = dist(eng);
        },
        [&](const priors::Exponential& e) {
            boost::random::exponential_distribution<double> dist(1.0 / e.scale);
            for (auto& t : out) t = dist(eng);
        },
        [&](const priors::PoissonMixture& p) {
            for (auto& t : out) {
                boost::random::poisson_distribution<std::int64_t, double> dist(p.means[categorical(p.weights)]);
                t = static_cast<double>(dist(eng));
            }
        },
        [&](const priors::AbsGaussianMixture& a) {
            const std::vector<double> uniform(a.means.size(), 1.0 / static_cast<double>(a.means.size()));
            for (auto& t : out) {
                boost::random::normal_distribution<double> dist(a.means[categorical(uniform)], a.sd);
                t = std::abs(dist(eng));
            }
        },
    }, spec);
    return out;
}

std::vector<std::int64_t> sample_counts(std::span<const double> thetas, std::uint64_t seed) {
    Engine eng = counts_engine(seed);
    std::vector<std::int64_t> out(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double t = thetas[i];
        if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("sample_counts: theta must be nonnegative");
        if (t == 0.0) { out[i] = 0; continue; }
        boost::random::poisson_distribution<std::int64_t, double> dist(t);
        out[i] = dist(eng);
    }
    return out;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Raw: return "raw";
        case Method::Robbins: return "robbins";
        case Method::KL: return "kl";
        case Method::HellingerSq: return "h2";
        case Method::ChiSq: return "chi2";
    }
    return "";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::Raw, Method::Robbins, Method::KL, Method::HellingerSq, Method::ChiSq})
        if (method_name(m) == name) return m;
    throw std::invalid_argument("unknown method '" + name + "'");
}

DistanceSpec method_distance(Method m) {
    switch (m) {
        case Method::KL: return kKL;
        case Method::HellingerSq: return kHellinger;
        case Method::ChiSq: return kChiSq;
        default: throw std::invalid_argument("method " + method_name(m) + " is not a minimum-distance method");
    }
}

ExperimentResult summarize(Method method, double x, std::vector<double> values) {
    ExperimentResult r;
    r.method = method;
    r.x = x;
    const auto ok = finite_values(values);
    r.reps = static_cast<int>(ok.size());
    r.failed = static_cast<int>(values.size() - ok.size());
    r.values = std::move(values);
    if (ok.empty()) {
        r.mean = r.sd = r.half_width = kNaN;
        return r;
    }
    r.mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
    double ss = 0.0;
    for (double v : ok) ss += (v - r.mean) * (v - r.mean);
    r.sd = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
    r.half_width = 1.96 * r.sd / std::sqrt(static_cast<double>(ok.size()));
    return r;
}

std::vector<ExperimentResult> run_regret_experiment(const PriorSpec& spec, std::int64_t n, int reps,
                                                    const std::vector<Method>& methods, std::uint64_t seed,
                                                    const SolverConfig& cfg) {
    if (reps < 1 || n < 1) throw std::domain_error("run_regret_experiment: need n >= 1 and reps >= 1");
    const TruePrior truth(spec);
    const std::size_t nm = methods.size();
    std::vector<std::vector<double>> values(nm, std::vector<double>(static_cast<std::size_t>(reps), kNaN));

    #pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t rs = seed + static_cast<std::uint64_t>(r);
        const auto thetas = sample_thetas(spec, n, rs);
        const auto ys = sample_counts(thetas, rs);
        const EmpiricalPMF emp(ys);
        std::map<std::int64_t, double> bayes_true;
        for (auto y : emp.values()) bayes_true[y] = truth.bayes(y);
        const BayesRule truth_rule = [&](std::int64_t y) { return bayes_true.at(y); };
        for (std::size_t k = 0; k < nm; ++k) {
            try {
                double v;
                if (methods[k] == Method::Robbins) {
                    v = training_regret(truth_rule, [&](std::int64_t y) { return robbins_estimate(emp, y); }, ys);
                } else {
                    const auto fr = fit(method_distance(methods[k]), emp, cfg);
                    v = training_regret(truth_rule, [&](std::int64_t y) { return bayes_estimate(fr.prior, y); }, ys);
                }
                values[k][static_cast<std::size_t>(r)] = v;
            } catch (const std::exception&) {
                // Left as NaN: counted as a failed replicate.
            }
        }
    }
    std::vector<ExperimentResult> out;
    for (std::size_t k = 0; k < nm; ++k) out.push_back(summarize(methods[k], static_cast<double>(n), values[k]));
    return out;
}

std::vector<ExperimentResult> run_hellinger_experiment(const PriorSpec& spec, const std::vector<std::int64_t>& ns,
                                                       int reps, const std::vector<Method>& methods,
                                                       std::uint64_t seed, const SolverConfig& cfg) {
    if (reps < 1) throw std::domain_error("run_hellinger_experiment: reps must be at least 1");
    for (auto m : methods) (void)method_distance(m);
    const TruePrior truth(spec);
    const auto f_true = truth.marginal_table();
    std::vector<ExperimentResult> out;
    for (auto n : ns) {
        if (n < 1) throw std::domain_error("run_hellinger_experiment: n must be positive");
        std::vector<std::vector<double>> values(methods.size(), std::vector<double>(static_cast<std::size_t>(reps), kNaN));
        #pragma omp parallel for schedule(dynamic, 1)
        for (int r = 0; r < reps; ++r) {
            const std::uint64_t rs = seed + static_cast<std::uint64_t>(r);
            const auto ys = sample_counts(sample_thetas(spec, n, rs), rs);
            const EmpiricalPMF emp(ys);
            for (std::size_t k = 0; k < methods.size(); ++k) {
                try {
                    const auto fr = fit(method_distance(methods[k]), emp, cfg);
                    const auto last = std::max<std::int64_t>(truncation_point(fr.prior),
                                                             static_cast<std::int64_t>(f_true.size()) - 1);
                    values[k][static_cast<std::size_t>(r)] =
                        hellinger_sq_tables(f_true, mixture_pmf_table(fr.prior, last));
                } catch (const std::exception&) {
                }
            }
        }
        for (std::size_t k = 0; k < methods.size(); ++k)
            out.push_back(summarize(methods[k], static_cast<double>(n), values[k]));
    }
    return out;
}

std::vector<double> eb_filter(std::span<const std::int64_t> column, Method method, const SolverConfig& cfg) {
    std::vector<double> out(column.size());
    if (method == Method::Raw) {
        for (std::size_t i = 0; i < column.size(); ++i) out[i] = static_cast<double>(column[i]);
        return out;
    }
    const EmpiricalPMF emp(column);
    std::map<std::int64_t, double> rule;
    if (method == Method::Robbins) {
        for (auto y : emp.values()) rule[y] = robbins_estimate(emp, y);
    } else {
        const auto fr = fit(method_distance(method), emp, cfg);
        for (auto y : emp.values()) rule[y] = bayes_estimate(fr.prior, y);
    }
    for (std::size_t i = 0; i < column.size(); ++i) out[i] = rule.at(column[i]);
    return out;
}

double ols_rmse(const std::vector<std::vector<double>>& columns, std::span<const double> y, bool& ridge_used) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const auto d = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd a(n, d + 1);
    a.col(0).setOnes();
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < n; ++i) a(i, j + 1) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
    Eigen::MatrixXd gram = a.transpose() * a;
    const Eigen::VectorXd rhs = a.transpose() * yv;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    ridge_used = false;
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-13)) {
        gram.diagonal().array() += 1e-8 * gram.trace();
        ldlt.compute(gram);
        ridge_used = true;
    }
    const Eigen::VectorXd beta = ldlt.solve(rhs);
    const Eigen::VectorXd resid = yv - a * beta;
    return std::sqrt(resid.squaredNorm() / static_cast<double>(n));
}

std::vector<ExperimentResult> run_regression_experiment(int d, std::int64_t n, int reps,
                                                        const std::vector<Method>& methods, std::uint64_t seed,
                                                        const SolverConfig& cfg, const RegressionOptions& opts) {
    if (d < 1 || n < 2 || reps < 1) throw std::domain_error("run_regression_experiment: need d >= 1, n >= 2, reps >= 1");
    const PriorSpec cov = priors::AbsGaussianMixture{opts.component_means, opts.component_sd};
    std::vector<std::vector<double>> values(methods.size(), std::vector<double>(static_cast<std::size_t>(reps), kNaN));

    #pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t rs = seed + static_cast<std::uint64_t>(r);
        Engine beta_eng = make_engine(rs, 2);
        boost::random::uniform_real_distribution<double> ub(-opts.beta_bound, opts.beta_bound);
        std::vector<double> beta(static_cast<std::size_t>(d));
        for (auto& b : beta) b = opts.zero_beta ? 0.0 : ub(beta_eng);

        std::vector<std::vector<double>> theta(static_cast<std::size_t>(d));
        std::vector<std::vector<std::int64_t>> x(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            // Column j draws from its own streams of the replicate seed.
            const std::uint64_t cs = derive_seed(rs, 100 + static_cast<std::uint64_t>(j));
            theta[static_cast<std::size_t>(j)] = sample_thetas(cov, n, cs);
            x[static_cast<std::size_t>(j)] = sample_counts(theta[static_cast<std::size_t>(j)], cs);
        }
        std::vector<double> y(static_cast<std::size_t>(n), 0.0);
        for (std::size_t i = 0; i < y.size(); ++i)
            for (int j = 0; j < d; ++j) y[i] += theta[static_cast<std::size_t>(j)][i] * beta[static_cast<std::size_t>(j)];

        for (std::size_t k = 0; k < methods.size(); ++k) {
            try {
                std::vector<std::vector<double>> cols;
                for (int j = 0; j < d; ++j) cols.push_back(eb_filter(x[static_cast<std::size_t>(j)], methods[k], cfg));
                bool ridge = false;
                values[k][static_cast<std::size_t>(r)] = ols_rmse(cols, y, ridge);
            } catch (const std::exception&) {
            }
        }
    }
    std::vector<ExperimentResult> out;
    for (std::size_t k = 0; k < methods.size(); ++k) out.push_back(summarize(methods[k], d, values[k]));
    return out;
}

}  // namespace ebpois
