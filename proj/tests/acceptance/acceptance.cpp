// Acceptance suite: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "ebpois/eval.hpp"
#include "ebpois/io.hpp"
#include "ebpois/poisson.hpp"
#include "ebpois/rng.hpp"
#include "ebpois/sim.hpp"
#include "ebpois/solver.hpp"

using namespace ebpois;
namespace fs = std::filesystem;

namespace {

const DistanceSpec kAll[] = {kKL, kHellinger, kChiSq};

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail, bool skipped = false) {
    const char* tag = skipped ? "SKIP" : ok ? "PASS" : "FAIL";
    if (!skipped && !ok) ++failures;
    std::cout << tag << " " << id << ": " << detail << std::endl;
}

std::string num(double v, int prec = 6) {
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::int64_t> draw(const PriorSpec& spec, std::int64_t n, std::uint64_t seed) {
    return sample_counts(sample_thetas(spec, n, derive_seed(seed, 0)), derive_seed(seed, 1));
}

DiscretePrior random_prior(std::mt19937_64& rng, int k, double max_atom) {
    std::uniform_real_distribution<double> u(0.0, max_atom);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> atoms(k), weights(k);
    for (int j = 0; j < k; ++j) {
        atoms[j] = u(rng);
        weights[j] = e(rng) + 1e-3;
    }
    return DiscretePrior::from_unnormalized(atoms, weights);
}

// Fitted priors from criterion 1, reused by 2 and 6.
struct Sample {
    EmpiricalPMF emp;
    std::vector<std::int64_t> counts;
    double h = 0.0;
};

struct Fits {
    std::vector<Sample> samples;
    // [distance][sample]; empty optional marks a solver failure.
    std::vector<std::vector<std::optional<FitResult>>> free, constrained;
};

Fits structural() {
    const auto t0 = std::chrono::steady_clock::now();
    Fits fits;
    for (int r = 0; r < 50; ++r) {
        const PriorSpec spec = r % 2 == 0 ? PriorSpec{priors::Uniform{0, 3}} : PriorSpec{priors::Gamma{4, 2}};
        Sample s;
        s.counts = draw(spec, 50 + 9 * r, 1000 + r);
        s.emp = EmpiricalPMF(s.counts);
        s.h = std::max(1.0, 0.75 * static_cast<double>(s.emp.y_max()));
        fits.samples.push_back(std::move(s));
    }
    int checked = 0, bad = 0, failed = 0;
    std::string first_bad;
    for (const auto& d : kAll) {
        fits.free.emplace_back();
        fits.constrained.emplace_back();
        for (const auto& s : fits.samples) {
            for (bool con : {false, true}) {
                SolverConfig cfg;
                if (con) cfg.support_max = s.h;
                std::optional<FitResult> fr;
                try {
                    fr = fit(d, s.emp, cfg);
                } catch (const SolverFailure&) {
                    ++failed;
                }
                (con ? fits.constrained : fits.free).back().push_back(fr);
                if (!fr) continue;
                ++checked;
                const auto& g = fr->prior;
                const double lo = con ? 0.0 : s.emp.y_min() - 0.01;
                const double hi = con ? s.h : s.emp.y_max() + 0.01;
                double sum = 0.0;
                bool ok = g.size() <= s.emp.support_size();
                for (std::size_t j = 0; j < g.size(); ++j) {
                    ok = ok && g.atoms()[j] >= lo && g.atoms()[j] <= hi && g.weights()[j] >= 0.0;
                    sum += g.weights()[j];
                }
                ok = ok && std::abs(sum - 1.0) <= 1e-9;
                if (!ok) {
                    ++bad;
                    if (first_bad.empty())
                        first_bad = std::string(d.name()) + (con ? " constrained" : " free") + " n=" +
                                    std::to_string(s.emp.n());
                }
            }
        }
    }
    report("1 structural", bad == 0 && failed == 0,
           std::to_string(checked) + " fits (50 samples x 3 distances x free/[0,h]), " + std::to_string(bad) +
               " violations, " + std::to_string(failed) + " solver failures" +
               (first_bad.empty() ? "" : ", first: " + first_bad) + " [" + num(seconds_since(t0), 3) + " s]");
    return fits;
}

void certificate(const Fits& fits) {
    bool all_ok = true;
    std::string detail;
    int con_pass = 0, con_total = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        int pass = 0, failed = 0;
        double worst = 0.0;
        for (std::size_t r = 0; r < fits.samples.size(); ++r) {
            const auto& s = fits.samples[r];
            const auto& fr = fits.free[k][r];
            if (!fr) {
                ++failed;
                continue;
            }
            const auto audit = uniform_grid(0.0, static_cast<double>(s.emp.y_max()), 10000);
            const auto c = first_order_certificate(kAll[k], s.emp, fr->prior, audit);
            worst = std::max({worst, -c.min_D / c.scale, c.max_abs_D_at_atoms / c.scale});
            if (c.passes(1e-6)) ++pass;
            const auto& cr = fits.constrained[k][r];
            if (cr) {
                ++con_total;
                const auto ca = first_order_certificate(kAll[k], s.emp, cr->prior, uniform_grid(0.0, s.h, 10000));
                if (ca.passes(1e-6)) ++con_pass;
            }
        }
        all_ok = all_ok && pass >= 48;
        detail += std::string(kAll[k].name()) + " " + std::to_string(pass) + "/50 (failures " +
                  std::to_string(failed) + ", worst rel " + num(worst, 3) + ") ";
    }
    report("2 first-order certificate", all_ok, detail + "| on [0,h]: " + std::to_string(con_pass) + "/" +
                                                    std::to_string(con_total));
}

void oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(303);
    bool ok = true;
    double worst = -1e300;
    for (int r = 0; r < 10; ++r) {
        // Three distinct values with random multiplicities.
        std::uniform_int_distribution<int> val(0, 12), mult(1, 15);
        std::vector<std::int64_t> vals;
        while (vals.size() < 3) {
            const int v = val(rng);
            if (std::find(vals.begin(), vals.end(), v) == vals.end()) vals.push_back(v);
        }
        std::vector<std::int64_t> s;
        for (auto v : vals)
            for (int c = mult(rng); c > 0; --c) s.push_back(v);
        const EmpiricalPMF emp(s);
        const auto grid = uniform_grid(0.0, static_cast<double>(emp.y_max()), 200);
        for (const auto& d : kAll) {
            const auto a = fit(d, emp);
            const auto b = brute_force_fit(d, emp, 2, grid);
            worst = std::max(worst, a.objective - b.objective);
            ok = ok && a.objective <= b.objective + 1e-3;
        }
    }
    report("3 oracle equivalence", ok,
           "max(fit - brute force) = " + num(worst, 3) + " over 30 fits [" + num(seconds_since(t0), 3) + " s]");
}

void npmle_identity() {
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
        const PriorSpec spec = r % 2 == 0 ? PriorSpec{priors::Gamma{4, 2}} : PriorSpec{priors::Uniform{0, 3}};
        const auto s = draw(spec, 60 + 20 * r, 4000 + r);
        const EmpiricalPMF emp(s);
        const auto fr = fit(kKL, emp);
        double neg_entropy = 0.0;
        for (std::size_t i = 0; i < emp.support_size(); ++i) neg_entropy += emp.probability(i) * std::log(emp.probability(i));
        double loglik = 0.0;
        for (auto y : s) loglik += log_mixture_pmf(fr.prior, y);
        loglik /= static_cast<double>(s.size());
        worst = std::max(worst, std::abs((fr.objective - neg_entropy) - (-loglik)));
    }
    report("4 NPMLE identity", worst <= 1e-10, "max |KL - sum p log p + mean loglik| = " + num(worst, 3));
}

void sandwich() {
    std::mt19937_64 rng(505);
    int v_low = 0, v_mid = 0, v_high = 0;
    double worst_low = 0.0;
    for (int r = 0; r < 100; ++r) {
        std::uniform_real_distribution<double> u(0.1, 20.0);
        std::poisson_distribution<std::int64_t> pois(u(rng));
        std::vector<std::int64_t> s(10 + r * 3);
        for (auto& v : s) v = pois(rng);
        const EmpiricalPMF emp(s);
        const auto g = random_prior(rng, 1 + r % 5, 25.0);
        const double h2 = eval_distance(kHellinger, emp, g);
        const double kl = eval_distance(kKL, emp, g);
        const double chi = eval_distance(kChiSq, emp, g);
        if (2 * h2 > kl + 1e-12) ++v_low;
        if (h2 > kl + 1e-12) ++v_mid;
        if (kl > chi + 1e-12) ++v_high;
        worst_low = std::max(worst_low, 2 * h2 - kl);
    }
    report("5 sandwich 2H^2 <= KL <= chi^2", v_low == 0 && v_high == 0,
           std::to_string(v_low) + "/100 pairs violate 2H^2 <= KL (max excess " + num(worst_low, 4) + "), " +
               std::to_string(v_high) + "/100 violate KL <= chi^2. H^2 here is sum (sqrt p - sqrt q)^2; the factor 2 "
               "holds only for the halved convention");
    report("5a supplemental H^2 <= KL", v_mid == 0, std::to_string(v_mid) + "/100 violations");
    report("5b supplemental KL <= chi^2", v_high == 0, std::to_string(v_high) + "/100 violations");
}

// log(max atom - E[theta | y]) in log space, for y where the double gap underflows.
double log_gap(const DiscretePrior& g, std::int64_t y) {
    const double top = g.max_atom();
    double peak = kNegInf;
    std::vector<double> lw(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        lw[j] = std::log(g.weights()[j]) + poisson_log_pmf(g.atoms()[j], y);
        peak = std::max(peak, lw[j]);
    }
    double den = 0.0, num_peak = kNegInf;
    std::vector<double> ln;
    for (std::size_t j = 0; j < g.size(); ++j) {
        den += std::exp(lw[j] - peak);
        if (g.atoms()[j] < top) ln.push_back(lw[j] + std::log(top - g.atoms()[j]));
    }
    for (double v : ln) num_peak = std::max(num_peak, v);
    double s = 0.0;
    for (double v : ln) s += std::exp(v - num_peak);
    return num_peak + std::log(s) - peak - std::log(den);
}

void monotonicity(const Fits& fits) {
    int priors_checked = 0, bad = 0, via_gap = 0;
    for (const auto* set : {&fits.free, &fits.constrained})
        for (const auto& per_dist : *set)
            for (const auto& fr : per_dist) {
                if (!fr) continue;
                ++priors_checked;
                const auto& g = fr->prior;
                bool ok = true;
                double prev = bayes_estimate(g, 0);
                for (std::int64_t y = 1; y <= 50; ++y) {
                    const double b = bayes_estimate(g, y);
                    if (b < prev) ok = false;
                    if (g.size() >= 2 && !(b > prev)) {
                        // Equal in double: confirm strict growth by the shrinking gap to the top atom.
                        ++via_gap;
                        if (!(log_gap(g, y) < log_gap(g, y - 1))) ok = false;
                    }
                    prev = b;
                }
                if (!ok) ++bad;
            }
    report("6 Bayes monotonicity", bad == 0,
           std::to_string(priors_checked) + " fitted priors, y = 0..50, " + std::to_string(bad) + " violations (" +
               std::to_string(via_gap) + " steps below double resolution checked via log gap)");
}

void closed_form_mmse() {
    const DiscretePrior g({0.0, 1.0}, {0.5, 0.5});
    const double expected = 1.0 / (2.0 * (std::exp(1.0) + 1.0));
    const double e1 = std::abs(mmse(g) - expected), e2 = std::abs(mmse_series(g) - expected);
    std::mt19937_64 rng(707);
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
        const auto p = random_prior(rng, 1 + r % 6, 30.0);
        worst = std::max(worst, std::abs(regret(p, p)));
    }
    report("7 closed-form mmse", e1 <= 1e-9 && e2 <= 1e-9 && worst <= 1e-10,
           "|mmse - 1/(2(e+1))| = " + num(e1, 3) + " (series " + num(e2, 3) + "), max |regret(G,G)| = " +
               num(worst, 3));
}

void density_rate() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Method> ms{Method::KL, Method::HellingerSq, Method::ChiSq};
    const auto res = run_hellinger_experiment(priors::Uniform{0, 3}, {100, 1000, 10000}, 20, ms, 808);
    bool ok = true;
    std::string detail;
    for (auto m : ms) {
        std::vector<double> means;
        for (const auto& r : res)
            if (r.method == m) means.push_back(r.mean);
        const bool dec = means.size() == 3 && means[0] > means[1] && means[1] > means[2];
        const double ratio = means[0] / means[2];
        ok = ok && dec && ratio >= 10.0;
        detail += method_name(m) + " [" + num(means[0], 3) + ", " + num(means[1], 3) + ", " + num(means[2], 3) +
                  "] ratio " + num(ratio, 3) + "; ";
    }
    report("8 density rate", ok, detail + "[" + num(seconds_since(t0), 3) + " s]");
}

double se(const ExperimentResult& r) { return r.sd / std::sqrt(static_cast<double>(r.reps)); }

void regret_dominance() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_regret_experiment(priors::Gamma{4, 2}, 600, 50,
                                           {Method::Robbins, Method::KL, Method::HellingerSq, Method::ChiSq}, 909);
    const auto& rob = res[0];
    bool ok = rob.reps > 0;
    std::string detail = "robbins " + num(rob.mean, 4) + " (se " + num(se(rob), 3) + "); ";
    for (std::size_t k = 1; k < res.size(); ++k) {
        const double gap_se = std::sqrt(se(rob) * se(rob) + se(res[k]) * se(res[k]));
        const double z = (rob.mean - res[k].mean) / gap_se;
        ok = ok && z >= 3.0 && res[k].failed == 0;
        detail += method_name(res[k].method) + " " + num(res[k].mean, 4) + " (" + num(z, 3) + " se below, " +
                  std::to_string(res[k].failed) + " failed); ";
    }
    report("9 regret dominance over Robbins", ok, detail + "[" + num(seconds_since(t0), 3) + " s]");
}

void small_scale_ordering() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_regret_experiment(priors::Exponential{0.3}, 300, 100, {Method::KL, Method::HellingerSq}, 1010);
    const bool ok = res[1].mean <= res[0].mean && res[0].failed == 0 && res[1].failed == 0;
    report("10 small-scale ordering", ok,
           "h2 " + num(res[1].mean, 4) + " vs kl " + num(res[0].mean, 4) + " [" + num(seconds_since(t0), 3) + " s]");
}

void hockey(const std::string& path) {
    if (path.empty() || !fs::exists(path)) {
        report("11 hockey reproduction", true,
               "dataset not supplied (configure with -DEBPOIS_HOCKEY_DATA=<csv>); synthetic fixture covered by unit tests",
               true);
        return;
    }
    const auto rows = io::read_paired_file(path);
    std::vector<std::int64_t> past;
    std::vector<double> future;
    for (const auto& r : rows) {
        past.push_back(r.past);
        future.push_back(static_cast<double>(r.future));
    }
    const EmpiricalPMF emp(past);
    auto score = [&](const std::function<double(std::int64_t)>& rule) {
        std::vector<double> pred;
        for (auto y : past) pred.push_back(rule(y));
        return prediction_metrics(pred, future);
    };
    bool ok = true;
    std::string detail;
    struct Target { DistanceSpec d; double rmse, mad; };
    for (const auto& t : {Target{kHellinger, 6.02, 4.37}, Target{kKL, 6.04, 4.38}, Target{kChiSq, 6.05, 4.39}}) {
        const auto fr = fit(t.d, emp);
        const auto m = score([&](std::int64_t y) { return bayes_estimate(fr.prior, y); });
        ok = ok && std::abs(m.rmse - t.rmse) <= 0.5 && std::abs(m.mad - t.mad) <= 0.3;
        detail += std::string(t.d.name()) + " rmse " + num(m.rmse, 4) + " mad " + num(m.mad, 4) + "; ";
    }
    const auto rob = score([&](std::int64_t y) { return robbins_estimate(emp, y); });
    ok = ok && std::abs(rob.rmse - 15.59) <= 2.0;
    const auto wc = worst_case_prior(50.0, 1000);
    const auto mm = score([&](std::int64_t y) { return bayes_estimate(wc.prior, y); });
    ok = ok && std::abs(mm.rmse - 8.62) <= 0.8;
    report("11 hockey reproduction", ok,
           detail + "robbins rmse " + num(rob.rmse, 4) + "; minimax rmse " + num(mm.rmse, 4) + " (n=" +
               std::to_string(rows.size()) + ")");
}

void eb_filtering() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Method> ms{Method::Raw, Method::KL, Method::HellingerSq, Method::ChiSq};
    bool ok = true;
    std::string detail;
    for (int d : {2, 5}) {
        const auto res = run_regression_experiment(d, 1200, 20, ms, 1212 + d);
        const auto& raw = res[0];
        detail += "d=" + std::to_string(d) + ":";
        for (std::size_t k = 1; k < res.size(); ++k) {
            int wins = 0;
            for (int r = 0; r < 20; ++r)
                if (res[k].values[r] < raw.values[r]) ++wins;
            const double ratio = res[k].mean / raw.mean;
            ok = ok && wins >= 18 && ratio >= 0.80 && ratio <= 0.95;
            detail += " " + method_name(res[k].method) + " " + std::to_string(wins) + "/20 ratio " + num(ratio, 4);
        }
        detail += "; ";
    }
    report("12 EB filtering", ok, detail + "[" + num(seconds_since(t0), 3) + " s]");
}

void determinism(const std::string& cli, const std::string& fixtures, const fs::path& work) {
    fs::create_directories(work / "a");
    fs::create_directories(work / "b");
    const std::string data = fixtures + "/hockey_synthetic.csv";
    const std::string counts = fixtures + "/counts_gamma.csv";
    // Each command writes into <dir>; inputs are shared.
    const std::vector<std::pair<std::string, std::vector<std::string>>> cmds{
        {"fit " + counts + " --dist h2 --seed 5 --out <dir>/prior.json", {"prior.json"}},
        {"fit " + data + " --column past --position F --dist chi2 --out <dir>/prior_f.json", {"prior_f.json"}},
        {"predict " + data + " --column past --prior " + (work / "a" / "prior_f.json").string() +
             " --out <dir>/pred.csv", {"pred.csv"}},
        {"predict " + counts + " --mode robbins --out <dir>/robbins.csv", {"robbins.csv"}},
        {"predict " + counts + " --mode minimax --support-max 20 --grid 200 --ascent-iters 300 --out <dir>/minimax.csv",
         {"minimax.csv"}},
        {"evaluate --predictions " + (work / "a" / "pred.csv").string() + " --truths " + data +
             " --truth-column future --out <dir>/metrics.json", {"metrics.json"}},
        {"simulate regret --prior gamma:4,2 --n 200 --reps 3 --seed 11 --out <dir>/regret.json --plot-data "
         "<dir>/regret.csv", {"regret.json", "regret.csv"}},
        {"simulate hellinger --prior uniform:0,3 --n-sweep 100,300 --reps 2 --seed 12 --out <dir>/hell.json",
         {"hell.json"}},
        {"simulate filter-regress --d 2 --n 300 --reps 2 --seed 13 --out <dir>/filt.json", {"filt.json"}},
    };
    int compared = 0, differ = 0, errors = 0;
    for (const auto& [tmpl, outs] : cmds) {
        for (const char* dir : {"a", "b"}) {
            std::string cmd = tmpl;
            const std::string d = (work / dir).string();
            for (std::size_t p; (p = cmd.find("<dir>")) != std::string::npos;) cmd.replace(p, 5, d);
            if (std::system((cli + " " + cmd + " > /dev/null 2>&1").c_str()) != 0) ++errors;
        }
        for (const auto& o : outs) {
            ++compared;
            const auto pa = (work / "a" / o).string(), pb = (work / "b" / o).string();
            if (!fs::exists(pa) || !fs::exists(pb) || io::read_file(pa) != io::read_file(pb)) ++differ;
        }
    }
    report("13 determinism", differ == 0 && errors == 0,
           std::to_string(compared) + " outputs of " + std::to_string(cmds.size()) + " commands run twice, " +
               std::to_string(differ) + " differ, " + std::to_string(errors) + " nonzero exits");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ebpois acceptance suite"};
    std::string cli, fixtures, workdir = "acceptance_work", hockey_path;
    std::vector<int> only;
    app.add_option("--cli", cli, "Path of the ebpois executable")->required();
    app.add_option("--fixtures", fixtures, "Fixture directory")->required();
    app.add_option("--workdir", workdir, "Scratch directory");
    app.add_option("--hockey", hockey_path, "Paired hockey CSV (player,past,future[,position])");
    app.add_option("--only", only, "Run only these criteria");
    CLI11_PARSE(app, argc, argv);

    auto want = [&](int c) { return only.empty() || std::find(only.begin(), only.end(), c) != only.end(); };
    const auto t0 = std::chrono::steady_clock::now();
    Fits fits;
    if (want(1) || want(2) || want(6)) fits = structural();
    if (want(2)) certificate(fits);
    if (want(3)) oracle_equivalence();
    if (want(4)) npmle_identity();
    if (want(5)) sandwich();
    if (want(6)) monotonicity(fits);
    if (want(7)) closed_form_mmse();
    if (want(8)) density_rate();
    if (want(9)) regret_dominance();
    if (want(10)) small_scale_ordering();
    if (want(11)) hockey(hockey_path);
    if (want(12)) eb_filtering();
    if (want(13)) determinism(cli, fixtures, workdir);
    std::cout << failures << " criteria failed; total " << num(seconds_since(t0), 4) << " s" << std::endl;
    return failures == 0 ? 0 : 1;
}
