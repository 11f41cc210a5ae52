#include "ebpois/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ebpois/eval.hpp"
#include "ebpois/io.hpp"
#include "ebpois/poisson.hpp"
#include "ebpois/rng.hpp"
#include "ebpois/sim.hpp"
#include "ebpois/solver.hpp"

namespace ebpois {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<std::pair<std::string, std::string>> position_filter(const std::string& position) {
    if (position.empty()) return std::nullopt;
    return std::make_pair(std::string("position"), position);
}

struct InputOptions {
    std::string path;
    std::string column;
    std::string position;

    void add(CLI::App* cmd, const std::string& what) {
        cmd->add_option("input", path, what)->required();
        cmd->add_option("--column", column, "Read this named column of a CSV with header (e.g. past)");
        cmd->add_option("--position", position, "Keep only rows with this position label (needs --column)");
    }

    std::vector<std::int64_t> read() const {
        if (!position.empty() && column.empty()) throw UsageError("--position requires --column");
        return io::read_counts_file(path, column, position_filter(position));
    }

    Json describe() const {
        Json j;
        j["path"] = path;
        j["column"] = column;
        j["position"] = position;
        j["sha256"] = io::sha256_hex(io::read_file(path));
        return j;
    }
};

struct SolverOptions {
    int grid = 1000;
    int max_iter = 15;

    void add(CLI::App* cmd) {
        cmd->add_option("--grid", grid, "Initial grid size")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--max-iter", max_iter, "Support-update iterations")->check(CLI::PositiveNumber)->capture_default_str();
    }

    SolverConfig config() const {
        SolverConfig cfg;
        cfg.init_grid_size = grid;
        cfg.max_iters = max_iter;
        return cfg;
    }
};

Json config_json(const SolverConfig& cfg) {
    Json j;
    j["support_max"] = cfg.support_max ? Json(*cfg.support_max) : Json(nullptr);
    j["grid"] = cfg.init_grid_size;
    j["max_iter"] = cfg.max_iters;
    j["merge_tol"] = cfg.merge_tol;
    j["prune_tol"] = cfg.prune_tol;
    j["objective_tol"] = cfg.objective_tol;
    j["root_tol"] = cfg.root_tol;
    j["certificate_tol"] = cfg.certificate_tol;
    j["weight_opt"] = {{"max_iters", cfg.weight_opt.max_iters}, {"grad_tol", cfg.weight_opt.grad_tol}};
    return j;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) out << content;
    else io::write_file(path, content);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<Method> parse_methods(const std::string& s) {
    std::vector<Method> out;
    for (const auto& name : split_list(s)) {
        try {
            out.push_back(parse_method(name));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (out.empty()) throw UsageError("--methods is empty");
    return out;
}

std::string num_or_nan(double v) { return std::isfinite(v) ? io::fixed6(v) : "nan"; }

// ---- fit ---------------------------------------------------------------

struct FitCommand {
    InputOptions input;
    SolverOptions solver;
    std::string dist = "kl";
    std::optional<double> support_max;
    std::uint64_t seed = 0;
    std::string out_path;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("fit", "Fit a minimum-distance prior to a counts file");
        input.add(cmd, "Counts CSV");
        solver.add(cmd);
        cmd->add_option("--dist", dist, "kl | h2 | chi2")->check(CLI::IsMember({"kl", "h2", "chi2"}))->capture_default_str();
        cmd->add_option("--support-max", support_max, "Constrain the prior to [0, h]");
        cmd->add_option("--seed", seed, "Recorded in the output; the fit itself is deterministic")->capture_default_str();
        cmd->add_option("--out", out_path, "Prior document path (stdout when omitted)");
    }

    int run(std::ostream& out, std::ostream& err) const {
        const auto counts = input.read();
        const EmpiricalPMF emp(counts);
        auto cfg = solver.config();
        cfg.support_max = support_max;
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        Json config = config_json(cfg);
        config["input"] = input.describe();
        const auto spec = DistanceSpec::parse(dist);
        try {
            const auto fr = fit(spec, emp, cfg);
            io::PriorDocument doc;
            doc.prior = fr.prior;
            doc.dist = dist;
            doc.objective = fr.objective;
            doc.min_D = fr.certificate.min_D;
            doc.max_abs_D_atoms = fr.certificate.max_abs_D_at_atoms;
            config["iterations_used"] = fr.iterations_used;
            config["converged"] = fr.converged;
            config["certificate_scale"] = fr.certificate.scale;
            doc.config = config;
            doc.seed = seed;
            doc.data_sha256 = config["input"]["sha256"].get<std::string>();
            emit(out_path, io::dump_prior_document(doc), out);
            auto& summary = out_path.empty() ? err : out;
            summary << "dist=" << dist << " n=" << emp.n() << " atoms=" << fr.prior.size()
                    << " objective=" << Json(fr.objective).dump() << " min_D=" << Json(fr.certificate.min_D).dump()
                    << " max_abs_D_atoms=" << Json(fr.certificate.max_abs_D_at_atoms).dump()
                    << " scale=" << Json(fr.certificate.scale).dump() << " iterations=" << fr.iterations_used
                    << " converged=" << (fr.converged ? "true" : "false") << "\n";
            return kExitOk;
        } catch (const SolverFailure& e) {
            Json j;
            j["status"] = "solver_failure";
            j["message"] = e.what();
            j["objective_trace"] = e.trace();
            j["dist"] = dist;
            j["config"] = config;
            j["seed"] = seed;
            emit(out_path, j.dump(2) + "\n", out);
            err << "solver failure: " << e.what() << "\n";
            return kExitSolver;
        }
    }
};

// ---- predict -----------------------------------------------------------

struct PredictCommand {
    InputOptions input;
    std::string prior_path;
    std::string mode;
    double h = 50.0;
    int grid = 1000;
    int ascent_iters = 2000;
    double ascent_step = 0.1;
    std::string out_path;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("predict", "Posterior-mean predictions for each row of a counts file");
        input.add(cmd, "Counts CSV");
        cmd->add_option("--prior", prior_path, "Prior document from fit");
        cmd->add_option("--mode", mode, "robbins | minimax (instead of --prior)")->check(CLI::IsMember({"robbins", "minimax"}));
        cmd->add_option("--support-max", h, "Support bound h of the worst-case prior")->capture_default_str();
        cmd->add_option("--grid", grid, "Grid size of the worst-case prior")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--ascent-iters", ascent_iters, "Worst-case ascent iterations")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_option("--ascent-step", ascent_step, "Worst-case ascent base step")->capture_default_str();
        cmd->add_option("--out", out_path, "Predictions CSV path (stdout when omitted)");
    }

    int run(std::ostream& out, std::ostream&) const {
        if (prior_path.empty() == mode.empty()) throw UsageError("give exactly one of --prior or --mode");
        const auto counts = input.read();
        const auto in = input.describe();
        std::vector<std::string> comments{"ebpois predict", "input=" + in.dump()};
        std::vector<double> pred(counts.size());
        std::map<std::int64_t, double> rule;
        auto predict_with = [&](auto&& f) {
            for (std::size_t i = 0; i < counts.size(); ++i) {
                auto it = rule.find(counts[i]);
                if (it == rule.end()) it = rule.emplace(counts[i], f(counts[i])).first;
                pred[i] = it->second;
            }
        };
        if (!prior_path.empty()) {
            const auto text = io::read_file(prior_path);
            const auto doc = io::parse_prior_document(text);
            comments.push_back("mode=prior prior=" + prior_path + " prior_sha256=" + io::sha256_hex(text));
            try {
                predict_with([&](std::int64_t y) { return bayes_estimate(doc.prior, y); });
            } catch (const UndefinedPosterior& e) {
                throw io::DataError(std::string("prior incompatible with data: ") + e.what());
            }
        } else if (mode == "robbins") {
            const EmpiricalPMF emp(counts);
            comments.push_back("mode=robbins");
            predict_with([&](std::int64_t y) { return robbins_estimate(emp, y); });
        } else {
            if (!(h > 0.0)) throw UsageError("--support-max must be positive");
            const auto wc = worst_case_prior(h, grid, {ascent_step, ascent_iters});
            Json cfg{{"h", h}, {"grid", grid}, {"ascent_iters", ascent_iters}, {"ascent_step", ascent_step},
                     {"mmse", wc.mmse_trace.back()}};
            comments.push_back("mode=minimax config=" + cfg.dump());
            predict_with([&](std::int64_t y) { return bayes_estimate(wc.prior, y); });
        }
        emit(out_path, io::predictions_csv(counts, pred, comments), out);
        return kExitOk;
    }
};

// ---- evaluate ----------------------------------------------------------

struct EvaluateCommand {
    std::string predictions;
    std::string truths;
    std::string truth_column;
    std::string position;
    std::string out_path;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("evaluate", "RMSE and MAD of predictions against truths");
        cmd->add_option("--predictions", predictions, "Predictions CSV from predict")->required();
        cmd->add_option("--truths", truths, "Counts CSV holding the true values")->required();
        cmd->add_option("--truth-column", truth_column, "Named column of the truths file (e.g. future)");
        cmd->add_option("--position", position, "Keep only rows with this position label (needs --truth-column)");
        cmd->add_option("--out", out_path, "Metrics JSON path (stdout when omitted)");
    }

    int run(std::ostream& out, std::ostream&) const {
        if (!position.empty() && truth_column.empty()) throw UsageError("--position requires --truth-column");
        const auto pred = io::read_real_column_file(predictions, "prediction");
        const auto t = io::read_counts_file(truths, truth_column, position_filter(position));
        if (pred.size() != t.size())
            throw io::DataError("row count mismatch: " + std::to_string(pred.size()) + " predictions vs " +
                                std::to_string(t.size()) + " truths");
        const std::vector<double> td(t.begin(), t.end());
        const auto m = prediction_metrics(pred, td);
        Json j;
        j["rmse"] = m.rmse;
        j["mad"] = m.mad;
        j["n"] = m.n;
        j["predictions"] = {{"path", predictions}, {"sha256", io::sha256_hex(io::read_file(predictions))}};
        j["truths"] = {{"path", truths},
                       {"column", truth_column},
                       {"position", position},
                       {"sha256", io::sha256_hex(io::read_file(truths))}};
        emit(out_path, j.dump(2) + "\n", out);
        if (!out_path.empty()) out << "rmse=" << io::fixed6(m.rmse) << " mad=" << io::fixed6(m.mad) << " n=" << m.n << "\n";
        return kExitOk;
    }
};

// ---- simulate ----------------------------------------------------------

struct SimulateCommand {
    std::string kind;
    std::string prior;
    std::int64_t n = 0;
    std::string n_sweep = "100,1000,10000";
    int reps = 50;
    std::string methods;
    int d = 2;
    bool zero_beta = false;
    std::uint64_t seed = 0;
    SolverOptions solver;
    std::string out_path;
    std::string plot_path;

    void add(CLI::App& app) {
        auto* cmd = app.add_subcommand("simulate", "Replicated simulation experiments");
        cmd->add_option("kind", kind, "regret | hellinger | filter-regress")
            ->required()
            ->check(CLI::IsMember({"regret", "hellinger", "filter-regress"}));
        cmd->add_option("--prior", prior, "Prior spec, e.g. uniform:0,3 gamma:4,2 exp:0.3 point:2");
        cmd->add_option("--n", n, "Sample size (regret: 1000, filter-regress: 1200)");
        cmd->add_option("--n-sweep", n_sweep, "Comma-separated sample sizes for hellinger")->capture_default_str();
        cmd->add_option("--reps", reps, "Replicates")->check(CLI::Range(2, 1000000))->capture_default_str();
        cmd->add_option("--methods", methods, "Comma-separated subset of raw,robbins,kl,h2,chi2");
        cmd->add_option("--d", d, "Covariate dimension for filter-regress")->check(CLI::PositiveNumber)->capture_default_str();
        cmd->add_flag("--zero-beta", zero_beta, "filter-regress with beta = 0");
        cmd->add_option("--seed", seed, "Base seed; replicate r uses seed + r")->capture_default_str();
        solver.add(cmd);
        cmd->add_option("--out", out_path, "Experiment JSON path (stdout when omitted)");
        cmd->add_option("--plot-data", plot_path, "CSV of x,method,mean,ci_low,ci_high");
    }

    int run(std::ostream& out, std::ostream&) const {
        const auto cfg = solver.config();
        Json config;
        config["kind"] = kind;
        config["reps"] = reps;
        config["solver"] = config_json(cfg);
        std::vector<ExperimentResult> results;
        auto need_prior = [&]() {
            if (prior.empty()) throw UsageError("--prior is required for " + kind);
            try {
                return parse_prior_spec(prior);
            } catch (const std::exception& e) {
                throw UsageError(e.what());
            }
        };
        if (kind == "regret") {
            const auto spec = need_prior();
            const auto ms = parse_methods(methods.empty() ? "robbins,kl,h2,chi2" : methods);
            const std::int64_t nn = n > 0 ? n : 1000;
            config["prior"] = to_string(spec);
            config["n"] = nn;
            config["methods"] = method_list(ms);
            results = run_regret_experiment(spec, nn, reps, ms, seed, cfg);
        } else if (kind == "hellinger") {
            const auto spec = need_prior();
            const auto ms = parse_methods(methods.empty() ? "kl,h2,chi2" : methods);
            for (auto m : ms)
                if (m == Method::Raw || m == Method::Robbins) throw UsageError("hellinger needs minimum-distance methods");
            std::vector<std::int64_t> ns;
            for (const auto& s : split_list(n_sweep)) {
                try {
                    ns.push_back(std::stoll(s));
                } catch (const std::exception&) {
                    throw UsageError("bad --n-sweep entry '" + s + "'");
                }
                if (ns.back() < 1) throw UsageError("--n-sweep entries must be positive");
            }
            if (ns.empty()) throw UsageError("--n-sweep is empty");
            config["prior"] = to_string(spec);
            config["n_sweep"] = ns;
            config["methods"] = method_list(ms);
            results = run_hellinger_experiment(spec, ns, reps, ms, seed, cfg);
        } else {
            const auto ms = parse_methods(methods.empty() ? "raw,kl,h2,chi2" : methods);
            RegressionOptions opts;
            opts.zero_beta = zero_beta;
            const std::int64_t nn = n > 0 ? n : 1200;
            if (nn < 2) throw UsageError("--n must be at least 2");
            config["d"] = d;
            config["n"] = nn;
            config["methods"] = method_list(ms);
            config["covariate_prior"] = to_string(PriorSpec{priors::AbsGaussianMixture{opts.component_means, opts.component_sd}});
            config["beta_bound"] = opts.beta_bound;
            config["zero_beta"] = zero_beta;
            results = run_regression_experiment(d, nn, reps, ms, seed, cfg, opts);
        }

        Json j;
        j["command"] = "simulate";
        j["config"] = config;
        j["seed"] = seed;
        j["rng"] = std::string(kRngAlgorithm);
        j["results"] = Json::array();
        for (const auto& r : results) {
            Json e;
            e["method"] = method_name(r.method);
            e["x"] = r.x;
            e["mean"] = r.mean;
            e["sd"] = r.sd;
            e["half_width"] = r.half_width;
            e["ci_low"] = r.mean - r.half_width;
            e["ci_high"] = r.mean + r.half_width;
            e["reps"] = r.reps;
            e["failed"] = r.failed;
            e["values"] = r.values;
            j["results"].push_back(e);
        }
        emit(out_path, j.dump(2) + "\n", out);
        if (!plot_path.empty()) {
            std::string csv = "# ebpois simulate config=" + config.dump() + " seed=" + std::to_string(seed) + " rng=" +
                              std::string(kRngAlgorithm) + "\n";
            csv += "x,method,mean,ci_low,ci_high\n";
            for (const auto& r : results)
                csv += num_or_nan(r.x) + "," + method_name(r.method) + "," + num_or_nan(r.mean) + "," +
                       num_or_nan(r.mean - r.half_width) + "," + num_or_nan(r.mean + r.half_width) + "\n";
            io::write_file(plot_path, csv);
        }
        return kExitOk;
    }

    static Json method_list(const std::vector<Method>& ms) {
        Json j = Json::array();
        for (auto m : ms) j.push_back(method_name(m));
        return j;
    }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Empirical Bayes estimation of Poisson means by minimum-distance priors"};
    app.name(args.empty() ? "ebpois" : args[0]);
    app.require_subcommand(1);
    FitCommand fit_cmd;
    PredictCommand predict_cmd;
    EvaluateCommand evaluate_cmd;
    SimulateCommand simulate_cmd;
    fit_cmd.add(app);
    predict_cmd.add(app);
    evaluate_cmd.add(app);
    simulate_cmd.add(app);

    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand("fit")) return fit_cmd.run(out, err);
        if (app.got_subcommand("predict")) return predict_cmd.run(out, err);
        if (app.got_subcommand("evaluate")) return evaluate_cmd.run(out, err);
        return simulate_cmd.run(out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const io::DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const SolverFailure& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::domain_error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace ebpois
