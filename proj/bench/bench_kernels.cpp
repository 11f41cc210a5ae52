// Serial vs OpenMP timings of the grid kernels on fit-sized inputs.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <omp.h>

#include "ebpois/kernels.hpp"
#include "ebpois/solver.hpp"

using namespace ebpois;

namespace {

double best_ms(const std::function<void()>& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double omp_ms, bool equal) {
    std::printf("%-24s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   identical %s\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms, equal ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::stoi(argv[1]) : 20;
    const int y_max = argc > 2 ? std::stoi(argv[2]) : 60;
    std::printf("threads=%d reps=%d y_max=%d\n", omp_get_max_threads(), reps, y_max);

    std::vector<std::int64_t> ys(static_cast<std::size_t>(y_max) + 1);
    std::iota(ys.begin(), ys.end(), 0);
    std::vector<double> g(ys.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::sin(0.7 * static_cast<double>(i)) - 0.2;
    const auto atoms = uniform_grid(0.0, y_max, 1000);
    const auto audit = uniform_grid(0.0, y_max, 10000);

    std::vector<double> a(atoms.size() * ys.size()), b(a.size());
    const double t_lik_s = best_ms([&] { kernels::serial::likelihood_matrix(atoms, ys, a); }, reps);
    const double t_lik_o = best_ms([&] { kernels::omp::likelihood_matrix(atoms, ys, b); }, reps);
    report("likelihood_matrix", t_lik_s, t_lik_o, a == b);

    std::vector<double> c(audit.size()), d(audit.size());
    const double t_dd_s = best_ms([&] { kernels::serial::directional_derivative(audit, ys, g, 0.1, c); }, reps);
    const double t_dd_o = best_ms([&] { kernels::omp::directional_derivative(audit, ys, g, 0.1, d); }, reps);
    report("directional_derivative", t_dd_s, t_dd_o, c == d);

    std::vector<double> log_abs(ys.size());
    std::vector<int> sign(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        sign[i] = (g[i] > 0) - (g[i] < 0);
        log_abs[i] = std::log(std::abs(g[i])) - std::lgamma(static_cast<double>(ys[i]) + 1.0);
    }
    const kernels::SlopeTerms terms{ys, log_abs, sign};
    std::vector<double> e(audit.size()), f(audit.size());
    const double t_sl_s = best_ms([&] { kernels::serial::slope_on_grid(terms, audit, e); }, reps);
    const double t_sl_o = best_ms([&] { kernels::omp::slope_on_grid(terms, audit, f); }, reps);
    report("slope_on_grid", t_sl_s, t_sl_o, e == f);
    return 0;
}
