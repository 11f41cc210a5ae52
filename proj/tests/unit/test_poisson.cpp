#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ebpois/poisson.hpp"
#include "helpers.hpp"

using namespace ebpois;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// exp(-theta) theta^y / y! in 50-digit arithmetic.
Big big_pmf(double theta, std::int64_t y) {
    Big t(theta), v = exp(-t);
    for (std::int64_t k = 1; k <= y; ++k) v *= t / k;
    return v;
}

Big big_mixture(const DiscretePrior& g, std::int64_t y) {
    Big s = 0;
    for (std::size_t j = 0; j < g.size(); ++j) s += Big(g.weights()[j]) * big_pmf(g.atoms()[j], y);
    return s;
}

}  // namespace

TEST_CASE("prior and empirical pmf validation") {
    CHECK_THROWS_AS(DiscretePrior({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePrior({1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePrior({-1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePrior({1.0, 2.0}, {0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePrior({1.0, 2.0}, {1.0, 0.0}), std::invalid_argument);
    const auto g = DiscretePrior::from_unnormalized(std::vector<double>{2.0, 1.0, 2.0}, std::vector<double>{1.0, 2.0, 1.0});
    REQUIRE(g.size() == 2);
    CHECK(g.atoms()[0] == 1.0);
    CHECK(g.weights()[0] == doctest::Approx(0.5));
    CHECK(g.mean() == doctest::Approx(1.5));
    CHECK(g.variance() == doctest::Approx(0.25));

    const std::vector<std::int64_t> s{3, 0, 3, 1};
    const EmpiricalPMF emp(s);
    CHECK(emp.n() == 4);
    CHECK(emp.values() == std::vector<std::int64_t>{0, 1, 3});
    CHECK(emp.counts() == std::vector<std::int64_t>{1, 1, 2});
    CHECK(emp.count_of(2) == 0);
    CHECK(emp.y_min() == 0);
    CHECK(emp.y_max() == 3);
    const std::vector<std::int64_t> bad{1, -1};
    CHECK_THROWS(EmpiricalPMF(bad));
}

TEST_CASE("poisson_log_pmf point values") {
    CHECK(poisson_log_pmf(1.0, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(poisson_log_pmf(0.0, 0) == 0.0);
    CHECK(poisson_log_pmf(0.0, 3) == kNegInf);
    CHECK_THROWS_AS(poisson_log_pmf(-0.1, 0), std::domain_error);
    CHECK_THROWS_AS(poisson_log_pmf(1.0, -1), std::domain_error);
    CHECK(std::abs(poisson_log_pmf(3.7, 12) - static_cast<double>(log(big_pmf(3.7, 12)))) < 1e-12);
}

TEST_CASE("poisson_log_pmf against 50-digit oracle") {
    for (double theta : {1e-3, 0.4, 1.0, 3.7, 12.5, 49.9, 100.0})
        for (std::int64_t y : {0, 1, 2, 7, 30, 60, 120, 200}) {
            const double ref = static_cast<double>(log(big_pmf(theta, y)));
            CHECK(std::abs(poisson_log_pmf(theta, y) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
}

TEST_CASE("mixture_pmf examples and oracle agreement") {
    CHECK(mixture_pmf(DiscretePrior::point_mass(1.0), 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const DiscretePrior g01({0.0, 1.0}, {0.5, 0.5});
    CHECK(mixture_pmf(g01, 0) == doctest::Approx(0.5 * (1 + std::exp(-1.0))).epsilon(1e-14));

    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = testing::random_prior(rng, 1 + rep % 5, 100.0);
        for (std::int64_t y = 0; y <= 200; y += 7) {
            const Big ref = big_mixture(g, y);
            if (ref < Big(1e-290)) continue;
            const double lf = log_mixture_pmf(g, y);
            CHECK(std::abs(lf - static_cast<double>(log(ref))) <= 1e-10);
        }
    }
}

TEST_CASE("truncated sums plus tail mass equal one") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 30; ++rep) {
        const auto g = testing::random_prior(rng, 1 + rep % 4, 60.0);
        const auto k = truncation_point(g);
        CHECK(tail_mass(g, k) <= 1e-12);
        const auto table = mixture_pmf_table(g, k - 1);
        double s = 0.0;
        for (double v : table) s += v;
        CHECK(s >= 1.0 - 1e-10);
        for (std::int64_t kk : {1, 5, 20}) {
            double head = 0.0;
            for (std::int64_t y = 0; y < kk; ++y) head += mixture_pmf(g, y);
            CHECK(std::abs(head + tail_mass(g, kk) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("tail_mass") {
    CHECK(tail_mass(DiscretePrior::point_mass(0.0), 1) == 0.0);
    CHECK(tail_mass(DiscretePrior::point_mass(1.0), 1) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(tail_mass(DiscretePrior::point_mass(3.0), 0) == 1.0);
    const DiscretePrior g({0.5, 4.0, 20.0}, {0.2, 0.5, 0.3});
    double prev = 1.0;
    for (std::int64_t k = 0; k < 80; ++k) {
        const double t = tail_mass(g, k);
        CHECK(t <= prev);
        prev = t;
    }
    // Poisson(1) tail at 3 in closed form.
    CHECK(tail_mass(DiscretePrior::point_mass(1.0), 3) == doctest::Approx(1 - 2.5 * std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("truncation point is capped") {
    CHECK(truncation_point(DiscretePrior::point_mass(0.0)) >= 1);
    CHECK(truncation_point(DiscretePrior::point_mass(1000.0)) <= 10000);
}

TEST_CASE("bayes_estimate examples") {
    CHECK(bayes_estimate(DiscretePrior::point_mass(2.5), 0) == doctest::Approx(2.5));
    CHECK(bayes_estimate(DiscretePrior::point_mass(2.5), 17) == doctest::Approx(2.5));
    const DiscretePrior g({1.0, 2.0}, {0.5, 0.5});
    const double e1 = std::exp(-1.0), e2 = std::exp(-2.0);
    CHECK(bayes_estimate(g, 0) == doctest::Approx((e1 + 2 * e2) / (e1 + e2)).epsilon(1e-14));
    CHECK(bayes_estimate(g, 0) == doctest::Approx(1.268941).epsilon(1e-6));
    for (std::int64_t y = 0; y < 20; ++y) CHECK(bayes_estimate(g, y + 1) > bayes_estimate(g, y));
    // Ratio form (y+1) f(y+1) / f(y) agrees with the posterior-weight form.
    for (std::int64_t y = 0; y < 10; ++y)
        CHECK(bayes_estimate(g, y) ==
              doctest::Approx((y + 1) * mixture_pmf(g, y + 1) / mixture_pmf(g, y)).epsilon(1e-12));
    CHECK_THROWS_AS(bayes_estimate(DiscretePrior::point_mass(0.0), 1), UndefinedPosterior);
    CHECK(bayes_estimate(DiscretePrior::point_mass(0.0), 0) == 0.0);
}

TEST_CASE("bayes_estimate is bracketed by the atoms and monotone in y") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 40; ++rep) {
        const auto g = testing::random_prior(rng, 1 + rep % 6, 50.0);
        double prev = -1.0;
        for (std::int64_t y = 0; y <= 100; ++y) {
            const double b = bayes_estimate(g, y);
            CHECK(b >= g.min_atom() - 1e-12);
            CHECK(b <= g.max_atom() + 1e-12);
            if (g.size() >= 2 && b < g.max_atom() - 1e-9) CHECK(b > prev);
            else CHECK(b >= prev - 1e-12);
            prev = b;
        }
    }
}

TEST_CASE("robbins_estimate") {
    const std::vector<std::int64_t> s{0, 0, 1, 2};
    const EmpiricalPMF emp(s);
    CHECK(robbins_estimate(emp, 0) == 0.5);
    CHECK(robbins_estimate(emp, 1) == 2.0);
    CHECK(robbins_estimate(emp, 2) == 0.0);
    const std::vector<std::int64_t> zeros{0, 0, 0};
    CHECK(robbins_estimate(EmpiricalPMF(zeros), 0) == 0.0);
    const std::vector<std::int64_t> fives{5, 5};
    CHECK(robbins_estimate(EmpiricalPMF(fives), 4) == 10.0);

    // Exact against integer arithmetic wherever N(y) >= 1.
    std::mt19937_64 rng(5);
    std::poisson_distribution<std::int64_t> pois(6.0);
    std::vector<std::int64_t> big(500);
    for (auto& v : big) v = pois(rng);
    const EmpiricalPMF e2(big);
    for (auto y : e2.values()) {
        const std::int64_t num = (y + 1) * e2.count_of(y + 1), den = e2.count_of(y);
        CHECK(robbins_estimate(e2, y) == static_cast<double>(num) / static_cast<double>(den));
    }
}

TEST_CASE("bayes_estimate stays monotone where the posterior collapses onto the top atom") {
    // Fitted prior on which the ratio form used to step back by one ulp near y = 46.
    const DiscretePrior g({0.0, 1.1270738146438324, 2.6374977784994691},
                          {0.14681603284711894, 0.61968369552476876, 0.23350027162811238});
    double prev = bayes_estimate(g, 0);
    for (std::int64_t y = 1; y <= 300; ++y) {
        const double b = bayes_estimate(g, y);
        CHECK(b >= prev);
        prev = b;
    }
    CHECK(prev == g.max_atom());
}
