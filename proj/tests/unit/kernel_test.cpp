#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "mdcf/kernel.hpp"
#include "mdcf/philox.hpp"
#include "oracles.hpp"

using namespace mdcf;
using mdcf::testing::moments;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

rng::CounterStream stream(std::uint64_t seed, std::uint32_t rep = 0)
{
    return {seed, rng::Purpose::base_wear, rep};
}

}  // namespace

TEST_CASE("philox4x32-10 known-answer vectors")
{
    CHECK(rng::philox4x32({0, 0, 0, 0}, {0, 0}) ==
          rng::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(rng::philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}) ==
          rng::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(rng::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}) ==
          rng::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter streams are pure functions of their coordinates")
{
    rng::CounterStream a(99, rng::Purpose::arrivals, 5);
    rng::CounterStream b(99, rng::Purpose::arrivals, 5);
    rng::CounterStream other_rep(99, rng::Purpose::arrivals, 6);
    rng::CounterStream other_purpose(99, rng::Purpose::theta, 5);
    int same_rep = 0;
    int same_purpose = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto x = a();
        CHECK(x == b());
        same_rep += x == other_rep();
        same_purpose += x == other_purpose();
    }
    CHECK(same_rep == 0);
    CHECK(same_purpose == 0);

    rng::KeyedStream k1(99, rng::Purpose::shock, 5, 17, 2);
    rng::KeyedStream k2(99, rng::Purpose::shock, 5, 17, 2);
    rng::KeyedStream k3(99, rng::Purpose::shock, 5, 17, 3);
    const auto v = k1();
    CHECK(v == k2());
    CHECK(v != k3());
}

TEST_CASE("gamma_cdf")
{
    SUBCASE("empty mass at zero")
    {
        CHECK(gamma_cdf(0.0, GammaLaw(0.5, 1.2)) == 0.0);
        CHECK(gamma_cdf(0.0, GammaLaw(7.0, 0.1)) == 0.0);
    }
    SUBCASE("shape one is exponential")
    {
        CHECK(gamma_cdf(1.0, GammaLaw(1.0, 1.2)) == doctest::Approx(1.0 - std::exp(-1.2)).epsilon(1e-14));
        CHECK(gamma_cdf(1.0, GammaLaw(1.0, 1.2)) == doctest::Approx(0.6988058).epsilon(1e-7));
    }
    SUBCASE("shape one half equals erf(sqrt x)")
    {
        // mpmath: erf(1) = 0.842700792949714869...
        const double expected = 0.84270079294971487;
        const double value = gamma_cdf(1.0, GammaLaw(0.5, 1.0));
        CHECK(std::abs(value - expected) < 1e-10);
        // Quadrature of the density after x = u^2, which removes the x^(-1/2) singularity.
        const GammaLaw law(0.5, 1.0);
        const double quad = mdcf::testing::simpson(
            [&](double u) { return u == 0.0 ? 2.0 / std::sqrt(std::numbers::pi) : 2.0 * u * gamma_pdf(u * u, law); },
            0.0, 1.0);
        CHECK(std::abs(value - quad) < 1e-10);
    }
    SUBCASE("servo valve wear at t = 4")
    {
        // 1 - 7 e^{-6}
        CHECK(gamma_cdf(5.0, GammaLaw(2.0, 1.2)) ==
              doctest::Approx(1.0 - 7.0 * std::exp(-6.0)).epsilon(1e-13));
    }
    SUBCASE("both branches of the incomplete gamma agree with the density integral")
    {
        for (const double shape : {0.3, 2.0, 9.5, 40.0})
        {
            const GammaLaw law(shape, 1.2);
            for (const double x : {0.5, 3.0, 8.0, 40.0})
            {
                const double quad = integrate([&](double y) { return gamma_pdf(y, law); }, 0.0, x,
                                              QuadratureOptions{1e-12, 5000});
                CHECK(std::abs(gamma_cdf(x, law) - quad) < 1e-10);
            }
        }
    }
    SUBCASE("domain errors")
    {
        CHECK_THROWS_AS(gamma_cdf(kNaN, GammaLaw(1, 1)), DomainError);
        CHECK_THROWS_AS(gamma_cdf(-1.0, GammaLaw(1, 1)), DomainError);
        CHECK_THROWS_AS(GammaLaw(0.0, 1.0), DomainError);
        CHECK_THROWS_AS(GammaLaw(1.0, -1.0), DomainError);
    }
}

TEST_CASE("gamma_cdf is monotone in x and stochastically ordered in shape")
{
    std::mt19937_64 gen(1234);
    std::uniform_real_distribution<double> shape_dist(0.01, 30.0);
    std::uniform_real_distribution<double> x_dist(0.001, 40.0);
    for (int trial = 0; trial < 500; ++trial)
    {
        const double shape = shape_dist(gen);
        const double x = x_dist(gen);
        const GammaLaw law(shape, 1.2);
        const double f = gamma_cdf(x, law);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
        CHECK(gamma_cdf(x * 1.1, law) >= f);
        if (f > 1e-300 && f < 1.0 - 1e-15)
        {
            CHECK(gamma_cdf(x, GammaLaw(shape * 1.05, 1.2)) < f);
        }
    }
}

TEST_CASE("normal_cdf")
{
    const NormalLaw w(10.0, 5.0);
    CHECK(normal_cdf(10.0, w) == 0.5);
    // mpmath: ncdf(4) = 0.999968328758166880...
    CHECK(std::abs(normal_cdf(30.0, w) - 0.99996832875816688) < 1e-12);
    const double quad =
        0.5 + integrate([&](double x) { return normal_pdf(x, w); }, 10.0, 30.0, 1e-14);
    CHECK(std::abs(normal_cdf(30.0, w) - quad) < 1e-12);
    CHECK(normal_cdf(5.0, w) + normal_cdf(15.0, w) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(normal_cdf(kNaN, w), DomainError);
    CHECK_THROWS_AS(NormalLaw(0.0, 0.0), DomainError);

    SUBCASE("reflection symmetry")
    {
        std::mt19937_64 gen(77);
        std::normal_distribution<double> xs(10.0, 15.0);
        for (int i = 0; i < 1000; ++i)
        {
            const double x = xs(gen);
            CHECK(std::abs(normal_cdf(x, w) + normal_cdf(20.0 - x, w) - 1.0) < 1e-12);
        }
    }
    SUBCASE("point mass")
    {
        const auto y = NormalLaw::degenerate(0.5);
        CHECK(y.is_degenerate());
        CHECK(normal_cdf(0.49, y) == 0.0);
        CHECK(normal_cdf(0.5, y) == 1.0);
    }
}

TEST_CASE("facilitation_pmf")
{
    SUBCASE("no-shock term is exp(-Lambda)")
    {
        CHECK(std::abs(facilitation_pmf(0, 0.2, 1.0) - 0.36787944117144233) < 1e-15);
        for (const double eta : {1e-6, 0.05, 0.2, 1.0, 3.0})
            for (const double big_lambda : {0.0, 0.1, 2.0, 17.0})
                CHECK(std::abs(facilitation_pmf(0, eta, big_lambda) - std::exp(-big_lambda)) < 1e-12);
    }
    SUBCASE("direct evaluation of the closed form")
    {
        // 5 (1 - e^{-0.2}) (e^{-0.2})^5, mpmath: 0.333426146296201141...
        CHECK(std::abs(facilitation_pmf(1, 0.2, 1.0) - 0.33342614629620114) < 1e-14);
    }
    SUBCASE("Poisson limit")
    {
        CHECK(std::abs(facilitation_pmf(3, 1e-6, 2.0) - 0.18044704431548359) < 1e-5);
        for (const double big_lambda : {0.5, 2.0, 5.0})
        {
            double worst = 0.0;
            for (std::uint64_t i = 0; i <= 50; ++i)
            {
                worst = std::max(worst, std::abs(facilitation_pmf(i, 1e-6, big_lambda) -
                                                 mdcf::testing::poisson_pmf(i, big_lambda)));
            }
            CHECK(worst < 1e-4);
        }
    }
    SUBCASE("normalization under truncation")
    {
        for (const double eta : {0.05, 0.2, 1.0})
        {
            for (const double big_lambda : {0.1, 1.0, 10.0})
            {
                double sum = 0.0;
                for (std::uint64_t i = 0; i < 2'000'000 && sum < 1.0 - 1e-12; ++i)
                    sum += facilitation_pmf(i, eta, big_lambda);
                CHECK(sum >= 1.0 - 1e-9);
                CHECK(sum <= 1.0 + 1e-9);
            }
        }
    }
    SUBCASE("product and log-gamma branches agree across the switch")
    {
        // p(i+1) / p(i) = (1/eta + i) (1 - e^{-eta L}) / (i + 1)
        const double eta = 1.0;
        const double big_lambda = 8.0;
        for (std::uint64_t i = 250; i < 262; ++i)
        {
            const double ratio = facilitation_pmf(i + 1, eta, big_lambda) /
                                 facilitation_pmf(i, eta, big_lambda);
            const double expected =
                (1.0 / eta + i) * (-std::expm1(-eta * big_lambda)) / (i + 1.0);
            CHECK(ratio == doctest::Approx(expected).epsilon(1e-10));
        }
    }
    SUBCASE("matches the negative binomial generating function")
    {
        for (const double s : {0.0, 0.3, 0.9})
        {
            double sum = 0.0;
            for (std::uint64_t i = 0; i < 5000; ++i)
                sum += std::pow(s, static_cast<double>(i)) * facilitation_pmf(i, 0.2, 3.0);
            CHECK(sum == doctest::Approx(mdcf::testing::facilitation_pgf(s, 0.2, 3.0)).epsilon(1e-12));
        }
    }
    SUBCASE("domain")
    {
        CHECK_THROWS_AS(facilitation_pmf(1, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(facilitation_pmf(1, -0.2, 1.0), DomainError);
        CHECK_THROWS_AS(facilitation_pmf(1, 0.2, -1.0), DomainError);
        CHECK(facilitation_pmf(3, 0.2, 0.0) == 0.0);
    }
}

TEST_CASE("iid_sum_normal")
{
    const NormalLaw y(0.5, 0.1);
    const auto one = iid_sum_normal(1, y);
    REQUIRE(one);
    CHECK(one->mean() == 0.5);
    CHECK(one->stdev() == 0.1);
    const auto four = iid_sum_normal(4, y);
    CHECK(four->mean() == doctest::Approx(2.0));
    CHECK(four->stdev() == doctest::Approx(0.2));
    const auto nine = iid_sum_normal(9, y);
    CHECK(nine->mean() == doctest::Approx(4.5));
    CHECK(nine->stdev() == doctest::Approx(0.3));
    CHECK_FALSE(iid_sum_normal(0, y).has_value());
}

TEST_CASE("integrate")
{
    CHECK(integrate([](double x) { return x; }, 0.0, 1.0, 1e-12) == doctest::Approx(0.5).epsilon(1e-14));
    const NormalLaw standard(0.0, 1.0);
    CHECK(std::abs(integrate([&](double x) { return normal_pdf(x, standard); }, 0.0, 40.0, 1e-12) -
                   0.5) < 1e-10);
    const GammaLaw wear(0.5 * 4.0, 1.2);
    CHECK(std::abs(integrate([&](double x) { return gamma_pdf(x, wear); }, 0.0, 5.0) -
                   gamma_cdf(5.0, wear)) < 1e-8);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), DomainError);

    SUBCASE("non-convergence carries the best estimate")
    {
        auto wild = [](double x) { return std::sin(1.0 / (x + 1e-4)); };
        try
        {
            integrate(wild, 0.0, 1.0, QuadratureOptions{1e-14, 5});
            FAIL("expected NumericError");
        }
        catch (const NumericError& e)
        {
            CHECK(std::isfinite(e.best_estimate()));
            CHECK(std::abs(e.best_estimate()) < 1.0);
        }
    }
}

TEST_CASE("gamma sampler moments")
{
    // Var of the sample variance for Gamma(a, b): (2 a^2 + 6 a) / b^4 / n.
    constexpr int n = 1'000'000;
    for (const auto& [shape, rate] :
         std::vector<std::pair<double, double>>{{0.005, 1.2}, {0.3, 2.0}, {1.0, 1.0}, {50.0, 1.2}})
    {
        CAPTURE(shape);
        const GammaLaw law(shape, rate);
        auto rng = stream(static_cast<std::uint64_t>(shape * 1000) + 1);
        std::vector<double> xs(n);
        for (auto& x : xs)
            x = sample_gamma(law, rng);
        const auto m = moments(xs);
        const double mean_se = std::sqrt(law.variance() / n);
        const double var_se = std::sqrt((2 * shape * shape + 6 * shape) / std::pow(rate, 4) / n);
        CHECK(std::abs(m.mean - law.mean()) < 4.0 * mean_se);
        CHECK(std::abs(m.variance - law.variance()) < 4.0 * var_se);
        CHECK(*std::min_element(xs.begin(), xs.end()) >= 0.0);
    }
}

TEST_CASE("servo valve per-step wear increment mean")
{
    const GammaLaw law(0.5 * 0.01, 1.2);
    auto rng = stream(2024);
    constexpr int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += sample_gamma(law, rng);
    const double se = std::sqrt(law.variance() / n);
    CHECK(law.mean() == doctest::Approx(0.0041667).epsilon(1e-4));
    CHECK(std::abs(sum / n - law.mean()) < 3.0 * se);
}

TEST_CASE("samplers are deterministic under a fixed seed")
{
    auto a = stream(5);
    auto b = stream(5);
    for (int i = 0; i < 1000; ++i)
    {
        CHECK(sample_gamma(GammaLaw(0.005, 1.2), a) == sample_gamma(GammaLaw(0.005, 1.2), b));
        CHECK(sample_normal(NormalLaw(1, 2), a) == sample_normal(NormalLaw(1, 2), b));
    }
}

TEST_CASE("poisson_inverse")
{
    CHECK(poisson_inverse(0.0, 0.999999) == 0);
    CHECK(poisson_inverse(2.0, 0.5) == 2);  // F(1) = 0.406, F(2) = 0.677
    CHECK_THROWS_AS(poisson_inverse(-1.0, 0.5), DomainError);
    CHECK_THROWS_AS(poisson_inverse(1.0, 1.0), DomainError);

    SUBCASE("nondecreasing in the mean for a fixed uniform")
    {
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(1e-12, 1.0 - 1e-12);
        std::uniform_real_distribution<double> mean(0.0, 0.1);
        for (int i = 0; i < 20000; ++i)
        {
            const double uu = u(gen);
            const double m1 = mean(gen);
            const double m2 = m1 + mean(gen);
            CHECK(poisson_inverse(m1, uu) <= poisson_inverse(m2, uu));
        }
    }
    SUBCASE("matches the pmf")
    {
        auto rng = stream(31);
        std::vector<double> counts(4, 0.0);
        constexpr int n = 200000;
        for (int i = 0; i < n; ++i)
            counts[std::min<std::uint64_t>(poisson_inverse(1.3, uniform_open(rng)), 3)] += 1;
        std::vector<double> expected;
        double rest = 1.0;
        for (int k = 0; k < 3; ++k)
        {
            expected.push_back(mdcf::testing::poisson_pmf(k, 1.3));
            rest -= expected.back();
        }
        expected.push_back(rest);
        // 3 degrees of freedom, 1% critical value 11.345.
        CHECK(mdcf::testing::chi_squared(counts, expected, n) < 11.345);
    }
}
