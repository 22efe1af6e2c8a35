#include <cmath>
#include <limits>

#include <doctest.h>

#include "thetasub/error.hpp"
#include "thetasub/specfun.hpp"
#include "../support/oracles.hpp"

using namespace thetasub;
using doctest::Approx;

TEST_CASE("E1 reference values")
{
    CHECK(exp_integral_e1(1.0) == Approx(0.219383934395520).epsilon(1e-13));
    CHECK(exp_integral_e1(2.0) == Approx(0.048900510708061).epsilon(1e-13));
    CHECK(exp_integral_e1(1.0) == Approx(test::quad_e1(1.0)).epsilon(1e-13));
}

TEST_CASE("E1 differences approach the Frullani limit")
{
    double const x = 1e-8;
    CHECK(exp_integral_e1(1 * x) - exp_integral_e1(2 * x) == Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("E1 domain and underflow")
{
    CHECK_THROWS_AS(exp_integral_e1(0.0), DomainError);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), DomainError);
    CHECK_THROWS_AS(exp_integral_e1(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK(exp_integral_e1(746.0) == 0.0);
    CHECK(exp_integral_e1(700.0) > 0.0);
}

TEST_CASE("E1 derivative")
{
    for (double z : {0.1, 1.0, 10.0})
    {
        double const h = 1e-5 * z;
        double const fd = (exp_integral_e1(z + h) - exp_integral_e1(z - h)) / (2 * h);
        CHECK(fd == Approx(-std::exp(-z) / z).epsilon(1e-6));
    }
}

TEST_CASE("E1 positive and decreasing")
{
    double prev = exp_integral_e1(1e-6);
    for (int i = 1; i <= 400; ++i)
    {
        double const z = 1e-6 * std::pow(1e8, i / 400.0);
        double const v = exp_integral_e1(z);
        CHECK(v > 0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("E1 agrees across the series / continued-fraction switch")
{
    for (double z : {0.999999, 1.0, 1.000001, 0.5, 1.5})
        CHECK(exp_integral_e1(z) == Approx(test::quad_e1(z)).epsilon(1e-12));
}

TEST_CASE("Ei and Ein")
{
    // Ei(1) and Ein(1) reference values
    CHECK(exp_integral_ei(1.0) == Approx(1.8951178163559368).epsilon(1e-13));
    CHECK(exp_integral_ein(1.0) == Approx(0.7965995992970531).epsilon(1e-13));
    CHECK(exp_integral_ein(0.0) == 0.0);
    for (double z : {0.5, 3.0, 30.0})
    {
        double const direct = euler_gamma + std::log(z) + exp_integral_e1(z);
        CHECK(exp_integral_ein(z) == Approx(direct).epsilon(1e-12));
    }
    CHECK(exp_integral_ei(50.0) == Approx(1.05856368971317e20).epsilon(1e-10));
}

TEST_CASE("weighted log integral against quadrature")
{
    struct Case
    {
        double c, lo, hi;
    };
    for (auto [c, lo, hi] : {Case{1, 1, 2}, Case{-0.5, 1, 4}, Case{0, 2, 5}, Case{1e-9, 1, 3},
                             Case{-3, 0.5, 6}, Case{2.2, 1e-3, 0.1}, Case{-1e-7, 4, 9}})
    {
        CAPTURE(c);
        CHECK(exp_weighted_log_integral(c, lo, hi)
              == Approx(test::quad_weighted_log(c, lo, hi)).epsilon(1e-11));
    }
    double const inf = std::numeric_limits<double>::infinity();
    CHECK(exp_weighted_log_integral(0.7, 2, inf) == Approx(exp_integral_e1(1.4)).epsilon(1e-14));
    CHECK_THROWS_AS(exp_weighted_log_integral(-1, 2, inf), DomainError);
    CHECK_THROWS_AS(exp_weighted_log_integral(1, 2, 1), DomainError);
}

TEST_CASE("gamma_logpdf")
{
    CHECK(gamma_logpdf(1, 1, 1) == Approx(-1.0).epsilon(1e-15));
    double const expect = 3 * std::log(1.5) + 2 * std::log(2.0) - 3 - std::log(2.0);
    CHECK(gamma_logpdf(2, 3, 1.5) == Approx(expect).epsilon(1e-14));

    // normalised by quadrature in u = log x, where the kernel is smooth
    auto kernel = [](double u) { return std::exp(0.1 * u - 2 * std::exp(u)); };
    double const norm = test::integrate(kernel, -500.0, 0.0)
                        + test::integrate(kernel, 0.0, std::numeric_limits<double>::infinity());
    double const ref = std::log(std::pow(0.5, -0.9) * std::exp(-1.0) / norm);
    CHECK(gamma_logpdf(0.5, 0.1, 2) == Approx(ref).epsilon(1e-9));

    CHECK_THROWS_AS(gamma_logpdf(0, 1, 1), DomainError);
    CHECK_THROWS_AS(gamma_logpdf(1, 0, 1), DomainError);
}

TEST_CASE("gamma_logpdf integrates to one")
{
    for (double shape : {0.5, 1.0, 5.0})
    {
        for (double rate : {0.5, 2.0})
        {
            // trapezoid in log x, which handles the shape < 1 singularity
            double const lo = std::log(1e-14), hi = std::log(200.0 / rate);
            int const n = 200000;
            double const ds = (hi - lo) / n;
            double sum = 0;
            for (int i = 0; i <= n; ++i)
            {
                double const s = lo + i * ds;
                double const w = (i == 0 || i == n) ? 0.5 : 1.0;
                sum += w * std::exp(gamma_logpdf(std::exp(s), shape, rate) + s);
            }
            double const missing = shape == 0.5 ? std::sqrt(rate * 1e-14 / M_PI) * 2 : 0;
            CAPTURE(shape);
            CAPTURE(rate);
            CHECK(sum * ds + missing == Approx(1.0).epsilon(1e-6));
        }
    }
}
