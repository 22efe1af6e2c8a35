#include <cmath>
#include <vector>

#include <doctest.h>

#include "thetasub/random.hpp"
#include "../support/oracles.hpp"

using namespace thetasub;
using doctest::Approx;

TEST_CASE("stream keys separate tag paths")
{
    CHECK(stream_key(1, {2, 3}) != stream_key(1, {3, 2}));
    CHECK(stream_key(1, {2, 3}) != stream_key(2, {2, 3}));
    CHECK(stream_key(1, {2}) != stream_key(1, {2, 0}));
    CHECK(stream_key(5, {9, 9}) == stream_key(5, {9, 9}));
}

TEST_CASE("streams are reproducible")
{
    RngStream a(stream_key(3, {1})), b(stream_key(3, {1}));
    for (int i = 0; i < 100; ++i)
        CHECK(a.normal() == b.normal());
}

TEST_CASE("uniform is on the open interval")
{
    RngStream rng(11);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i)
    {
        double const u = rng.uniform();
        REQUIRE(u > 0);
        REQUIRE(u < 1);
        xs.push_back(u);
    }
    auto const m = test::moments(xs);
    CHECK(std::abs(m.mean - 0.5) < 3 * m.se_mean);
}

TEST_CASE("normal moments")
{
    RngStream rng(12);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i)
        xs.push_back(rng.normal());
    auto const m = test::moments(xs);
    CHECK(std::abs(m.mean) < 3 * m.se_mean);
    CHECK(std::abs(m.var - 1) < 3 * m.se_var);
}

TEST_CASE("gamma variates")
{
    for (double shape : {0.01, 0.3, 1.0, 4.5})
    {
        RngStream rng(stream_key(13, {static_cast<std::uint64_t>(shape * 1000)}));
        std::vector<double> xs;
        for (int i = 0; i < 100000; ++i)
            xs.push_back(rng.gamma(shape, 2.0));
        auto const m = test::moments(xs);
        CAPTURE(shape);
        CHECK(std::abs(m.mean - shape / 2) < 3 * m.se_mean);
        CHECK(std::abs(m.var - shape / 4) < 3 * m.se_var);
    }
}

TEST_CASE("log_gamma keeps tiny shapes finite")
{
    RngStream rng(14);
    for (int i = 0; i < 10000; ++i)
    {
        double const l = rng.log_gamma(1e-4);
        REQUIRE(std::isfinite(l));
    }
}

TEST_CASE("log_beta moments")
{
    RngStream rng(15);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i)
        xs.push_back(std::exp(rng.log_beta(0.4, 1.6)));
    auto const m = test::moments(xs);
    CHECK(std::abs(m.mean - 0.2) < 3 * m.se_mean);
    double const var = 0.4 * 1.6 / (4.0 * 3.0);
    CHECK(std::abs(m.var - var) < 3 * m.se_var);
}

TEST_CASE("log_add_exp")
{
    double const inf = std::numeric_limits<double>::infinity();
    CHECK(log_add_exp(0, 0) == Approx(std::log(2.0)));
    CHECK(log_add_exp(-inf, 1.5) == 1.5);
    CHECK(log_add_exp(1000, 1000) == Approx(1000 + std::log(2.0)));
}
