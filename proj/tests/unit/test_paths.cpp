#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "thetasub/error.hpp"
#include "thetasub/paths.hpp"
#include "thetasub/random.hpp"
#include "../support/oracles.hpp"

using namespace thetasub;
using doctest::Approx;

TEST_CASE("time grid")
{
    TimeGrid g({0, 1, 3}, 4);
    CHECK(g.segment_count() == 2);
    CHECK(g.point_count() == 9);
    CHECK(g.time_at(0) == 0.0);
    CHECK(g.time_at(4) == 1.0);
    CHECK(g.time_at(6) == Approx(2.0));
    CHECK(g.time_at(8) == 3.0);
    CHECK(g.step(1) == Approx(0.5));
    CHECK(g.segment_grid(1).start() == 1.0);
    CHECK_THROWS_AS(TimeGrid({0, 0}, 2), DomainError);
    CHECK_THROWS_AS(TimeGrid({0, 1}, 0), DomainError);
}

TEST_CASE("gamma path moments")
{
    TimeGrid g({0, 1}, 4);
    std::vector<double> ends;
    for (std::uint64_t s = 0; s < 100000; ++s)
    {
        auto path = sample_gamma_path(1, 1, g, s);
        ends.push_back(path.back());
    }
    auto const m = test::moments(ends);
    CHECK(std::abs(m.mean - 1) < 3 * m.se_mean);
    CHECK(std::abs(m.var - 1) < 3 * m.se_var);
}

TEST_CASE("gamma path increments positive and deterministic")
{
    TimeGrid g({0, 2, 5}, 10);
    auto a = sample_gamma_path(2, 1.5, g, 42);
    auto b = sample_gamma_path(2, 1.5, g, 42);
    CHECK(a.values == b.values);
    for (std::size_t i = 1; i < a.values.size(); ++i)
        CHECK(a.values[i] > a.values[i - 1]);
    CHECK(a.front() == 0.0);
}

TEST_CASE("bridge pinning and scale invariance")
{
    TimeGrid g({0, 1}, 8);
    auto path = sample_gamma_path(1, 1, g, 3);
    auto bridge = gamma_bridge(path, 2.0, 5.0);
    CHECK(bridge.front() == 2.0);
    CHECK(bridge.back() == 5.0);

    auto scaled = path;
    for (double& v : scaled.values)
        v *= 3.7;
    auto bridge2 = gamma_bridge(scaled, 2.0, 5.0);
    for (std::size_t i = 0; i < bridge.values.size(); ++i)
        CHECK(bridge2.values[i] == Approx(bridge.values[i]).epsilon(1e-14));

    auto flat = path;
    std::fill(flat.values.begin(), flat.values.end(), 0.0);
    CHECK_THROWS_AS(gamma_bridge(flat, 0, 1), DegenerateBridge);
}

TEST_CASE("bridge midpoint law")
{
    double const beta = 3, T = 2;
    TimeGrid g({0, T}, 2);
    std::vector<double> mids;
    for (std::uint64_t s = 0; s < 20000; ++s)
        mids.push_back(sample_gamma_bridge(beta, 1.7, g, 0, 1, s).values[1]);
    auto const m = test::moments(mids);
    CHECK(std::abs(m.mean - 0.5) < 3 * m.se_mean);
    CHECK(std::abs(m.var - 1 / (4 * (beta * T + 1))) < 3 * m.se_var);
}

TEST_CASE("bridge survives tiny shapes")
{
    TimeGrid g({0, 1}, 10);
    auto b = sample_gamma_bridge(0.004, 1, g, 1, 2, 9);
    CHECK(b.front() == 1.0);
    CHECK(b.back() == 2.0);
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("augment moments")
{
    TimeGrid g({0, 1}, 1);
    std::vector<double> xs;
    for (std::uint64_t s = 0; s < 50000; ++s)
    {
        auto p = sample_gamma_path(1, 2, g, s);
        xs.push_back(augment_path(p, 1, 2.5, 2, s + 1000000).back());
    }
    auto const m = test::moments(xs);
    CHECK(std::abs(m.mean - 2.5 / 2) < 3 * m.se_mean);
    CHECK(std::abs(m.var - 2.5 / 4) < 3 * m.se_var);
    CHECK_THROWS_AS(augment_path(sample_gamma_path(1, 2, g, 0), 2, 1, 2, 0), ContractViolation);
}

TEST_CASE("augmenting twice matches augmenting once")
{
    TimeGrid g({0, 1}, 1);
    std::vector<double> twice, once;
    for (std::uint64_t s = 0; s < 40000; ++s)
    {
        auto p = sample_gamma_path(0.5, 1, g, s);
        twice.push_back(augment_path(augment_path(p, 0.5, 1, 1, s + (1u << 20)), 1, 2, 1, s + (2u << 20)).back());
        once.push_back(augment_path(p, 0.5, 2, 1, s + (3u << 20)).back());
    }
    auto const a = test::moments(twice);
    auto const b = test::moments(once);
    CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.se_mean, b.se_mean));
    CHECK(std::abs(a.var - b.var) < 3 * std::hypot(a.se_var, b.se_var));
}

TEST_CASE("thin moments")
{
    TimeGrid g({0, 1}, 10);
    double const h = 0.1;
    std::vector<double> ratio_num, ratio_den;
    for (std::uint64_t s = 0; s < 5000; ++s)
    {
        auto p = sample_gamma_path(2, 1, g, s);
        auto t = thin_path(p, 2, 0.5, s + 1000000);
        for (std::size_t j = 1; j <= 10; ++j)
        {
            ratio_num.push_back(t.values[j] - t.values[j - 1]);
            ratio_den.push_back(p.values[j] - p.values[j - 1]);
        }
        CHECK(t.values.front() == 0.0);
    }
    auto const m = test::moments(ratio_num);
    CHECK(std::abs(m.mean - h * 0.5) < 3 * m.se_mean);
    CHECK(std::abs(m.var - h * 0.5) < 3 * m.se_var);
    CHECK_THROWS_AS(thin_path(sample_gamma_path(1, 1, g, 0), 1, 2, 0), ContractViolation);
}

TEST_CASE("thin near beta_old barely moves the path")
{
    TimeGrid g({0, 1}, 5);
    auto p = sample_gamma_path(1, 1, g, 5);
    auto t = thin_path(p, 1, 1 - 1e-9, 6);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        CHECK(t.values[i] == Approx(p.values[i]).epsilon(1e-5));
}

TEST_CASE("thin after augment restores the Gamma law")
{
    TimeGrid g({0, 1}, 1);
    std::vector<double> round_trip, fresh;
    for (std::uint64_t s = 0; s < 10000; ++s)
    {
        auto p = sample_gamma_path(1, 1, g, s);
        auto r = thin_path(augment_path(p, 1, 3, 1, s + (1u << 24)), 3, 1, s + (2u << 24));
        round_trip.push_back(r.back());
        fresh.push_back(sample_gamma_path(1, 1, g, s + (3u << 24)).back());
    }
    auto const a = test::moments(round_trip);
    CHECK(std::abs(a.mean - 1) < 3 * a.se_mean);
    CHECK(std::abs(a.var - 1) < 3 * a.se_var);
    CHECK(test::ks_two_sample_p(round_trip, fresh) > 0.01);
}

TEST_CASE("log-increment kernels")
{
    RngStream rng(1);
    std::vector<double> li(6);
    sample_log_increments(0.3, 1, li, rng);
    std::vector<double> v(7);
    REQUIRE(pin_log_increments(li, 1.0, 4.0, v));
    CHECK(v.front() == 1.0);
    CHECK(v.back() == 4.0);
    CHECK(std::is_sorted(v.begin(), v.end()));

    std::vector<double> norm(6);
    normalised_log_increments(v, norm);
    double total = 0;
    for (double l : norm)
        total += std::exp(l);
    CHECK(total == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("path csv")
{
    GridPath p{TimeGrid({0, 1}, 2), {0, 0.25, 1}};
    std::ostringstream os;
    write_path_csv(os, p);
    CHECK(os.str() == "time,value\n0,0\n0.5,0.25\n1,1\n");
}
