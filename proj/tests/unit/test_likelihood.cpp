#include <cmath>
#include <vector>

#include <doctest.h>

#include "thetasub/error.hpp"
#include "thetasub/likelihood.hpp"
#include "thetasub/random.hpp"
#include "../support/oracles.hpp"

using namespace thetasub;
using doctest::Approx;

namespace
{
ModelParams three_bins(double alpha, std::vector<double> slopes, std::vector<double> intercepts)
{
    ModelParams p;
    p.alpha = alpha;
    p.beta = 0.44;
    p.bin_edges = {1, 2, 4};
    p.theta_slopes = std::move(slopes);
    p.theta_intercepts = std::move(intercepts);
    return p;
}

ModelParams random_params(RngStream& rng)
{
    double const alpha = 0.5 + 2 * rng.uniform();
    std::vector<double> s, r;
    for (int k = 0; k < 3; ++k)
    {
        s.push_back(-0.4 + rng.uniform());
        r.push_back(-1 + 2 * rng.uniform());
    }
    return three_bins(alpha, s, r);
}

BinStats random_stats(RngStream& rng)
{
    BinStats st(3, 5 + 10 * rng.uniform());
    for (std::size_t k = 0; k <= 3; ++k)
    {
        st.jump_count[k] = static_cast<std::int64_t>(20 * rng.uniform());
        st.jump_sum[k] = static_cast<double>(st.jump_count[k]) * (k + 0.5);
    }
    return st;
}
}  // namespace

TEST_CASE("bin statistics")
{
    ModelParams p = three_bins(1, {0, 0, 0}, {0, 0, 0});
    GridPath one{TimeGrid({0, 1}, 1), {0, 1.5}};
    auto st = bin_stats(one, p);
    CHECK(st.jump_sum == std::vector<double>{0, 1.5, 0, 0});
    CHECK(st.jump_count == std::vector<std::int64_t>{0, 1, 0, 0});

    GridPath flat{TimeGrid({0, 1}, 3), {2, 2, 2, 2}};
    auto fs = bin_stats(flat, p);
    CHECK(fs.jump_count[0] == 3);
    CHECK(fs.total() == 0.0);

    // edge values go to the right bin
    GridPath edges{TimeGrid({0, 1}, 3), {0, 1, 3, 7}};
    auto es = bin_stats(edges, p);
    CHECK(es.jump_count == std::vector<std::int64_t>{0, 1, 1, 1});

    auto path = sample_gamma_path(1, 0.5, TimeGrid({0, 4}, 40), 3);
    CHECK(bin_stats(path, p).total() == Approx(path.back() - path.front()).epsilon(1e-14));
}

TEST_CASE("parameter ratio basics")
{
    RngStream rng(2);
    auto a = random_params(rng);
    auto b = random_params(rng);
    auto st = random_stats(rng);
    CHECK(loglik_ratio_params(st, a, a) == 0.0);
    CHECK(loglik_ratio_params(st, a, b) == Approx(-loglik_ratio_params(st, b, a)).epsilon(1e-12));

    auto other_beta = b;
    other_beta.beta = 1;
    CHECK_THROWS_AS(loglik_ratio_params(st, a, other_beta), ContractViolation);
}

TEST_CASE("parameter ratio hand case")
{
    ModelParams old_p;
    old_p.alpha = 1;
    old_p.beta = 1;
    old_p.bin_edges = {1};
    old_p.theta_slopes = {0};
    old_p.theta_intercepts = {0};
    auto new_p = old_p;
    new_p.theta_slopes = {0.2};
    new_p.theta_intercepts = {0.1};

    GridPath path{TimeGrid({0, 1}, 1), {0, 1.5}};
    auto st = bin_stats(path, old_p);
    double const mass_diff = std::exp(-0.1) * test::quad_e1(1.2) - test::quad_e1(1.0);
    double const expect = -0.2 * 1.5 - 0.1 * 1 - 1 * mass_diff;
    CHECK(loglik_ratio_params(st, old_p, new_p) == Approx(expect).epsilon(1e-12));
    CHECK(psi_log(st, new_p) == Approx(expect).epsilon(1e-12));
}

TEST_CASE("parameter ratio chain rule")
{
    RngStream rng(3);
    for (int i = 0; i < 200; ++i)
    {
        auto a = random_params(rng);
        auto b = random_params(rng);
        auto c = random_params(rng);
        auto st = random_stats(rng);
        double const lhs = loglik_ratio_params(st, a, b) + loglik_ratio_params(st, b, c);
        CHECK(lhs == Approx(loglik_ratio_params(st, a, c)).epsilon(1e-10).scale(1));
    }
}

TEST_CASE("Gamma model ratio for N = 0")
{
    ModelParams a, b;
    a.alpha = 1.2;
    b.alpha = 0.7;
    a.beta = b.beta = 0.9;
    BinStats st(0, 3);
    st.jump_sum[0] = 2.5;
    double const expect = -(0.7 - 1.2) * 2.5 + 0.9 * 3 * std::log(0.7 / 1.2);
    CHECK(loglik_ratio_params(st, a, b) == Approx(expect).epsilon(1e-14));
}

TEST_CASE("path ratio")
{
    ModelParams gamma = three_bins(1, {0, 0, 0}, {0, 0, 0});
    ModelParams p = three_bins(1, {0.3, -0.2, 0.4}, {0.5, -0.3, 0.1});
    TimeGrid g({0, 5}, 50);
    auto x = sample_gamma_bridge(0.44, 1, g, 0, 6, 1);
    auto y = sample_gamma_bridge(0.44, 1, g, 0, 6, 2);
    auto sx = bin_stats(x, p);
    auto sy = bin_stats(y, p);

    CHECK(loglik_ratio_path(sx, sx, p) == 0.0);
    CHECK(loglik_ratio_path(sx, sy, gamma) == 0.0);
    // alpha itself never enters the path ratio
    auto alpha_only = p;
    alpha_only.alpha = 1.7;
    CHECK(loglik_ratio_path(sx, sy, alpha_only) == loglik_ratio_path(sx, sy, p));
    CHECK(loglik_ratio_path(sx, sy, p)
          == Approx(psi_log(sx, p) - psi_log(sy, p)).epsilon(1e-12).scale(1));

    auto z = sample_gamma_bridge(0.44, 1, g, 0, 7, 3);
    CHECK_THROWS_AS(loglik_ratio_path(bin_stats(z, p), sx, p), ContractViolation);
}

TEST_CASE("path ratio literal form under a common theta shift")
{
    // Adding c to every theta_k changes the ratio by -c times the change in
    // perturbed-bin jump sums; nothing else.
    ModelParams p = three_bins(1, {0.3, -0.2, 0.4}, {0.5, -0.3, 0.1});
    auto q = p;
    for (auto& s : q.theta_slopes)
        s += 0.25;
    TimeGrid g({0, 5}, 50);
    auto sx = bin_stats(sample_gamma_bridge(0.44, 1, g, 0, 6, 4), p);
    auto sy = bin_stats(sample_gamma_bridge(0.44, 1, g, 0, 6, 5), p);
    double const perturbed = (sx.total() - sx.jump_sum[0]) - (sy.total() - sy.jump_sum[0]);
    CHECK(loglik_ratio_path(sx, sy, q)
          == Approx(loglik_ratio_path(sx, sy, p) - 0.25 * perturbed).epsilon(1e-12).scale(1));
}

TEST_CASE("psi_log vanishes for the Gamma model")
{
    ModelParams gamma = three_bins(1, {0, 0, 0}, {0, 0, 0});
    RngStream rng(9);
    CHECK(psi_log(random_stats(rng), gamma) == 0.0);
}
