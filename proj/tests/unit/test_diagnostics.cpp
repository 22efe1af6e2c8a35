#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "thetasub/diagnostics.hpp"
#include "thetasub/error.hpp"
#include "thetasub/random.hpp"

using namespace thetasub;
using doctest::Approx;

namespace
{
ModelParams with_alpha(double alpha)
{
    ModelParams p;
    p.alpha = alpha;
    p.beta = 0.5;
    p.bin_edges = {1, 2};
    p.theta_slopes = {0, 0};
    p.theta_intercepts = {0, 0};
    return p;
}

std::string slurp(std::filesystem::path const& p)
{
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}
}  // namespace

TEST_CASE("running average")
{
    CHECK(running_average(std::vector<double>{3, 3, 3}) == std::vector<double>{3, 3, 3});
    CHECK(running_average(std::vector<double>{0, 1}) == std::vector<double>{0, 0.5});
    CHECK_THROWS_AS(running_average(std::vector<double>{}), DomainError);

    RngStream rng(1);
    std::vector<double> xs;
    double sum = 0;
    for (int i = 0; i < 1000; ++i)
    {
        xs.push_back(rng.normal());
        sum += xs.back();
    }
    CHECK(running_average(xs).back() == Approx(sum / 1000).epsilon(1e-15));
}

TEST_CASE("quantile interpolation")
{
    std::vector<double> s{1, 2, 3, 4};
    CHECK(quantile(s, 0) == 1);
    CHECK(quantile(s, 1) == 4);
    CHECK(quantile(s, 0.5) == Approx(2.5));
    CHECK(quantile(s, 1.0 / 3) == Approx(2));
}

TEST_CASE("credible band")
{
    BandSpec spec;
    spec.x_grid = {0.5, 1, 3};
    std::vector<ModelParams> same(5, with_alpha(1.3));
    auto b = credible_band(same, spec);
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(b.lo[i] == Approx(1.3 * spec.x_grid[i]));
        CHECK(b.hi[i] == Approx(1.3 * spec.x_grid[i]));
    }

    spec.level = 0.999999;
    std::vector<ModelParams> two{with_alpha(1), with_alpha(2)};
    auto wide = credible_band(two, spec);
    CHECK(wide.lo[2] == Approx(3).epsilon(1e-5));
    CHECK(wide.hi[2] == Approx(6).epsilon(1e-5));

    // theta == 0: band is x times quantiles of alpha
    spec.level = 0.9;
    std::vector<ModelParams> many;
    std::vector<double> alphas;
    RngStream rng(3);
    for (int i = 0; i < 200; ++i)
    {
        alphas.push_back(1 + rng.uniform());
        many.push_back(with_alpha(alphas.back()));
    }
    std::sort(alphas.begin(), alphas.end());
    auto band = credible_band(many, spec);
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(band.lo[i] == Approx(spec.x_grid[i] * quantile(alphas, 0.05)));
        CHECK(band.hi[i] == Approx(spec.x_grid[i] * quantile(alphas, 0.95)));
        CHECK(band.lo[i] <= band.hi[i]);
    }

    spec.level = 1;
    CHECK_THROWS_AS(credible_band(many, spec), DomainError);
    spec.level = 0.9;
    CHECK_THROWS_AS(credible_band(std::vector<ModelParams>{with_alpha(1)}, spec), DomainError);
}

TEST_CASE("neg log x v functional")
{
    auto p = with_alpha(1.2);
    p.theta_slopes = {0.3, 0.1};
    double const x = 1.5;
    CHECK(band_functional(p, x, BandFunctional::neg_log_xv)
          == Approx(-std::log(x * levy_density(p, x))).epsilon(1e-14));
}

TEST_CASE("histogram")
{
    auto single = histogram(std::vector<double>{2, 2, 2}, 4);
    std::size_t nonzero = 0;
    for (auto c : single.counts)
        nonzero += c > 0;
    CHECK(nonzero == 1);

    std::vector<double> grid;
    for (int i = 0; i < 100; ++i)
        grid.push_back(i + 0.5);
    auto h = histogram(grid, 10);
    for (auto c : h.counts)
        CHECK(c == 10);
    CHECK(h.edges.front() == 0.5);
    CHECK(h.edges.back() == 99.5);
}

TEST_CASE("chain table and emitters are deterministic")
{
    std::string const chain = "iteration,alpha,beta,theta_1,rho_1,segment_acceptance\n"
                              "0,1.5,0.4,0.1,0.2,1\n1,1.6,0.4,0.0,0.1,0.9\n2,1.7,0.4,-0.1,0,1\n";
    std::istringstream is(chain);
    auto table = read_chain_csv(is);
    CHECK(table.row_count() == 3);
    CHECK(table.column("alpha")[2] == 1.7);
    CHECK_THROWS_AS(table.column("nope"), DataError);
    auto params = table.params({1.0});
    CHECK(params[1].theta_intercepts[0] == 0.1);
    CHECK_THROWS_AS(table.params({}), DataError);

    auto dir = std::filesystem::temp_directory_path() / "thetasub_diag_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    emit_trace(dir, table, "alpha");
    emit_histogram(dir, table, "alpha", 3);
    BandSpec spec;
    spec.x_grid = BandSpec::uniform_grid(4, 8);
    emit_band(dir, credible_band(params, spec));
    auto const first = slurp(dir / "trace_alpha.csv") + slurp(dir / "band.svg");
    emit_trace(dir, table, "alpha");
    emit_band(dir, credible_band(params, spec));
    CHECK(first == slurp(dir / "trace_alpha.csv") + slurp(dir / "band.svg"));
    CHECK(slurp(dir / "trace_alpha.csv").rfind("iteration,alpha,running_average\n0,1.5,1.5\n", 0) == 0);
    CHECK(std::filesystem::exists(dir / "hist_alpha.svg"));
    std::filesystem::remove_all(dir);
}
