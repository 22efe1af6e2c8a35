#include "thetasub/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thetasub/error.hpp"

namespace thetasub
{
namespace
{
constexpr double endpoint_tolerance = 1e-9;

void check_layout(BinStats const& stats, ModelParams const& params)
{
    if (stats.jump_sum.size() != params.bin_count() + 1
        || stats.jump_count.size() != params.bin_count() + 1)
    {
        throw ContractViolation("bin statistics do not match the parameter bins");
    }
}

// sum_{k=1..N} (nu - nu_ref)(B_k) where nu_ref has theta == 0.
double perturbed_mass_excess(ModelParams const& params)
{
    ModelParams const ref = params.gamma_reference();
    double excess = 0;
    for (std::size_t k = 1; k <= params.bin_count(); ++k)
        excess += nu_bin_mass(params, k) - nu_bin_mass(ref, k);
    return excess;
}

}  // namespace

BinStats::BinStats(std::size_t bin_count, double horizon_)
    : jump_sum(bin_count + 1, 0.0), jump_count(bin_count + 1, 0), horizon(horizon_)
{
}

double BinStats::total() const
{
    return std::accumulate(jump_sum.begin(), jump_sum.end(), 0.0);
}

void BinStats::add_increments(std::span<double const> values, std::span<double const> bin_edges)
{
    for (std::size_t j = 1; j < values.size(); ++j)
    {
        double const d = values[j] - values[j - 1];
        // Linear scan: N is small and most increments land in B_0.
        std::size_t k = 0;
        while (k < bin_edges.size() && d >= bin_edges[k])
            ++k;
        jump_sum[k] += d;
        ++jump_count[k];
    }
}

BinStats& BinStats::operator+=(BinStats const& other)
{
    if (other.jump_sum.size() != jump_sum.size())
        throw ContractViolation("BinStats: cannot combine different bin layouts");
    for (std::size_t k = 0; k < jump_sum.size(); ++k)
    {
        jump_sum[k] += other.jump_sum[k];
        jump_count[k] += other.jump_count[k];
    }
    horizon += other.horizon;
    return *this;
}

BinStats bin_stats(GridPath const& path, ModelParams const& params)
{
    BinStats stats(params.bin_count(), path.grid.horizon());
    stats.add_increments(path.values, params.bin_edges);
    return stats;
}

double loglik_ratio_params(BinStats const& stats, ModelParams const& old_params,
                           ModelParams const& new_params)
{
    if (old_params.beta != new_params.beta || old_params.bin_edges != new_params.bin_edges)
        throw ContractViolation("loglik_ratio_params: beta and bin edges must match");
    check_layout(stats, old_params);

    std::size_t const n = old_params.bin_count();
    double const a_old = old_params.alpha;
    double const a_new = new_params.alpha;

    double result = -(a_new - a_old) * stats.jump_sum[0];
    double nu_diff = nu_diff_bin0(a_new, a_old, old_params.beta, old_params.upper_edge(0));
    for (std::size_t k = 1; k <= n; ++k)
    {
        double const rate_change
            = (new_params.slope(k) + a_new) - (old_params.slope(k) + a_old);
        result -= rate_change * stats.jump_sum[k];
        result -= (new_params.intercept(k) - old_params.intercept(k))
                  * static_cast<double>(stats.jump_count[k]);
        nu_diff += nu_bin_mass(new_params, k) - nu_bin_mass(old_params, k);
    }
    return result - stats.horizon * nu_diff;
}

double loglik_ratio_path(BinStats const& stats_new, BinStats const& stats_old,
                         ModelParams const& params)
{
    check_layout(stats_new, params);
    check_layout(stats_old, params);
    double const total_new = stats_new.total();
    double const total_old = stats_old.total();
    if (std::fabs(total_new - total_old)
        > endpoint_tolerance * std::max(std::fabs(total_old), std::fabs(total_new)))
    {
        throw ContractViolation("loglik_ratio_path: paths do not share endpoints");
    }

    double result = 0;
    for (std::size_t k = 1; k <= params.bin_count(); ++k)
    {
        result -= params.slope(k) * (stats_new.jump_sum[k] - stats_old.jump_sum[k]);
        result -= params.intercept(k)
                  * static_cast<double>(stats_new.jump_count[k] - stats_old.jump_count[k]);
    }
    return result;
}

double psi_log(BinStats const& stats, ModelParams const& params)
{
    check_layout(stats, params);
    double result = 0;
    for (std::size_t k = 1; k <= params.bin_count(); ++k)
    {
        result -= params.slope(k) * stats.jump_sum[k];
        result -= params.intercept(k) * static_cast<double>(stats.jump_count[k]);
    }
    return result - stats.horizon * perturbed_mass_excess(params);
}

}  // namespace thetasub
