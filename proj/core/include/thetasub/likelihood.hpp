#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "model.hpp"
#include "paths.hpp"

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * Per-bin sufficient statistics of a discretised path.
 *
 * Each grid increment stands in for a jump and is classified into the
 * half-open bin containing it; zero increments count towards B_0.
 * Index k runs over 0..N.
 */
struct BinStats
{
    std::vector<double> jump_sum;
    std::vector<std::int64_t> jump_count;
    double horizon{0};

    BinStats() = default;
    //! Empty statistics for N perturbed bins over the given horizon.
    BinStats(std::size_t bin_count, double horizon);

    std::size_t bin_count() const { return jump_sum.size() - 1; }
    //! Sum over all bins, i.e. X_T - X_0 up to rounding.
    double total() const;

    //! Classify the increments of one run of values.
    void add_increments(std::span<double const> values, std::span<double const> bin_edges);

    //! Combine statistics of disjoint stretches (horizons add).
    BinStats& operator+=(BinStats const& other);
};

//! Statistics of the whole path under the bins of params.
BinStats bin_stats(GridPath const& path, ModelParams const& params);

/*!
 * Log-likelihood ratio log dP_new/dP_old of a continuously observed path.
 *
 * new and old must share beta and bin edges (ContractViolation otherwise).
 */
double loglik_ratio_params(BinStats const& stats, ModelParams const& old_params,
                           ModelParams const& new_params);

/*!
 * Log ratio of theta-subordinator / Gamma(beta, alpha) densities between a
 * proposed path and the current path with the same endpoints.
 *
 * Independent of alpha. ContractViolation if the totals differ by more than
 * 1e-9 relative or the bin layouts differ.
 */
double loglik_ratio_path(BinStats const& stats_new, BinStats const& stats_old,
                         ModelParams const& params);

//! log dP/dP~ of the path against the Gamma(beta, alpha) law with the same
//! beta and alpha.
double psi_log(BinStats const& stats, ModelParams const& params);

}  // namespace thetasub
