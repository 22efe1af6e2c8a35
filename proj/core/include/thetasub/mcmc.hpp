#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "data.hpp"
#include "likelihood.hpp"
#include "model.hpp"
#include "paths.hpp"

namespace thetasub
{
//---------------------------------------------------------------------------//
//! Which block a sweep stage updates after the bridge refresh.
enum class Stage
{
    params,  //!< joint random walk on alpha / theta / rho (or split-gamma coords)
    beta,  //!< superposition / thinning move on beta
};

/*!
 * Random-walk scales and update schedule.
 *
 * In standard coordinates alpha, theta and rho move jointly with
 * theta' = theta + sigma_theta Z - (alpha' - alpha). In split-gamma
 * coordinates alpha, alpha1 and beta1 move independently.
 */
struct ProposalSpec
{
    double sigma_alpha{0.025};
    double sigma_theta{0.025};
    double sigma_rho{0.15};
    double sigma_beta{0.01};
    double sigma_alpha1{0.03};
    double sigma_beta1{6};
    //! Extra beta move every k-th sweep (0 disables). Ignored for known beta.
    std::size_t beta_move_period{0};
    //! Stage of sweep j is schedule[j % size].
    std::vector<Stage> schedule{Stage::params};

    //! ConfigError on non-positive scales or an empty schedule.
    void validate() const;
};

//! Outcome of one Metropolis-Hastings move.
struct MoveOutcome
{
    bool attempted{false};
    bool accepted{false};
    double log_ratio{0};  //!< log acceptance ratio (-inf for out-of-support proposals)
};

//---------------------------------------------------------------------------//
/*!
 * Sampler state: parameters plus one imputed bridge per observation interval.
 *
 * Segment paths carry absolute values, so their endpoints equal the
 * observations exactly. Per-segment bin statistics are cached.
 */
struct ChainState
{
    ModelParams params;
    std::vector<GridPath> segments;
    std::vector<BinStats> segment_stats;
    std::vector<double> obs_increments;  //!< x_{t_i} - x_{t_{i-1}}
    std::vector<double> obs_spans;  //!< t_i - t_{i-1}
    std::uint64_t seed{0};
    std::uint64_t iteration{0};
    //! Threads used by the bridge refresh; output does not depend on it.
    std::size_t workers{1};

    std::size_t segment_count() const { return segments.size(); }
    //! Sum of per-segment statistics.
    BinStats total_stats() const;
};

/*!
 * Initialise parameters and Gamma(beta, alpha) bridges through the data.
 *
 * DataError if the observations are not strictly increasing.
 */
ChainState init_chain(Observations const& obs, ModelParams const& params0,
                      std::size_t refinement, std::uint64_t seed);

//! Fresh bridge proposal for every segment, each accepted independently.
//! Returns per-segment acceptance flags.
std::vector<std::uint8_t> refresh_segments(ChainState& state);

//! As above but visiting segments in the given order, serially.
std::vector<std::uint8_t> refresh_segments(ChainState& state, std::span<std::size_t const> order);

//! Joint random-walk update of every parameter except beta.
MoveOutcome update_params(ChainState& state, ProposalSpec const& prop, PriorSpec const& prior);

/*!
 * Transdimensional beta move.
 *
 * Each segment's bridge is lifted to a Gamma(beta, alpha) path with a
 * freshly drawn total, superposed (beta' > beta) or thinned (beta' < beta)
 * increment by increment, and re-pinned to the observations. Acceptance uses
 * the prior ratio, the Gamma(beta t, alpha) density ratio at each observed
 * increment, and the psi_log ratio of the new and old paths.
 */
MoveOutcome update_beta(ChainState& state, ProposalSpec const& prop, PriorSpec const& prior);

//---------------------------------------------------------------------------//
//! One retained sample.
struct ChainRecord
{
    std::uint64_t iteration{0};
    ModelParams params;
    double segment_acceptance{0};  //!< fraction of bridges accepted this sweep
    MoveOutcome param_move;
    MoveOutcome beta_move;
};

struct RunOptions
{
    std::size_t iterations{1000};
    std::size_t burn_in{100};
    std::size_t thinning{1};
    std::size_t refinement{10};
    std::uint64_t seed{1};
    std::size_t workers{1};
};

//! Totals reported after a run.
struct RunSummary
{
    std::size_t iterations{0};
    std::size_t records{0};
    double segment_acceptance{0};
    std::size_t param_attempts{0};
    std::size_t param_accepts{0};
    std::size_t beta_attempts{0};
    std::size_t beta_accepts{0};
};

using RecordSink = std::function<void(ChainRecord const&)>;

/*!
 * Run the Metropolis-within-Gibbs sampler.
 *
 * Each sweep refreshes the bridges and then performs the scheduled stage;
 * a beta move is added every beta_move_period sweeps when beta is free.
 * Records from sweeps >= burn_in at the thinning stride go to sink.
 * ConfigError for inconsistent settings, raised before sampling starts.
 */
RunSummary run_mcmc(Observations const& obs, ModelParams const& params0, PriorSpec const& prior,
                    ProposalSpec const& prop, RunOptions const& options, RecordSink const& sink);

//! Convenience wrapper collecting all records.
std::vector<ChainRecord> run_mcmc(Observations const& obs, ModelParams const& params0,
                                  PriorSpec const& prior, ProposalSpec const& prop,
                                  RunOptions const& options);

//---------------------------------------------------------------------------//
//! Column names of chain.csv for a model with N bins.
std::vector<std::string> chain_csv_header(std::size_t bin_count, Parameterisation param);
//! One chain.csv row matching chain_csv_header.
std::string chain_csv_row(ChainRecord const& record, Parameterisation param);

}  // namespace thetasub
