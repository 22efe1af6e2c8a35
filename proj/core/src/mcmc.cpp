#include "thetasub/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "thetasub/csv.hpp"
#include "thetasub/error.hpp"
#include "thetasub/random.hpp"
#include "thetasub/specfun.hpp"

namespace thetasub
{
namespace
{
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

enum StreamTag : std::uint64_t
{
    tag_init = 0x6d636d63'01,
    tag_refresh = 0x6d636d63'02,
    tag_params = 0x6d636d63'03,
    tag_beta = 0x6d636d63'04,
    tag_beta_segment = 0x6d636d63'05,
};

// Scratch for one segment proposal.
struct SegmentScratch
{
    std::vector<double> log_inc;
    std::vector<double> values;
};

BinStats segment_stats_of(std::span<double const> values, ModelParams const& params, double span)
{
    BinStats stats(params.bin_count(), span);
    stats.add_increments(values, params.bin_edges);
    return stats;
}

bool refresh_one(ChainState& state, std::size_t i, SegmentScratch& scratch)
{
    ModelParams const& params = state.params;
    GridPath& seg = state.segments[i];
    std::size_t const m = seg.grid.refinement();
    scratch.log_inc.resize(m);
    scratch.values.resize(m + 1);

    RngStream rng(stream_key(state.seed, {tag_refresh, state.iteration, i}));
    sample_log_increments(params.beta * seg.grid.step(0), params.alpha, scratch.log_inc, rng);
    double const u = rng.uniform();
    if (!pin_log_increments(scratch.log_inc, seg.values.front(), seg.values.back(), scratch.values))
        return false;

    BinStats proposal = segment_stats_of(scratch.values, params, state.obs_spans[i]);
    double const log_ratio = loglik_ratio_path(proposal, state.segment_stats[i], params);
    if (std::log(u) <= log_ratio)
    {
        std::copy(scratch.values.begin(), scratch.values.end(), seg.values.begin());
        state.segment_stats[i] = std::move(proposal);
        return true;
    }
    return false;
}

// Propose beta' and the matching parameter vector. In split-gamma
// coordinates beta1 = beta e^{-rho_1} is held fixed.
ModelParams propose_beta(ModelParams const& current, double new_beta, Parameterisation param)
{
    ModelParams proposal = current;
    proposal.beta = new_beta;
    if (param == Parameterisation::split_gamma && new_beta > 0)
        proposal.theta_intercepts[0] += std::log(new_beta / current.beta);
    return proposal;
}

bool params_valid(ModelParams const& p)
{
    return p.alpha > 0 && std::isfinite(p.alpha) && p.beta > 0 && std::isfinite(p.beta)
           && p.tail_integrable();
}

template<class F>
void parallel_for(std::size_t count, std::size_t workers, F&& body)
{
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1)
    {
        body(std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t const chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
    {
        std::size_t const lo = w * chunk;
        std::size_t const hi = std::min(count, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool)
        t.join();
}

}  // namespace

//---------------------------------------------------------------------------//
void ProposalSpec::validate() const
{
    for (double s : {sigma_alpha, sigma_theta, sigma_rho, sigma_beta, sigma_alpha1, sigma_beta1})
    {
        if (!(s > 0) || !std::isfinite(s))
            throw ConfigError("proposal: every random-walk sigma must be finite and > 0");
    }
    if (schedule.empty())
        throw ConfigError("proposal: update schedule must not be empty");
}

BinStats ChainState::total_stats() const
{
    BinStats total(params.bin_count(), 0.0);
    for (auto const& s : segment_stats)
        total += s;
    return total;
}

//---------------------------------------------------------------------------//
ChainState init_chain(Observations const& obs, ModelParams const& params0,
                      std::size_t refinement, std::uint64_t seed)
{
    obs.validate();
    params0.validate();
    if (refinement < 1)
        throw ConfigError("init_chain: refinement must be >= 1");

    ChainState state;
    state.params = params0;
    state.seed = seed;
    std::size_t const n = obs.increment_count();
    state.segments.reserve(n);
    state.segment_stats.reserve(n);

    std::vector<double> log_inc(refinement);
    for (std::size_t i = 0; i < n; ++i)
    {
        TimeGrid grid({obs.times[i], obs.times[i + 1]}, refinement);
        GridPath seg{grid, std::vector<double>(refinement + 1)};
        RngStream rng(stream_key(seed, {tag_init, i}));
        sample_log_increments(params0.beta * grid.step(0), params0.alpha, log_inc, rng);
        if (!pin_log_increments(log_inc, obs.values[i], obs.values[i + 1], seg.values))
            throw DegenerateBridge("init_chain: could not build an initial bridge");
        state.obs_spans.push_back(grid.horizon());
        state.obs_increments.push_back(obs.values[i + 1] - obs.values[i]);
        state.segment_stats.push_back(segment_stats_of(seg.values, params0, grid.horizon()));
        state.segments.push_back(std::move(seg));
    }
    return state;
}

std::vector<std::uint8_t> refresh_segments(ChainState& state)
{
    std::vector<std::uint8_t> accepted(state.segment_count(), 0);
    parallel_for(state.segment_count(), state.workers, [&](std::size_t lo, std::size_t hi) {
        SegmentScratch scratch;
        for (std::size_t i = lo; i < hi; ++i)
            accepted[i] = refresh_one(state, i, scratch) ? 1 : 0;
    });
    return accepted;
}

std::vector<std::uint8_t> refresh_segments(ChainState& state, std::span<std::size_t const> order)
{
    std::vector<std::uint8_t> accepted(state.segment_count(), 0);
    SegmentScratch scratch;
    for (std::size_t i : order)
    {
        if (i >= state.segment_count())
            throw ContractViolation("refresh_segments: segment index out of range");
        accepted[i] = refresh_one(state, i, scratch) ? 1 : 0;
    }
    return accepted;
}

MoveOutcome update_params(ChainState& state, ProposalSpec const& prop, PriorSpec const& prior)
{
    MoveOutcome outcome;
    outcome.attempted = true;

    ModelParams const& current = state.params;
    RngStream rng(stream_key(state.seed, {tag_params, state.iteration}));
    ModelParams proposal = current;

    if (prior.parameterisation == Parameterisation::split_gamma)
    {
        auto view = SplitGammaView::from(current);
        view.alpha += prop.sigma_alpha * rng.normal();
        view.alpha1 += prop.sigma_alpha1 * rng.normal();
        view.beta1 += prop.sigma_beta1 * rng.normal();
        if (view.beta1 > 0)
            proposal = view.to_params(current.bin_edges[0]);
        else
            proposal.alpha = std::numeric_limits<double>::quiet_NaN();
    }
    else
    {
        proposal.alpha = current.alpha + prop.sigma_alpha * rng.normal();
        double const shift = proposal.alpha - current.alpha;
        for (auto& t : proposal.theta_slopes)
            t += prop.sigma_theta * rng.normal() - shift;
        for (auto& r : proposal.theta_intercepts)
            r += prop.sigma_rho * rng.normal();
    }
    double const u = rng.uniform();

    if (!params_valid(proposal))
    {
        outcome.log_ratio = neg_inf;
        return outcome;
    }
    double const lp_new = prior_logpdf(prior, proposal);
    if (!std::isfinite(lp_new))
    {
        outcome.log_ratio = neg_inf;
        return outcome;
    }
    double const lp_old = prior_logpdf(prior, current);
    outcome.log_ratio
        = loglik_ratio_params(state.total_stats(), current, proposal) + lp_new - lp_old;
    if (std::log(u) <= outcome.log_ratio)
    {
        outcome.accepted = true;
        state.params = std::move(proposal);
    }
    return outcome;
}

MoveOutcome update_beta(ChainState& state, ProposalSpec const& prop, PriorSpec const& prior)
{
    MoveOutcome outcome;
    if (!prior.beta_free())
        return outcome;
    outcome.attempted = true;

    ModelParams const& current = state.params;
    RngStream rng(stream_key(state.seed, {tag_beta, state.iteration}));
    double const new_beta = current.beta + prop.sigma_beta * rng.normal();
    double const u = rng.uniform();

    ModelParams proposal = propose_beta(current, new_beta, prior.parameterisation);
    if (!params_valid(proposal))
    {
        outcome.log_ratio = neg_inf;
        return outcome;
    }
    double const lp_new = prior_logpdf(prior, proposal);
    if (!std::isfinite(lp_new))
    {
        outcome.log_ratio = neg_inf;
        return outcome;
    }
    double log_ratio = lp_new - prior_logpdf(prior, current);

    std::size_t const n = state.segment_count();
    double const beta = current.beta;
    double const alpha = current.alpha;

    // Density of the observed increments under the Gamma(beta, alpha) law.
    for (std::size_t i = 0; i < n; ++i)
    {
        double const x = state.obs_increments[i];
        double const t = state.obs_spans[i];
        log_ratio += gamma_logpdf(x, new_beta * t, alpha) - gamma_logpdf(x, beta * t, alpha);
    }

    std::vector<GridPath> new_segments;
    std::vector<BinStats> new_stats;
    if (new_beta != beta)
    {
        new_segments = state.segments;
        new_stats.resize(n);
        parallel_for(n, state.workers, [&](std::size_t lo, std::size_t hi) {
            std::vector<double> log_inc;
            for (std::size_t i = lo; i < hi; ++i)
            {
                GridPath& seg = new_segments[i];
                std::size_t const m = seg.grid.refinement();
                double const h = seg.grid.step(0);
                log_inc.resize(m);
                RngStream seg_rng(stream_key(state.seed, {tag_beta_segment, state.iteration, i}));

                // Lift the bridge to a Gamma(beta, alpha) path: the total of
                // such a path is independent of its normalised increments.
                normalised_log_increments(seg.values, log_inc);
                double const log_total = seg_rng.log_gamma(beta * state.obs_spans[i]) - std::log(alpha);
                for (double& l : log_inc)
                    l += log_total;

                if (new_beta > beta)
                    augment_log_increments(log_inc, h * (new_beta - beta), alpha, seg_rng);
                else
                    thin_log_increments(log_inc, h * new_beta, h * (beta - new_beta), seg_rng);

                double const x0 = seg.values.front();
                double const x1 = seg.values.back();
                if (!pin_log_increments(log_inc, x0, x1, seg.values))
                    throw DegenerateBridge("update_beta: transformed segment cannot be pinned");
                new_stats[i] = segment_stats_of(seg.values, proposal, state.obs_spans[i]);
            }
        });

        BinStats total_new(proposal.bin_count(), 0.0);
        for (auto const& s : new_stats)
            total_new += s;
        log_ratio += psi_log(total_new, proposal) - psi_log(state.total_stats(), current);
    }
    else
    {
        BinStats const total = state.total_stats();
        log_ratio += psi_log(total, proposal) - psi_log(total, current);
    }

    outcome.log_ratio = log_ratio;
    if (std::log(u) <= log_ratio)
    {
        outcome.accepted = true;
        state.params = std::move(proposal);
        if (new_beta != beta)
        {
            state.segments = std::move(new_segments);
            state.segment_stats = std::move(new_stats);
        }
    }
    return outcome;
}

//---------------------------------------------------------------------------//
RunSummary run_mcmc(Observations const& obs, ModelParams const& params0, PriorSpec const& prior,
                    ProposalSpec const& prop, RunOptions const& options, RecordSink const& sink)
{
    // Configuration checks, all before the first sweep.
    obs.validate();
    params0.validate();
    prior.check_covers(params0);
    prop.validate();
    if (options.thinning < 1)
        throw ConfigError("run_mcmc: thinning must be >= 1");
    if (options.burn_in > options.iterations)
        throw ConfigError("run_mcmc: burn-in exceeds the number of iterations");
    if (options.refinement < 1)
        throw ConfigError("run_mcmc: refinement must be >= 1");
    if (options.workers < 1)
        throw ConfigError("run_mcmc: workers must be >= 1");
    bool const schedules_beta
        = std::find(prop.schedule.begin(), prop.schedule.end(), Stage::beta) != prop.schedule.end();
    if (schedules_beta && !prior.beta_free())
        throw ConfigError("run_mcmc: schedule updates beta but beta has no prior (known beta)");
    if (!std::isfinite(prior_logpdf(prior, params0)))
        throw ConfigError("run_mcmc: initial parameters lie outside the prior support");

    ChainState state = init_chain(obs, params0, options.refinement, options.seed);
    state.workers = options.workers;

    RunSummary summary;
    double accept_total = 0;
    for (std::size_t it = 0; it < options.iterations; ++it)
    {
        state.iteration = it;
        ChainRecord record;
        auto const flags = refresh_segments(state);
        std::size_t const n_acc = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
        record.segment_acceptance
            = flags.empty() ? 1.0 : static_cast<double>(n_acc) / static_cast<double>(flags.size());
        accept_total += record.segment_acceptance;

        Stage const stage = prop.schedule[it % prop.schedule.size()];
        if (stage == Stage::params)
            record.param_move = update_params(state, prop, prior);
        else
            record.beta_move = update_beta(state, prop, prior);

        if (prior.beta_free() && prop.beta_move_period > 0 && (it + 1) % prop.beta_move_period == 0
            && !record.beta_move.attempted)
        {
            record.beta_move = update_beta(state, prop, prior);
        }

        summary.param_attempts += record.param_move.attempted;
        summary.param_accepts += record.param_move.accepted;
        summary.beta_attempts += record.beta_move.attempted;
        summary.beta_accepts += record.beta_move.accepted;

        if (it >= options.burn_in && (it - options.burn_in) % options.thinning == 0)
        {
            record.iteration = it;
            record.params = state.params;
            if (sink)
                sink(record);
            ++summary.records;
        }
    }
    summary.iterations = options.iterations;
    summary.segment_acceptance
        = options.iterations > 0 ? accept_total / static_cast<double>(options.iterations) : 0.0;
    return summary;
}

std::vector<ChainRecord> run_mcmc(Observations const& obs, ModelParams const& params0,
                                  PriorSpec const& prior, ProposalSpec const& prop,
                                  RunOptions const& options)
{
    std::vector<ChainRecord> records;
    run_mcmc(obs, params0, prior, prop, options,
             [&records](ChainRecord const& r) { records.push_back(r); });
    return records;
}

//---------------------------------------------------------------------------//
std::vector<std::string> chain_csv_header(std::size_t bin_count, Parameterisation param)
{
    std::vector<std::string> cols{"iteration", "alpha", "beta"};
    for (std::size_t k = 1; k <= bin_count; ++k)
        cols.push_back("theta_" + std::to_string(k));
    for (std::size_t k = 1; k <= bin_count; ++k)
        cols.push_back("rho_" + std::to_string(k));
    if (param == Parameterisation::split_gamma)
    {
        cols.emplace_back("alpha_1");
        cols.emplace_back("beta_1");
    }
    for (char const* c : {"segment_acceptance", "param_accepted", "beta_accepted",
                          "param_log_ratio", "beta_log_ratio"})
    {
        cols.emplace_back(c);
    }
    return cols;
}

std::string chain_csv_row(ChainRecord const& record, Parameterisation param)
{
    using csv::format_double;
    auto flag = [](MoveOutcome const& m) {
        return m.attempted ? (m.accepted ? "1" : "0") : "-1";
    };
    ModelParams const& p = record.params;
    std::string row = std::to_string(record.iteration);
    row += ',' + format_double(p.alpha);
    row += ',' + format_double(p.beta);
    for (double t : p.theta_slopes)
        row += ',' + format_double(t);
    for (double r : p.theta_intercepts)
        row += ',' + format_double(r);
    if (param == Parameterisation::split_gamma)
    {
        auto const view = SplitGammaView::from(p);
        row += ',' + format_double(view.alpha1);
        row += ',' + format_double(view.beta1);
    }
    row += ',' + format_double(record.segment_acceptance);
    row += ',';
    row += flag(record.param_move);
    row += ',';
    row += flag(record.beta_move);
    row += ',' + format_double(record.param_move.attempted ? record.param_move.log_ratio : 0.0);
    row += ',' + format_double(record.beta_move.attempted ? record.beta_move.log_ratio : 0.0);
    return row;
}

}  // namespace thetasub
