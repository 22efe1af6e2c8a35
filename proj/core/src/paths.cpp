#include "thetasub/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "thetasub/csv.hpp"
#include "thetasub/error.hpp"

namespace thetasub
{
namespace
{
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
constexpr double min_normal = std::numeric_limits<double>::min();

enum StreamTag : std::uint64_t
{
    tag_sample_path = 0x7061746801,
    tag_sample_bridge = 0x7061746802,
    tag_augment = 0x7061746803,
    tag_thin = 0x7061746804,
};

constexpr int max_bridge_attempts = 100;

// Rebuild cumulative values from per-point increments.
void accumulate(double start, std::span<double const> inc, std::vector<double>& values)
{
    values.resize(inc.size() + 1);
    values[0] = start;
    for (std::size_t j = 0; j < inc.size(); ++j)
        values[j + 1] = values[j] + inc[j];
}

}  // namespace

//---------------------------------------------------------------------------//
// TimeGrid
//---------------------------------------------------------------------------//
TimeGrid::TimeGrid(std::vector<double> obs_times, std::size_t m)
    : obs_times_(std::move(obs_times)), m_(m)
{
    if (obs_times_.size() < 2)
        throw DomainError("TimeGrid: need at least two observation times");
    if (m_ < 1)
        throw DomainError("TimeGrid: refinement m must be >= 1");
    for (std::size_t i = 0; i < obs_times_.size(); ++i)
    {
        if (!std::isfinite(obs_times_[i]))
            throw DomainError("TimeGrid: times must be finite");
        if (i > 0 && !(obs_times_[i] > obs_times_[i - 1]))
            throw DomainError("TimeGrid: times must be strictly increasing");
    }
}

double TimeGrid::time_at(std::size_t idx) const
{
    std::size_t const seg = idx / m_;
    std::size_t const j = idx % m_;
    if (seg >= segment_count())
        return obs_times_.back();
    if (j == 0)
        return obs_times_[seg];
    return obs_times_[seg] + static_cast<double>(j) / m_ * segment_length(seg);
}

double TimeGrid::step(std::size_t segment) const
{
    return segment_length(segment) / static_cast<double>(m_);
}

double TimeGrid::segment_length(std::size_t segment) const
{
    return obs_times_[segment + 1] - obs_times_[segment];
}

TimeGrid TimeGrid::segment_grid(std::size_t segment) const
{
    return TimeGrid({obs_times_[segment], obs_times_[segment + 1]}, m_);
}

//---------------------------------------------------------------------------//
// GridPath
//---------------------------------------------------------------------------//
std::span<double const> GridPath::segment_values(std::size_t segment) const
{
    std::size_t const m = grid.refinement();
    return std::span<double const>(values).subspan(segment * m, m + 1);
}

void GridPath::validate() const
{
    if (values.size() != grid.point_count())
        throw DomainError("GridPath: value count does not match the grid");
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (!std::isfinite(values[i]))
            throw DomainError("GridPath: values must be finite");
        if (i > 0 && values[i] < values[i - 1])
            throw DomainError("GridPath: values must be non-decreasing");
    }
}

void write_path_csv(std::ostream& os, GridPath const& path)
{
    os << "time,value\n";
    for (std::size_t i = 0; i < path.values.size(); ++i)
        os << csv::format_double(path.grid.time_at(i)) << ',' << csv::format_double(path.values[i]) << '\n';
}

//---------------------------------------------------------------------------//
// Segment kernels
//---------------------------------------------------------------------------//
void sample_log_increments(double shape, double rate, std::span<double> out, RngStream& rng)
{
    double const log_rate = std::log(rate);
    for (double& x : out)
        x = rng.log_gamma(shape) - log_rate;
}

void augment_log_increments(std::span<double> log_inc, double shape, double rate, RngStream& rng)
{
    double const log_rate = std::log(rate);
    for (double& x : log_inc)
        x = log_add_exp(x, rng.log_gamma(shape) - log_rate);
}

void thin_log_increments(std::span<double> log_inc, double keep_shape, double drop_shape,
                         RngStream& rng)
{
    for (double& x : log_inc)
        x += rng.log_beta(keep_shape, drop_shape);
}

bool pin_log_increments(std::span<double const> log_inc, double x_start, double x_end,
                        std::span<double> values)
{
    std::size_t const m = log_inc.size();
    if (values.size() != m + 1)
        throw ContractViolation("pin_log_increments: values must have one more entry than increments");

    double const top = *std::max_element(log_inc.begin(), log_inc.end());
    if (!std::isfinite(top))
        return false;

    // Partial sums of exp(l - top); ratios S_j / S_m never exceed 1.
    double total = 0;
    for (double l : log_inc)
        total += std::exp(l - top);
    if (!std::isfinite(total) || !(total > 0))
        return false;

    double const span = x_end - x_start;
    double partial = 0;
    values[0] = x_start;
    for (std::size_t j = 0; j + 1 < m; ++j)
    {
        partial += std::exp(log_inc[j] - top);
        values[j + 1] = std::min(x_start + span * (partial / total), x_end);
    }
    values[m] = x_end;
    return true;
}

void normalised_log_increments(std::span<double const> values, std::span<double> out)
{
    if (values.size() != out.size() + 1)
        throw ContractViolation("normalised_log_increments: size mismatch");
    double const log_total = std::log(values.back() - values.front());
    for (std::size_t j = 0; j < out.size(); ++j)
    {
        double const d = values[j + 1] - values[j];
        out[j] = d > 0 ? std::log(d) - log_total : neg_inf;
    }
}

//---------------------------------------------------------------------------//
// Whole-path operations
//---------------------------------------------------------------------------//
GridPath sample_gamma_path(double beta, double alpha, TimeGrid const& grid, std::uint64_t seed)
{
    if (!(beta > 0) || !(alpha > 0))
        throw DomainError("sample_gamma_path: beta and alpha must be > 0");
    std::size_t const m = grid.refinement();
    std::vector<double> inc(grid.point_count() - 1);
    for (std::size_t seg = 0; seg < grid.segment_count(); ++seg)
    {
        RngStream rng(stream_key(seed, {tag_sample_path, seg}));
        double const shape = beta * grid.step(seg);
        for (std::size_t j = 0; j < m; ++j)
            inc[seg * m + j] = rng.gamma(shape, alpha);
    }
    GridPath path{grid, {}};
    accumulate(0.0, inc, path.values);
    return path;
}

GridPath gamma_bridge(GridPath const& path, double x_start, double x_end)
{
    if (path.values.empty() || path.values.front() != 0.0)
        throw ContractViolation("gamma_bridge: input path must start at 0");
    if (!(x_end > x_start))
        throw ContractViolation("gamma_bridge: need x_end > x_start");
    double const total = path.values.back();
    if (!(total > 0) || !std::isfinite(total))
        throw DegenerateBridge("gamma_bridge: final value of the input path is not positive");

    std::size_t const n = path.values.size() - 1;
    std::vector<double> partial(n);
    double sum = 0;
    for (std::size_t j = 0; j < n; ++j)
    {
        sum += std::max(path.values[j + 1] - path.values[j], min_normal);
        partial[j] = sum;
    }

    GridPath out{path.grid, std::vector<double>(n + 1)};
    double const span = x_end - x_start;
    out.values[0] = x_start;
    for (std::size_t j = 0; j + 1 < n; ++j)
        out.values[j + 1] = std::min(x_start + span * (partial[j] / sum), x_end);
    out.values[n] = x_end;
    return out;
}

GridPath sample_gamma_bridge(double beta, double alpha, TimeGrid const& grid,
                             double x_start, double x_end, std::uint64_t seed)
{
    if (!(beta > 0) || !(alpha > 0))
        throw DomainError("sample_gamma_bridge: beta and alpha must be > 0");
    if (!(x_end > x_start))
        throw ContractViolation("sample_gamma_bridge: need x_end > x_start");

    std::size_t const m = grid.refinement();
    std::size_t const n = grid.point_count() - 1;
    std::vector<double> log_inc(n);
    for (int attempt = 0; attempt < max_bridge_attempts; ++attempt)
    {
        for (std::size_t seg = 0; seg < grid.segment_count(); ++seg)
        {
            RngStream rng(stream_key(seed, {tag_sample_bridge, static_cast<std::uint64_t>(attempt), seg}));
            sample_log_increments(beta * grid.step(seg), alpha,
                                  std::span<double>(log_inc).subspan(seg * m, m), rng);
        }
        GridPath out{grid, std::vector<double>(n + 1)};
        if (pin_log_increments(log_inc, x_start, x_end, out.values))
            return out;
    }
    throw DegenerateBridge("sample_gamma_bridge: no usable proposal after 100 attempts");
}

GridPath augment_path(GridPath const& path, double beta_old, double beta_new, double alpha,
                      std::uint64_t seed)
{
    if (!(beta_new > beta_old))
        throw ContractViolation("augment_path: need beta_new > beta_old");
    if (!(beta_old > 0) || !(alpha > 0))
        throw DomainError("augment_path: beta_old and alpha must be > 0");

    TimeGrid const& grid = path.grid;
    std::size_t const m = grid.refinement();
    std::vector<double> inc(path.values.size() - 1);
    for (std::size_t seg = 0; seg < grid.segment_count(); ++seg)
    {
        RngStream rng(stream_key(seed, {tag_augment, seg}));
        double const shape = (beta_new - beta_old) * grid.step(seg);
        for (std::size_t j = 0; j < m; ++j)
        {
            std::size_t const idx = seg * m + j;
            inc[idx] = (path.values[idx + 1] - path.values[idx]) + rng.gamma(shape, alpha);
        }
    }
    GridPath out{grid, {}};
    accumulate(path.values.front(), inc, out.values);
    return out;
}

GridPath thin_path(GridPath const& path, double beta_old, double beta_new, std::uint64_t seed)
{
    if (!(beta_new > 0) || !(beta_new < beta_old))
        throw ContractViolation("thin_path: need 0 < beta_new < beta_old");

    TimeGrid const& grid = path.grid;
    std::size_t const m = grid.refinement();
    std::vector<double> inc(path.values.size() - 1);
    for (std::size_t seg = 0; seg < grid.segment_count(); ++seg)
    {
        RngStream rng(stream_key(seed, {tag_thin, seg}));
        double const h = grid.step(seg);
        for (std::size_t j = 0; j < m; ++j)
        {
            std::size_t const idx = seg * m + j;
            double const factor = std::exp(rng.log_beta(h * beta_new, h * (beta_old - beta_new)));
            inc[idx] = (path.values[idx + 1] - path.values[idx]) * factor;
        }
    }
    GridPath out{grid, {}};
    accumulate(path.values.front(), inc, out.values);
    return out;
}

}  // namespace thetasub
