#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "random.hpp"

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * Observation times refined by m equal substeps per interval.
 *
 * Grid points are t_{i,j} = t_{i-1} + (j/m)(t_i - t_{i-1}) for j = 0..m-1
 * plus the final time, so there are n*m + 1 points for n intervals.
 */
class TimeGrid
{
  public:
    TimeGrid() = default;
    //! DomainError unless times are strictly increasing (>= 2) and m >= 1.
    TimeGrid(std::vector<double> obs_times, std::size_t m);

    std::vector<double> const& obs_times() const { return obs_times_; }
    std::size_t refinement() const { return m_; }
    std::size_t segment_count() const { return obs_times_.size() - 1; }
    std::size_t point_count() const { return segment_count() * m_ + 1; }

    double start() const { return obs_times_.front(); }
    double end() const { return obs_times_.back(); }
    double horizon() const { return end() - start(); }

    //! Time of grid point idx in 0..point_count()-1.
    double time_at(std::size_t idx) const;
    //! Substep length of segment i (0-based).
    double step(std::size_t segment) const;
    //! Length t_{i+1} - t_i of segment i (0-based).
    double segment_length(std::size_t segment) const;

    //! Grid with just one interval [t_i, t_{i+1}] and the same refinement.
    TimeGrid segment_grid(std::size_t segment) const;

  private:
    std::vector<double> obs_times_;
    std::size_t m_{1};
};

//---------------------------------------------------------------------------//
//! A non-decreasing path sampled at every point of a TimeGrid.
struct GridPath
{
    TimeGrid grid;
    std::vector<double> values;

    double front() const { return values.front(); }
    double back() const { return values.back(); }

    //! Values of segment i: m + 1 points, shared endpoints with neighbours.
    std::span<double const> segment_values(std::size_t segment) const;

    //! DomainError if sizes mismatch, values are non-finite or decreasing.
    void validate() const;
};

//! Write "time,value" rows with round-trip precision.
void write_path_csv(std::ostream& os, GridPath const& path);

//---------------------------------------------------------------------------//
// WHOLE-PATH OPERATIONS
//---------------------------------------------------------------------------//
// Each segment draws from its own stream stream_key(seed, {tag, segment}), so
// results do not depend on the order segments are processed in.

//! Gamma(beta, alpha) process started at 0: increments over a substep h are
//! Gamma(shape = beta h, rate = alpha).
GridPath sample_gamma_path(double beta, double alpha, TimeGrid const& grid, std::uint64_t seed);

/*!
 * Multiplicative Gamma bridge x_start + (x_end - x_start) X_t / X_T.
 *
 * The input must start at 0. Zero increments are raised to the smallest
 * normal double before forming ratios; DegenerateBridge is thrown when the
 * final value is not positive.
 */
GridPath gamma_bridge(GridPath const& path, double x_start, double x_end);

/*!
 * Gamma(beta, alpha) bridge from x_start to x_end sampled on grid.
 *
 * Built in log space; a non-finite normalisation triggers a resample, up to
 * 100 attempts before DegenerateBridge.
 */
GridPath sample_gamma_bridge(double beta, double alpha, TimeGrid const& grid,
                             double x_start, double x_end, std::uint64_t seed);

//! Superposition: adds an independent Gamma(h (beta_new - beta_old), alpha)
//! to every increment. ContractViolation unless beta_new > beta_old.
GridPath augment_path(GridPath const& path, double beta_old, double beta_new,
                      double alpha, std::uint64_t seed);

//! Thinning: scales every increment by an independent
//! Beta(h beta_new, h (beta_old - beta_new)). ContractViolation unless
//! 0 < beta_new < beta_old.
GridPath thin_path(GridPath const& path, double beta_old, double beta_new, std::uint64_t seed);

//---------------------------------------------------------------------------//
// SEGMENT KERNELS (log-increment form, used by the sampler)
//---------------------------------------------------------------------------//
//! out[j] = log of an independent Gamma(shape, rate) draw.
void sample_log_increments(double shape, double rate, std::span<double> out, RngStream& rng);

//! log_inc[j] <- log(exp(log_inc[j]) + Gamma(shape, rate)).
void augment_log_increments(std::span<double> log_inc, double shape, double rate, RngStream& rng);

//! log_inc[j] <- log_inc[j] + log Beta(keep_shape, drop_shape).
void thin_log_increments(std::span<double> log_inc, double keep_shape, double drop_shape,
                         RngStream& rng);

/*!
 * Pin log increments into bridge values from x_start to x_end.
 *
 * values has log_inc.size() + 1 entries; values.front() == x_start and
 * values.back() == x_end exactly, non-decreasing in between. Returns false
 * if the log normaliser is not finite.
 */
bool pin_log_increments(std::span<double const> log_inc, double x_start, double x_end,
                        std::span<double> values);

//! log of normalised increments of a segment: log((v_j - v_{j-1}) / (v_m - v_0)).
//! Zero increments map to -inf.
void normalised_log_increments(std::span<double const> values, std::span<double> out);

}  // namespace thetasub
