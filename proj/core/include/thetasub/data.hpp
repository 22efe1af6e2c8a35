#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * Discrete observations of a subordinator.
 *
 * times[0] = 0 and values[0] = 0; both sequences are strictly increasing.
 */
struct Observations
{
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const { return times.size(); }
    std::size_t increment_count() const { return times.empty() ? 0 : times.size() - 1; }

    //! DataError describing the first violation, if any.
    void validate() const;
};

//! Read "time,value" CSV (header required). DataError with line number on
//! malformed rows; does not validate monotonicity.
Observations read_observations_csv(std::istream& is);
void write_observations_csv(std::ostream& os, Observations const& obs);

//---------------------------------------------------------------------------//
/*!
 * Analytic description of a sum of two independent Gamma processes viewed
 * as a theta-subordinator with beta = b1 + b2.
 */
struct TwoGammaTruth
{
    double a1, b1, a2, b2;

    double beta() const { return b1 + b2; }
    //! Slope at zero: (b1 a1 + b2 a2) / (b1 + b2).
    double alpha_bar() const;
    //! theta_0(x) = -log[(b1 e^{-a1 x} + b2 e^{-a2 x}) / (b1 + b2)] - alpha_bar x.
    double theta0(double x) const;
    //! theta_0(x) + alpha_bar x.
    double theta_plus_alpha_x(double x) const;
    //! Levy density (b1 e^{-a1 x} + b2 e^{-a2 x}) / x.
    double levy_density(double x) const;
    //! -log(x v(x)).
    double neg_log_xv(double x) const;
};

struct SyntheticData
{
    Observations obs;
    TwoGammaTruth truth;
};

/*!
 * Sum of Gamma(b1, a1) and Gamma(b2, a2) processes observed at n equispaced
 * times on [0, T].
 *
 * Increments too small to change the running total in double precision are
 * lifted to the next representable value so the output stays strictly
 * increasing.
 */
SyntheticData synth_two_gamma(double a1, double b1, double a2, double b2, double horizon,
                              std::size_t n, std::uint64_t seed);

//! A single Gamma(beta, alpha) process at n equispaced times on [0, T].
Observations synth_gamma(double alpha, double beta, double horizon, std::size_t n,
                         std::uint64_t seed);

//---------------------------------------------------------------------------//
// LOSS INGESTION
//---------------------------------------------------------------------------//
struct AggregationSpec
{
    //! Window length in days; windows start on Mondays.
    int window_days{7};
};

struct IngestResult
{
    Observations obs;
    //! Rejected rows and merge notes, one line each.
    std::vector<std::string> diagnostics;
    //! Number of windows merged into a following (or final preceding) window.
    std::size_t merged_windows{0};
};

/*!
 * Aggregate a "date,loss" CSV into cumulative log-loss observations.
 *
 * Each loss (>= 1) is log-transformed and summed within Monday-aligned
 * windows; windows with zero sum are merged forward. Times are in weeks
 * from the Monday starting the first window. Rows with loss < 1 are skipped
 * with a diagnostic; malformed rows raise DataError with the line number.
 */
IngestResult ingest_losses(std::istream& csv, AggregationSpec const& spec = {});

}  // namespace thetasub
