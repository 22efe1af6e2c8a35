#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace thetasub
{
//---------------------------------------------------------------------------//
//! r_j = mean of s_1..s_j. DomainError on empty input.
std::vector<double> running_average(std::span<double const> series);

//! Inverse empirical CDF with linear interpolation between order statistics.
double quantile(std::span<double const> sorted, double p);

//---------------------------------------------------------------------------//
enum class BandFunctional
{
    theta_plus_alpha_x,  //!< theta(x) + alpha x
    neg_log_xv,  //!< -log(x v(x))
};

double band_functional(ModelParams const& params, double x, BandFunctional fn);

struct BandSpec
{
    std::vector<double> x_grid;  //!< positive, strictly increasing
    double level{0.95};
    BandFunctional functional{BandFunctional::theta_plus_alpha_x};

    void validate() const;

    //! n points equally spaced on (0, x_max], excluding zero.
    static std::vector<double> uniform_grid(double x_max, std::size_t n);
};

//! Pointwise posterior envelope.
struct Band
{
    std::vector<double> x;
    std::vector<double> lo;
    std::vector<double> median;
    std::vector<double> hi;
};

//! DomainError for fewer than two samples or an invalid spec.
Band credible_band(std::span<ModelParams const> samples, BandSpec const& spec);

//---------------------------------------------------------------------------//
struct Histogram
{
    std::vector<double> edges;  //!< bins + 1 entries
    std::vector<std::size_t> counts;
};

//! Equal-width bins spanning [min, max]; the maximum lands in the last bin.
Histogram histogram(std::span<double const> series, std::size_t bins);

//---------------------------------------------------------------------------//
//! Column-major numeric view of chain.csv.
struct ChainTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;

    std::size_t row_count() const { return data.empty() ? 0 : data.front().size(); }
    bool has(std::string const& name) const;
    //! DataError for an unknown column.
    std::vector<double> const& column(std::string const& name) const;

    //! Rebuild parameter samples; the edges are not stored in the chain.
    std::vector<ModelParams> params(std::vector<double> const& bin_edges) const;
};

ChainTable read_chain_csv(std::istream& is);

//---------------------------------------------------------------------------//
// SVG
//---------------------------------------------------------------------------//
struct SvgSeries
{
    std::string label;
    std::vector<double> y;
};

void write_line_svg(std::ostream& os, std::string const& title, std::vector<double> const& x,
                    std::vector<SvgSeries> const& series);
void write_histogram_svg(std::ostream& os, std::string const& title, Histogram const& hist);

//---------------------------------------------------------------------------//
// FILE EMITTERS
//---------------------------------------------------------------------------//
//! trace_<param>.csv/svg with the running average alongside.
void emit_trace(std::filesystem::path const& dir, ChainTable const& table,
                std::string const& param);
//! hist_<param>.csv/svg.
void emit_histogram(std::filesystem::path const& dir, ChainTable const& table,
                    std::string const& param, std::size_t bins);
//! band.csv/svg; truth is drawn when non-empty (same length as the grid).
void emit_band(std::filesystem::path const& dir, Band const& band,
               std::vector<double> const& truth = {});

}  // namespace thetasub
