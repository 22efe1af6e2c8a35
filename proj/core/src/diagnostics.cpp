#include "thetasub/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "thetasub/csv.hpp"
#include "thetasub/error.hpp"

namespace thetasub
{
std::vector<double> running_average(std::span<double const> series)
{
    if (series.empty())
        throw DomainError("running_average: empty series");
    std::vector<double> out(series.size());
    double sum = 0;
    for (std::size_t j = 0; j < series.size(); ++j)
    {
        sum += series[j];
        out[j] = sum / static_cast<double>(j + 1);
    }
    return out;
}

double quantile(std::span<double const> sorted, double p)
{
    if (sorted.empty())
        throw DomainError("quantile: empty sample");
    if (!(p >= 0 && p <= 1))
        throw DomainError("quantile: probability outside [0, 1]");
    double const pos = p * static_cast<double>(sorted.size() - 1);
    auto const i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= sorted.size())
        return sorted.back();
    double const frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

//---------------------------------------------------------------------------//
double band_functional(ModelParams const& params, double x, BandFunctional fn)
{
    double const base = theta_at(params, x) + params.alpha * x;
    if (fn == BandFunctional::theta_plus_alpha_x)
        return base;
    return base - std::log(params.beta);
}

void BandSpec::validate() const
{
    if (!(level > 0 && level < 1))
        throw DomainError("credible band level must lie in (0, 1)");
    if (x_grid.empty())
        throw DomainError("credible band grid is empty");
    for (std::size_t i = 0; i < x_grid.size(); ++i)
    {
        if (!(x_grid[i] > 0) || (i > 0 && !(x_grid[i] > x_grid[i - 1])))
            throw DomainError("credible band grid must be positive and increasing");
    }
}

std::vector<double> BandSpec::uniform_grid(double x_max, std::size_t n)
{
    if (!(x_max > 0) || n == 0)
        throw DomainError("uniform_grid: need x_max > 0 and n >= 1");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = x_max * static_cast<double>(i + 1) / static_cast<double>(n);
    return grid;
}

Band credible_band(std::span<ModelParams const> samples, BandSpec const& spec)
{
    spec.validate();
    if (samples.size() < 2)
        throw DomainError("credible_band: need at least two samples");

    double const tail = (1 - spec.level) / 2;
    Band band;
    band.x = spec.x_grid;
    std::vector<double> values(samples.size());
    for (double x : spec.x_grid)
    {
        for (std::size_t s = 0; s < samples.size(); ++s)
            values[s] = band_functional(samples[s], x, spec.functional);
        std::sort(values.begin(), values.end());
        band.lo.push_back(quantile(values, tail));
        band.median.push_back(quantile(values, 0.5));
        band.hi.push_back(quantile(values, 1 - tail));
    }
    return band;
}

//---------------------------------------------------------------------------//
Histogram histogram(std::span<double const> series, std::size_t bins)
{
    if (series.empty())
        throw DomainError("histogram: empty series");
    if (bins == 0)
        throw DomainError("histogram: need at least one bin");
    auto const [mn, mx] = std::minmax_element(series.begin(), series.end());
    double const lo = *mn;
    double const hi = *mx;
    double const width = (hi - lo) / static_cast<double>(bins);

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges[b] = lo + width * static_cast<double>(b);
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : series)
    {
        std::size_t b = 0;
        if (width > 0)
        {
            b = static_cast<std::size_t>((v - lo) / width);
            b = std::min(b, bins - 1);
        }
        ++h.counts[b];
    }
    return h;
}

//---------------------------------------------------------------------------//
bool ChainTable::has(std::string const& name) const
{
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

std::vector<double> const& ChainTable::column(std::string const& name) const
{
    auto const it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw DataError("chain has no column '" + name + "'");
    return data[static_cast<std::size_t>(it - columns.begin())];
}

std::vector<ModelParams> ChainTable::params(std::vector<double> const& bin_edges) const
{
    std::size_t const n_bins = bin_edges.size();
    auto const& alpha = column("alpha");
    auto const& beta = column("beta");
    std::vector<std::vector<double> const*> theta, rho;
    for (std::size_t k = 1; k <= n_bins; ++k)
    {
        theta.push_back(&column("theta_" + std::to_string(k)));
        rho.push_back(&column("rho_" + std::to_string(k)));
    }
    if (has("theta_" + std::to_string(n_bins + 1)))
        throw DataError("chain has more bins than the supplied edges");

    std::vector<ModelParams> out(row_count());
    for (std::size_t r = 0; r < out.size(); ++r)
    {
        ModelParams& p = out[r];
        p.alpha = alpha[r];
        p.beta = beta[r];
        p.bin_edges = bin_edges;
        for (std::size_t k = 0; k < n_bins; ++k)
        {
            p.theta_slopes.push_back((*theta[k])[r]);
            p.theta_intercepts.push_back((*rho[k])[r]);
        }
    }
    return out;
}

ChainTable read_chain_csv(std::istream& is)
{
    ChainTable table;
    std::string line;
    if (!std::getline(is, line))
        throw DataError("chain file is empty");
    for (auto f : csv::split_fields(line))
        table.columns.emplace_back(f);
    table.data.resize(table.columns.size());

    std::size_t line_no = 1;
    while (std::getline(is, line))
    {
        ++line_no;
        if (csv::trim(line).empty())
            continue;
        auto const fields = csv::split_fields(line);
        if (fields.size() != table.columns.size())
            throw DataError("chain line " + std::to_string(line_no) + ": expected "
                            + std::to_string(table.columns.size()) + " fields");
        for (std::size_t c = 0; c < fields.size(); ++c)
        {
            double v = 0;
            if (!csv::parse_double(fields[c], v))
                throw DataError("chain line " + std::to_string(line_no) + ": bad number '"
                                + std::string(fields[c]) + "'");
            table.data[c].push_back(v);
        }
    }
    return table;
}

//---------------------------------------------------------------------------//
namespace
{
constexpr double svg_w = 640;
constexpr double svg_h = 400;
constexpr double margin = 50;
constexpr char const* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Frame
{
    double x0, x1, y0, y1;

    double px(double x) const
    {
        return margin + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (svg_w - 2 * margin);
    }
    double py(double y) const
    {
        return svg_h - margin - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (svg_h - 2 * margin);
    }
};

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void svg_open(std::ostream& os, std::string const& title, Frame const& f)
{
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg_w << "\" height=\"" << svg_h
       << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << svg_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
       << title << "</text>\n"
       << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << svg_w - 2 * margin
       << "\" height=\"" << svg_h - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto label = [&](double x, double y, char const* anchor, double v) {
        os << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
           << "\" font-size=\"10\">" << fmt(v) << "</text>\n";
    };
    label(margin, svg_h - margin + 14, "start", f.x0);
    label(svg_w - margin, svg_h - margin + 14, "end", f.x1);
    label(margin - 4, svg_h - margin, "end", f.y0);
    label(margin - 4, margin + 10, "end", f.y1);
}

void write_csv_columns(std::filesystem::path const& file, std::vector<std::string> const& header,
                       std::vector<std::vector<double> const*> const& cols)
{
    std::ofstream os(file);
    if (!os)
        throw DataError("cannot write " + file.string());
    for (std::size_t c = 0; c < header.size(); ++c)
        os << (c ? "," : "") << header[c];
    os << '\n';
    std::size_t const rows = cols.empty() ? 0 : cols.front()->size();
    for (std::size_t r = 0; r < rows; ++r)
    {
        for (std::size_t c = 0; c < cols.size(); ++c)
            os << (c ? "," : "") << csv::format_double((*cols[c])[r]);
        os << '\n';
    }
}

}  // namespace

void write_line_svg(std::ostream& os, std::string const& title, std::vector<double> const& x,
                    std::vector<SvgSeries> const& series)
{
    Frame f{0, 1, 0, 1};
    if (!x.empty())
    {
        f.x0 = *std::min_element(x.begin(), x.end());
        f.x1 = *std::max_element(x.begin(), x.end());
    }
    f.y0 = std::numeric_limits<double>::infinity();
    f.y1 = -f.y0;
    for (auto const& s : series)
    {
        for (double y : s.y)
        {
            if (std::isfinite(y))
            {
                f.y0 = std::min(f.y0, y);
                f.y1 = std::max(f.y1, y);
            }
        }
    }
    if (!(f.y0 <= f.y1))
        f.y0 = 0, f.y1 = 1;

    svg_open(os, title, f);
    for (std::size_t s = 0; s < series.size(); ++s)
    {
        char const* colour = palette[s % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
        std::size_t const n = std::min(x.size(), series[s].y.size());
        for (std::size_t i = 0; i < n; ++i)
        {
            if (std::isfinite(series[s].y[i]))
                os << fmt(f.px(x[i])) << ',' << fmt(f.py(series[s].y[i])) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << svg_w - margin - 4 << "\" y=\"" << margin + 14 * (s + 1)
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colour << "\">"
           << series[s].label << "</text>\n";
    }
    os << "</svg>\n";
}

void write_histogram_svg(std::ostream& os, std::string const& title, Histogram const& hist)
{
    Frame f{hist.edges.front(), hist.edges.back(), 0, 1};
    std::size_t const peak = *std::max_element(hist.counts.begin(), hist.counts.end());
    f.y1 = static_cast<double>(std::max<std::size_t>(peak, 1));
    if (!(f.x1 > f.x0))
        f.x0 -= 0.5, f.x1 += 0.5;

    svg_open(os, title, f);
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
    {
        double lo = hist.edges[b];
        double hi = hist.edges[b + 1];
        if (!(hi > lo))
            lo = f.x0, hi = f.x1;
        double const top = f.py(static_cast<double>(hist.counts[b]));
        os << "<rect x=\"" << fmt(f.px(lo)) << "\" y=\"" << fmt(top) << "\" width=\""
           << fmt(f.px(hi) - f.px(lo)) << "\" height=\"" << fmt(f.py(0) - top)
           << "\" fill=\"#1f77b4\" stroke=\"white\"/>\n";
    }
    os << "</svg>\n";
}

//---------------------------------------------------------------------------//
void emit_trace(std::filesystem::path const& dir, ChainTable const& table, std::string const& param)
{
    auto const& it = table.column("iteration");
    auto const& v = table.column(param);
    if (v.empty())
        throw DataError("chain has no rows");
    auto const avg = running_average(v);
    write_csv_columns(dir / ("trace_" + param + ".csv"), {"iteration", param, "running_average"},
                      {&it, &v, &avg});
    std::ofstream os(dir / ("trace_" + param + ".svg"));
    write_line_svg(os, "trace of " + param, it, {{param, v}, {"running average", avg}});
}

void emit_histogram(std::filesystem::path const& dir, ChainTable const& table,
                    std::string const& param, std::size_t bins)
{
    auto const& v = table.column(param);
    Histogram const h = histogram(v, bins);
    {
        std::ofstream os(dir / ("hist_" + param + ".csv"));
        os << "lower,upper,count\n";
        for (std::size_t b = 0; b < h.counts.size(); ++b)
        {
            os << csv::format_double(h.edges[b]) << ',' << csv::format_double(h.edges[b + 1])
               << ',' << h.counts[b] << '\n';
        }
    }
    std::ofstream os(dir / ("hist_" + param + ".svg"));
    write_histogram_svg(os, "posterior samples of " + param, h);
}

void emit_band(std::filesystem::path const& dir, Band const& band, std::vector<double> const& truth)
{
    std::vector<std::string> header{"x", "lo", "median", "hi"};
    std::vector<std::vector<double> const*> cols{&band.x, &band.lo, &band.median, &band.hi};
    std::vector<SvgSeries> series{{"lower", band.lo}, {"median", band.median}, {"upper", band.hi}};
    if (!truth.empty())
    {
        if (truth.size() != band.x.size())
            throw ContractViolation("emit_band: truth length differs from the grid");
        header.emplace_back("truth");
        cols.push_back(&truth);
        series.push_back({"truth", truth});
    }
    write_csv_columns(dir / "band.csv", header, cols);
    std::ofstream os(dir / "band.svg");
    write_line_svg(os, "pointwise credible band", band.x, series);
}

}  // namespace thetasub
