#include "thetasub/data.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "thetasub/csv.hpp"
#include "thetasub/error.hpp"
#include "thetasub/random.hpp"

namespace thetasub
{
namespace
{
enum StreamTag : std::uint64_t
{
    tag_component_one = 0x64617461'01,
    tag_component_two = 0x64617461'02,
};

std::string line_message(std::size_t line, std::string const& what)
{
    return "line " + std::to_string(line) + ": " + what;
}

// Strictly increasing running total even when an increment is below the
// resolution of the total.
double advance(double total, double increment)
{
    double const next = total + increment;
    return next > total ? next : std::nextafter(total, std::numeric_limits<double>::infinity());
}

bool parse_iso_date(std::string_view text, std::chrono::sys_days& out)
{
    // YYYY-MM-DD
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        return false;
    auto digits = [&](std::size_t pos, std::size_t len, int& value) {
        value = 0;
        for (std::size_t i = pos; i < pos + len; ++i)
        {
            if (text[i] < '0' || text[i] > '9')
                return false;
            value = value * 10 + (text[i] - '0');
        }
        return true;
    };
    int y, m, d;
    if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d))
        return false;
    std::chrono::year_month_day const ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return false;
    out = std::chrono::sys_days{ymd};
    return true;
}

}  // namespace

//---------------------------------------------------------------------------//
// Observations
//---------------------------------------------------------------------------//
void Observations::validate() const
{
    if (times.size() != values.size())
        throw DataError("observations: times and values differ in length");
    if (times.size() < 2)
        throw DataError("observations: need at least two points");
    if (times[0] != 0.0 || values[0] != 0.0)
        throw DataError("observations: the first row must be time 0, value 0");
    for (std::size_t i = 1; i < times.size(); ++i)
    {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw DataError("observations: non-finite entry at row " + std::to_string(i));
        if (!(times[i] > times[i - 1]))
            throw DataError("observations: times must be strictly increasing (row "
                            + std::to_string(i) + ")");
        if (!(values[i] > values[i - 1]))
        {
            throw DataError("observations: values must be strictly increasing (row "
                            + std::to_string(i)
                            + "); an infinite-activity subordinator has positive increments, "
                              "aggregate the data over longer periods");
        }
    }
}

Observations read_observations_csv(std::istream& is)
{
    Observations obs;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line))
    {
        ++line_no;
        if (csv::trim(line).empty())
            continue;
        auto const fields = csv::split_fields(line);
        if (!header_seen)
        {
            if (fields.size() != 2 || fields[0] != "time" || fields[1] != "value")
                throw DataError(line_message(line_no, "expected header 'time,value'"));
            header_seen = true;
            continue;
        }
        double t, v;
        if (fields.size() != 2 || !csv::parse_double(fields[0], t)
            || !csv::parse_double(fields[1], v))
        {
            throw DataError(line_message(line_no, "expected two numeric fields"));
        }
        obs.times.push_back(t);
        obs.values.push_back(v);
    }
    if (!header_seen)
        throw DataError("observations: empty input");
    return obs;
}

void write_observations_csv(std::ostream& os, Observations const& obs)
{
    os << "time,value\n";
    for (std::size_t i = 0; i < obs.size(); ++i)
        os << csv::format_double(obs.times[i]) << ',' << csv::format_double(obs.values[i]) << '\n';
}

//---------------------------------------------------------------------------//
// Synthetic data
//---------------------------------------------------------------------------//
double TwoGammaTruth::alpha_bar() const
{
    return (b1 * a1 + b2 * a2) / (b1 + b2);
}

double TwoGammaTruth::theta_plus_alpha_x(double x) const
{
    // -log of a weighted mean of exponentials, computed stably.
    double const w1 = b1 / (b1 + b2);
    double const w2 = b2 / (b1 + b2);
    double const l1 = std::log(w1) - a1 * x;
    double const l2 = std::log(w2) - a2 * x;
    return -log_add_exp(l1, l2);
}

double TwoGammaTruth::theta0(double x) const
{
    return theta_plus_alpha_x(x) - alpha_bar() * x;
}

double TwoGammaTruth::levy_density(double x) const
{
    return (b1 * std::exp(-a1 * x) + b2 * std::exp(-a2 * x)) / x;
}

double TwoGammaTruth::neg_log_xv(double x) const
{
    return theta_plus_alpha_x(x) - std::log(beta());
}

SyntheticData synth_two_gamma(double a1, double b1, double a2, double b2, double horizon,
                              std::size_t n, std::uint64_t seed)
{
    if (!(a1 > 0) || !(b1 > 0) || !(a2 > 0) || !(b2 > 0) || !(horizon > 0) || n < 1)
        throw DomainError("synth_two_gamma: parameters must be positive");

    RngStream first(stream_key(seed, {tag_component_one}));
    RngStream second(stream_key(seed, {tag_component_two}));
    double const dt = horizon / static_cast<double>(n);

    SyntheticData out{{}, TwoGammaTruth{a1, b1, a2, b2}};
    out.obs.times.reserve(n + 1);
    out.obs.values.reserve(n + 1);
    out.obs.times.push_back(0.0);
    out.obs.values.push_back(0.0);
    for (std::size_t i = 1; i <= n; ++i)
    {
        double const inc = first.gamma(b1 * dt, a1) + second.gamma(b2 * dt, a2);
        out.obs.times.push_back(horizon * static_cast<double>(i) / static_cast<double>(n));
        out.obs.values.push_back(advance(out.obs.values.back(), inc));
    }
    return out;
}

Observations synth_gamma(double alpha, double beta, double horizon, std::size_t n,
                         std::uint64_t seed)
{
    if (!(alpha > 0) || !(beta > 0) || !(horizon > 0) || n < 1)
        throw DomainError("synth_gamma: parameters must be positive");
    RngStream rng(stream_key(seed, {tag_component_one}));
    double const dt = horizon / static_cast<double>(n);
    Observations obs;
    obs.times.push_back(0.0);
    obs.values.push_back(0.0);
    for (std::size_t i = 1; i <= n; ++i)
    {
        obs.times.push_back(horizon * static_cast<double>(i) / static_cast<double>(n));
        obs.values.push_back(advance(obs.values.back(), rng.gamma(beta * dt, alpha)));
    }
    return obs;
}

//---------------------------------------------------------------------------//
// Loss ingestion
//---------------------------------------------------------------------------//
IngestResult ingest_losses(std::istream& csv_in, AggregationSpec const& spec)
{
    using namespace std::chrono;
    if (spec.window_days < 1)
        throw ConfigError("ingest_losses: window length must be >= 1 day");

    IngestResult result;
    std::vector<std::pair<sys_days, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(csv_in, line))
    {
        ++line_no;
        if (csv::trim(line).empty())
            continue;
        auto const fields = csv::split_fields(line);
        if (!header_seen)
        {
            if (fields.size() != 2 || fields[0] != "date" || fields[1] != "loss")
                throw DataError(line_message(line_no, "expected header 'date,loss'"));
            header_seen = true;
            continue;
        }
        sys_days day;
        double loss;
        if (fields.size() != 2 || !parse_iso_date(fields[0], day)
            || !csv::parse_double(fields[1], loss) || !std::isfinite(loss))
        {
            throw DataError(line_message(line_no, "expected 'YYYY-MM-DD,<loss>'"));
        }
        if (loss < 1)
        {
            result.diagnostics.push_back(
                line_message(line_no, "loss below 1 rejected (log would be negative)"));
            continue;
        }
        rows.emplace_back(day, std::log(loss));
    }
    if (rows.empty())
        throw DataError("ingest_losses: no positive increments");

    sys_days first = rows.front().first;
    sys_days last = rows.front().first;
    for (auto const& [day, _] : rows)
    {
        first = std::min(first, day);
        last = std::max(last, day);
    }
    sys_days const origin = first - (weekday{first} - Monday);

    auto const window_of = [&](sys_days day) {
        return static_cast<std::size_t>((day - origin).count() / spec.window_days);
    };
    std::size_t const window_count = window_of(last) + 1;
    std::vector<double> sums(window_count, 0.0);
    for (auto const& [day, log_loss] : rows)
        sums[window_of(day)] += log_loss;

    double const window_weeks = spec.window_days / 7.0;
    Observations& obs = result.obs;
    obs.times.push_back(0.0);
    obs.values.push_back(0.0);
    double pending = 0;
    std::size_t pending_windows = 0;
    for (std::size_t w = 0; w < window_count; ++w)
    {
        pending += sums[w];
        ++pending_windows;
        if (!(pending > 0))
            continue;
        if (pending_windows > 1)
        {
            result.merged_windows += pending_windows - 1;
            result.diagnostics.push_back("windows " + std::to_string(w + 2 - pending_windows)
                                         + "-" + std::to_string(w + 1)
                                         + " merged (zero aggregate)");
        }
        obs.times.push_back(static_cast<double>(w + 1) * window_weeks);
        obs.values.push_back(obs.values.back() + pending);
        pending = 0;
        pending_windows = 0;
    }
    if (obs.size() < 2)
        throw DataError("ingest_losses: no positive increments");
    if (pending_windows > 0)
    {
        // Trailing zero windows fold into the last observed window.
        result.merged_windows += pending_windows;
        result.diagnostics.push_back("trailing zero windows merged backwards");
        obs.times.back() = static_cast<double>(window_count) * window_weeks;
    }
    return result;
}

}  // namespace thetasub
