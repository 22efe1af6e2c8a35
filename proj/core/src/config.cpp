#include "thetasub/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <optional>

#include "thetasub/csv.hpp"
#include "thetasub/error.hpp"

namespace thetasub
{
namespace
{
std::vector<double> parse_list(std::string_view text)
{
    std::vector<double> out;
    if (csv::trim(text).empty() || csv::trim(text) == "none")
        return out;
    for (auto f : csv::split_fields(text))
    {
        double v = 0;
        if (!csv::parse_double(f, v))
            throw ConfigError("expected a number, got '" + std::string(f) + "'");
        out.push_back(v);
    }
    return out;
}

double parse_scalar(std::string_view text)
{
    double v = 0;
    if (!csv::parse_double(csv::trim(text), v))
        throw ConfigError("expected a number, got '" + std::string(text) + "'");
    return v;
}

std::size_t parse_count(std::string_view text)
{
    double const v = parse_scalar(text);
    if (!(v >= 0) || v != std::floor(v) || v > 1e15)
        throw ConfigError("expected a non-negative integer, got '" + std::string(text) + "'");
    return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text)
{
    auto const t = csv::trim(text);
    if (t == "true" || t == "1" || t == "yes")
        return true;
    if (t == "false" || t == "0" || t == "no")
        return false;
    throw ConfigError("expected true or false, got '" + std::string(t) + "'");
}

std::vector<double> broadcast(std::vector<double> v, std::size_t n, char const* name)
{
    if (v.size() == 1)
        return std::vector<double>(n, v.front());
    if (v.size() != n)
        throw ConfigError(std::string(name) + ": expected 1 or " + std::to_string(n) + " values");
    return v;
}

}  // namespace

PriorComponent parse_prior(std::string const& text)
{
    auto const t = csv::trim(text);
    auto const open = t.find('(');
    if (open == std::string_view::npos || t.back() != ')')
        throw ConfigError("malformed prior '" + std::string(t) + "'");
    auto const family = csv::trim(t.substr(0, open));
    auto const args = parse_list(t.substr(open + 1, t.size() - open - 2));
    if (args.size() != 2)
        throw ConfigError("prior '" + std::string(t) + "' needs two arguments");

    PriorComponent p;
    if (family == "uniform")
        p = PriorComponent::uniform(args[0], args[1]);
    else if (family == "gamma")
        p = PriorComponent::gamma(args[0], args[1]);
    else if (family == "gamma_mv")
        p = PriorComponent::gamma_mean_var(args[0], args[1]);
    else if (family == "normal")
        p = PriorComponent::normal(args[0], args[1]);
    else
        throw ConfigError("unknown prior family '" + std::string(family) + "'");
    p.validate();
    return p;
}

FitConfig parse_config(std::istream& is)
{
    FitConfig cfg;
    std::vector<double> theta{0}, rho{0};
    std::optional<double> alpha1, beta1;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line))
    {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = csv::trim(view);
        if (view.empty())
            continue;
        auto const eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string const key(csv::trim(view.substr(0, eq)));
        std::string const value(csv::trim(view.substr(eq + 1)));

        try
        {
            auto& pr = cfg.prior;
            auto& sp = cfg.proposal;
            if (key == "bins")
                cfg.params0.bin_edges = parse_list(value);
            else if (key == "parameterisation")
            {
                if (value == "standard")
                    pr.parameterisation = Parameterisation::standard;
                else if (value == "split_gamma")
                    pr.parameterisation = Parameterisation::split_gamma;
                else
                    throw ConfigError("unknown parameterisation '" + value + "'");
            }
            else if (key == "alpha")
                cfg.params0.alpha = parse_scalar(value);
            else if (key == "beta")
                cfg.params0.beta = parse_scalar(value);
            else if (key == "theta")
                theta = parse_list(value);
            else if (key == "rho")
                rho = parse_list(value);
            else if (key == "alpha1")
                alpha1 = parse_scalar(value);
            else if (key == "beta1")
                beta1 = parse_scalar(value);
            else if (key == "prior.alpha")
                pr.alpha = parse_prior(value);
            else if (key == "prior.beta")
                pr.beta = parse_prior(value);
            else if (key == "prior.theta")
                pr.theta = parse_prior(value);
            else if (key == "prior.rho")
                pr.rho = parse_prior(value);
            else if (key == "prior.alpha1")
                pr.alpha1 = parse_prior(value);
            else if (key == "prior.beta1")
                pr.beta1 = parse_prior(value);
            else if (key == "tail_constraint")
                pr.tail_constraint = parse_bool(value);
            else if (key == "grid.m")
                cfg.refinement = parse_count(value);
            else if (key == "sigma.alpha")
                sp.sigma_alpha = parse_scalar(value);
            else if (key == "sigma.theta")
                sp.sigma_theta = parse_scalar(value);
            else if (key == "sigma.rho")
                sp.sigma_rho = parse_scalar(value);
            else if (key == "sigma.beta")
                sp.sigma_beta = parse_scalar(value);
            else if (key == "sigma.alpha1")
                sp.sigma_alpha1 = parse_scalar(value);
            else if (key == "sigma.beta1")
                sp.sigma_beta1 = parse_scalar(value);
            else if (key == "beta_move_period")
                sp.beta_move_period = parse_count(value);
            else if (key == "schedule")
            {
                sp.schedule.clear();
                for (auto f : csv::split_fields(value))
                {
                    if (f == "params")
                        sp.schedule.push_back(Stage::params);
                    else if (f == "beta")
                        sp.schedule.push_back(Stage::beta);
                    else
                        throw ConfigError("unknown schedule stage '" + std::string(f) + "'");
                }
            }
            else
                throw ConfigError("unknown key '" + key + "'");
        }
        catch (ConfigError const& e)
        {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
        cfg.entries.emplace_back(key, value);
    }

    std::size_t const n = cfg.params0.bin_count();
    cfg.params0.theta_slopes = n ? broadcast(theta, n, "theta") : std::vector<double>{};
    cfg.params0.theta_intercepts = n ? broadcast(rho, n, "rho") : std::vector<double>{};
    if (alpha1 || beta1)
    {
        if (n != 1)
            throw ConfigError("alpha1/beta1 need exactly one bin edge");
        auto view = SplitGammaView::from(cfg.params0);
        view.alpha1 = alpha1.value_or(view.alpha1);
        view.beta1 = beta1.value_or(view.beta1);
        if (!(view.beta1 > 0))
            throw ConfigError("beta1 must be positive");
        cfg.params0 = view.to_params(cfg.params0.bin_edges[0]);
    }
    if (cfg.refinement < 1)
        throw ConfigError("grid.m must be >= 1");

    try
    {
        cfg.params0.validate();
    }
    catch (DomainError const& e)
    {
        throw ConfigError(std::string("initial parameters: ") + e.what());
    }
    cfg.prior.check_covers(cfg.params0);
    cfg.proposal.validate();
    return cfg;
}

FitConfig load_config(std::filesystem::path const& file)
{
    std::ifstream is(file);
    if (!is)
        throw ConfigError("cannot open config " + file.string());
    return parse_config(is);
}

}  // namespace thetasub
