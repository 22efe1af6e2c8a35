#include "thetasub/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "thetasub/error.hpp"
#include "thetasub/specfun.hpp"

namespace thetasub
{
namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double log_sqrt_2pi = 0.91893853320467274178032973640562;
}  // namespace

//---------------------------------------------------------------------------//
// ModelParams
//---------------------------------------------------------------------------//
double ModelParams::lower_edge(std::size_t k) const
{
    return k == 0 ? 0.0 : bin_edges[k - 1];
}

double ModelParams::upper_edge(std::size_t k) const
{
    return k < bin_edges.size() ? bin_edges[k] : inf;
}

std::size_t ModelParams::bin_of(double x) const
{
    // Number of edges <= x: x == b_k lands in B_k.
    return static_cast<std::size_t>(
        std::upper_bound(bin_edges.begin(), bin_edges.end(), x) - bin_edges.begin());
}

bool ModelParams::tail_integrable() const
{
    return bin_edges.empty() || theta_slopes.back() > -alpha;
}

void ModelParams::validate() const
{
    if (!std::isfinite(alpha) || !(alpha > 0))
        throw DomainError("ModelParams: alpha must be finite and > 0");
    if (!std::isfinite(beta) || !(beta > 0))
        throw DomainError("ModelParams: beta must be finite and > 0");
    std::size_t const n = bin_edges.size();
    if (theta_slopes.size() != n || theta_intercepts.size() != n)
        throw DomainError("ModelParams: need one slope and one intercept per bin edge");
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!std::isfinite(bin_edges[i]) || !(bin_edges[i] > 0))
            throw DomainError("ModelParams: bin edges must be finite and > 0");
        if (i > 0 && !(bin_edges[i] > bin_edges[i - 1]))
            throw DomainError("ModelParams: bin edges must be strictly increasing");
        if (!std::isfinite(theta_slopes[i]) || !std::isfinite(theta_intercepts[i]))
            throw DomainError("ModelParams: slopes and intercepts must be finite");
    }
    if (!tail_integrable())
        throw DomainError("ModelParams: last slope must satisfy theta_N > -alpha");
}

ModelParams ModelParams::gamma_reference() const
{
    ModelParams ref = *this;
    std::fill(ref.theta_slopes.begin(), ref.theta_slopes.end(), 0.0);
    std::fill(ref.theta_intercepts.begin(), ref.theta_intercepts.end(), 0.0);
    return ref;
}

//---------------------------------------------------------------------------//
// Levy measure
//---------------------------------------------------------------------------//
double theta_at(ModelParams const& params, double x)
{
    if (!(x > 0))
        throw DomainError("theta_at: x must be > 0");
    std::size_t const k = params.bin_of(x);
    return params.intercept(k) + params.slope(k) * x;
}

double levy_density(ModelParams const& params, double x)
{
    if (!(x > 0))
        throw DomainError("levy_density: x must be > 0");
    return params.beta / x * std::exp(-params.alpha * x - theta_at(params, x));
}

double nu_bin_mass(ModelParams const& params, std::size_t k)
{
    std::size_t const n = params.bin_count();
    if (k < 1 || k > n)
        throw DomainError("nu_bin_mass: bin index must be in 1..N");
    double const rate = params.slope(k) + params.alpha;
    if (k == n && !(rate > 0))
        throw DomainError("nu_bin_mass: last bin needs theta_N + alpha > 0");
    double const integral
        = exp_weighted_log_integral(rate, params.lower_edge(k), params.upper_edge(k));
    return params.beta * std::exp(-params.intercept(k)) * integral;
}

double nu_diff_bin0(double alpha_new, double alpha_old, double beta, double b1)
{
    if (!(alpha_new > 0) || !(alpha_old > 0) || !(beta > 0) || !(b1 > 0))
        throw DomainError("nu_diff_bin0: all arguments must be > 0");
    if (std::isinf(b1))
        return beta * std::log(alpha_old / alpha_new);
    // beta * int_0^b1 (e^{-a' x} - e^{-a x}) / x dx written through Ein, which
    // avoids the log(alpha) cancellation of the E1 form for small alpha b1.
    return -beta * (exp_integral_ein(alpha_new * b1) - exp_integral_ein(alpha_old * b1));
}

double gamma_drift(ModelParams const& params)
{
    params.validate();
    using boost::math::quadrature::gauss_kronrod;

    // Integrate panel by panel with the bin fixed, so every panel sees a
    // smooth integrand even where rounding puts x on the wrong side of an edge.
    std::vector<double> cuts{0.0};
    for (double b : params.bin_edges)
    {
        if (b < 1.0)
            cuts.push_back(b);
    }
    cuts.push_back(1.0);

    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        std::size_t const k = params.bin_of(cuts[i]);
        double const rate = params.alpha + params.slope(k);
        double const scale = params.beta * std::exp(-params.intercept(k));
        auto integrand = [rate, scale](double x) { return scale * std::exp(-rate * x); };
        total += gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-10);
    }
    return total;
}

//---------------------------------------------------------------------------//
// Priors
//---------------------------------------------------------------------------//
PriorComponent PriorComponent::uniform(double lo, double hi)
{
    PriorComponent p{Family::uniform, lo, hi};
    p.validate();
    return p;
}

PriorComponent PriorComponent::gamma(double shape, double rate)
{
    PriorComponent p{Family::gamma, shape, rate};
    p.validate();
    return p;
}

PriorComponent PriorComponent::gamma_mean_var(double mean, double variance)
{
    if (!(mean > 0) || !(variance > 0))
        throw ConfigError("gamma prior: mean and variance must be > 0");
    return gamma(mean * mean / variance, mean / variance);
}

PriorComponent PriorComponent::normal(double mean, double sd)
{
    PriorComponent p{Family::normal, mean, sd};
    p.validate();
    return p;
}

void PriorComponent::validate() const
{
    if (!std::isfinite(a) || !std::isfinite(b))
        throw ConfigError("prior hyperparameters must be finite");
    switch (family)
    {
        case Family::uniform:
            if (!(a < b))
                throw ConfigError("uniform prior needs lo < hi");
            break;
        case Family::gamma:
            if (!(a > 0) || !(b > 0))
                throw ConfigError("gamma prior needs shape > 0 and rate > 0");
            break;
        case Family::normal:
            if (!(b > 0))
                throw ConfigError("normal prior needs sd > 0");
            break;
    }
}

double PriorComponent::logpdf(double x) const
{
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (!std::isfinite(x))
        return neg_inf;
    switch (family)
    {
        case Family::uniform:
            return (x >= a && x <= b) ? -std::log(b - a) : neg_inf;
        case Family::gamma:
            return x > 0 ? gamma_logpdf(x, a, b) : neg_inf;
        case Family::normal: {
            double const z = (x - a) / b;
            return -0.5 * z * z - std::log(b) - log_sqrt_2pi;
        }
    }
    return neg_inf;
}

std::string PriorComponent::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (family)
    {
        case Family::uniform:
            os << "uniform(" << a << ", " << b << ")";
            break;
        case Family::gamma:
            os << "gamma(" << a << ", " << b << ")";
            break;
        case Family::normal:
            os << "normal(" << a << ", " << b << ")";
            break;
    }
    return os.str();
}

void PriorSpec::check_covers(ModelParams const& params) const
{
    if (!alpha)
        throw ConfigError("prior: alpha prior is required");
    std::size_t const n = params.bin_count();
    if (parameterisation == Parameterisation::split_gamma)
    {
        if (n != 1)
            throw ConfigError("prior: split_gamma parameterisation needs exactly one bin edge");
        if (!alpha1 || !beta1)
            throw ConfigError("prior: split_gamma parameterisation needs alpha1 and beta1 priors");
        return;
    }
    if (n > 0 && (!theta || !rho))
        throw ConfigError("prior: theta and rho priors are required when bins are present");
}

double prior_logpdf(PriorSpec const& spec, ModelParams const& params)
{
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    spec.check_covers(params);
    if (params.theta_slopes.size() != params.bin_count()
        || params.theta_intercepts.size() != params.bin_count())
    {
        throw ConfigError("prior: parameter vector lengths do not match the bins");
    }
    if (!(params.alpha > 0) || !(params.beta > 0))
        return neg_inf;
    if (spec.tail_constraint && !params.tail_integrable())
        return neg_inf;

    double lp = spec.alpha->logpdf(params.alpha);
    if (spec.beta)
        lp += spec.beta->logpdf(params.beta);

    if (spec.parameterisation == Parameterisation::split_gamma)
    {
        auto const view = SplitGammaView::from(params);
        lp += spec.alpha1->logpdf(view.alpha1);
        lp += spec.beta1->logpdf(view.beta1);
        return lp;
    }
    for (double t : params.theta_slopes)
        lp += spec.theta->logpdf(t);
    for (double r : params.theta_intercepts)
        lp += spec.rho->logpdf(r);
    return lp;
}

//---------------------------------------------------------------------------//
SplitGammaView SplitGammaView::from(ModelParams const& params)
{
    if (params.bin_count() != 1)
        throw ConfigError("SplitGammaView: needs exactly one bin edge");
    return {params.alpha,
            params.beta,
            params.alpha + params.theta_slopes[0],
            params.beta * std::exp(-params.theta_intercepts[0])};
}

ModelParams SplitGammaView::to_params(double b1) const
{
    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.bin_edges = {b1};
    p.theta_slopes = {alpha1 - alpha};
    p.theta_intercepts = {std::log(beta / beta1)};
    return p;
}

}  // namespace thetasub
