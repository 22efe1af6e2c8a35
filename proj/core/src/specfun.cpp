#include "thetasub/specfun.hpp"

#include <cmath>
#include <limits>
#include <math.h>

#include "thetasub/error.hpp"

namespace thetasub
{
namespace
{
constexpr double eps = std::numeric_limits<double>::epsilon();

// Beyond this e^{-z} is below the smallest subnormal.
constexpr double e1_underflow = 745.0;

// Series/continued-fraction switchover.
constexpr double e1_switch = 1.0;

// Ein(z) = sum_{k>=1} (-1)^{k+1} z^k / (k k!), any real z of modest size.
double ein_series(double z)
{
    double term = 1.0;  // z^k / k!
    double sum = 0.0;
    for (int k = 1; k < 500; ++k)
    {
        term *= z / k;
        double const contrib = term / k;
        sum += (k % 2 == 1) ? contrib : -contrib;
        if (std::fabs(contrib) < eps * std::fabs(sum))
            break;
    }
    return sum;
}

// E1 for z > 1 by the modified Lentz continued fraction.
double e1_continued_fraction(double z)
{
    constexpr double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i)
    {
        double const an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        double const del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < eps)
            break;
    }
    return h * std::exp(-z);
}

}  // namespace

double exp_integral_e1(double z)
{
    if (!std::isfinite(z) || z <= 0)
        throw DomainError("exp_integral_e1: argument must be finite and > 0");
    if (z > e1_underflow)
        return 0.0;
    if (z <= e1_switch)
        return -euler_gamma - std::log(z) + ein_series(z);
    return e1_continued_fraction(z);
}

double exp_integral_ei(double x)
{
    if (!std::isfinite(x) || x <= 0)
        throw DomainError("exp_integral_ei: argument must be finite and > 0");
    if (x <= 40.0)
    {
        double term = 1.0;
        double sum = 0.0;
        for (int k = 1; k < 1000; ++k)
        {
            term *= x / k;
            double const contrib = term / k;
            sum += contrib;
            if (contrib < eps * sum)
                break;
        }
        return euler_gamma + std::log(x) + sum;
    }
    // Asymptotic expansion; terms k!/x^k decrease until k ~ x.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k)
    {
        double const next = term * k / x;
        if (next > term || next < eps * sum)
            break;
        term = next;
        sum += term;
    }
    return std::exp(x) / x * sum;
}

double exp_integral_ein(double z)
{
    if (!std::isfinite(z))
        throw DomainError("exp_integral_ein: argument must be finite");
    if (z == 0)
        return 0.0;
    if (std::fabs(z) <= 2.0)
        return ein_series(z);
    if (z > 0)
        return euler_gamma + std::log(z) + exp_integral_e1(z);
    return euler_gamma + std::log(-z) - exp_integral_ei(-z);
}

double exp_weighted_log_integral(double c, double lo, double hi)
{
    if (!std::isfinite(c) || !(lo > 0) || !(hi > lo) || !std::isfinite(lo))
        throw DomainError("exp_weighted_log_integral: need finite c and 0 < lo < hi");
    if (std::isinf(hi))
    {
        if (!(c > 0))
            throw DomainError("exp_weighted_log_integral: unbounded interval needs c > 0");
        return exp_integral_e1(c * lo);
    }
    if (c == 0)
        return std::log(hi / lo);
    if (std::fabs(c) * hi <= 2.0)
        return std::log(hi / lo) - (ein_series(c * hi) - ein_series(c * lo));
    if (c > 0)
        return exp_integral_e1(c * lo) - exp_integral_e1(c * hi);
    return exp_integral_ei(-c * hi) - exp_integral_ei(-c * lo);
}

double log_gamma(double x)
{
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double gamma_logpdf(double x, double shape, double rate)
{
    if (!(x > 0) || !(shape > 0) || !(rate > 0) || !std::isfinite(x)
        || !std::isfinite(shape) || !std::isfinite(rate))
    {
        throw DomainError("gamma_logpdf: x, shape and rate must be finite and > 0");
    }
    return shape * std::log(rate) + (shape - 1) * std::log(x) - rate * x
           - log_gamma(shape);
}

}  // namespace thetasub
