#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace thetasub::test
{
double integrate(std::function<double(double)> const& f, double lo, double hi)
{
    if (std::isinf(hi))
    {
        boost::math::quadrature::exp_sinh<double> integrator;
        return integrator.integrate(f, lo, hi, 1e-14);
    }
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
}

double quad_e1(double z)
{
    // Substitute t = z + u to keep the integrand smooth near the lower limit.
    auto f = [z](double u) { return std::exp(-u) / (z + u); };
    boost::math::quadrature::exp_sinh<double> integrator;
    return std::exp(-z) * integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-15);
}

double quad_weighted_log(double c, double lo, double hi)
{
    if (std::isinf(hi))
        return integrate([c](double x) { return std::exp(-c * x) / x; }, lo, hi);
    // log-space substitution x = e^s flattens the 1/x singularity
    auto g = [c](double s) { return std::exp(-c * std::exp(s)); };
    return integrate(g, std::log(lo), std::log(hi));
}

Moments moments(std::vector<double> const& xs)
{
    double const n = static_cast<double>(xs.size());
    Moments m;
    for (double x : xs)
        m.mean += x;
    m.mean /= n;
    double m2 = 0, m4 = 0;
    for (double x : xs)
    {
        double const d = x - m.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m.var = m2 / (n - 1);
    m4 /= n;
    m.se_mean = std::sqrt(m.var / n);
    m.se_var = std::sqrt(std::max(0.0, (m4 - m.var * m.var * (n - 3) / (n - 1)) / n));
    return m;
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double const na = static_cast<double>(a.size());
    double const nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size())
    {
        double const x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double const ne = na * nb / (na + nb);
    double const lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    // Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}
    if (lambda < 0.2)
        return 1.0;
    double q = 0;
    for (int k = 1; k <= 100; ++k)
    {
        double const term = std::exp(-2.0 * k * k * lambda * lambda);
        q += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-16)
            break;
    }
    return std::clamp(q, 0.0, 1.0);
}

double batch_means_se(std::vector<double> const& xs, std::size_t batches)
{
    std::size_t const size = xs.size() / batches;
    std::vector<double> means;
    for (std::size_t b = 0; b < batches; ++b)
    {
        double s = 0;
        for (std::size_t i = b * size; i < (b + 1) * size; ++i)
            s += xs[i];
        means.push_back(s / static_cast<double>(size));
    }
    return moments(means).se_mean;
}

}  // namespace thetasub::test
