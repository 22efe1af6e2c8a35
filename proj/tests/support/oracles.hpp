#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace thetasub::test
{
//! Adaptive Gauss-Kronrod on a finite interval, or exp-sinh when hi is inf.
double integrate(std::function<double(double)> const& f, double lo, double hi);

//! E1 by direct quadrature of e^{-t}/t over [z, inf).
double quad_e1(double z);

//! int_lo^hi e^{-c x} / x dx by quadrature.
double quad_weighted_log(double c, double lo, double hi);

struct Moments
{
    double mean{0};
    double var{0};
    //! Standard error of the mean.
    double se_mean{0};
    //! Standard error of the sample variance (from the fourth moment).
    double se_var{0};
};

Moments moments(std::vector<double> const& xs);

//! Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

//! Monte Carlo standard error of a correlated series via batch means.
double batch_means_se(std::vector<double> const& xs, std::size_t batches = 50);

}  // namespace thetasub::test
