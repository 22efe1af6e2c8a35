#pragma once

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * Exponential integral \f$ E_1(z) = \int_z^\infty t^{-1} e^{-t} dt \f$.
 *
 * Power series for z <= 1, modified Lentz continued fraction above. Returns
 * exactly 0 once \f$ e^{-z} \f$ underflows (z > 745). Throws DomainError for
 * z <= 0 or non-finite z.
 */
double exp_integral_e1(double z);

//! Exponential integral Ei(x) for x > 0 (principal value); equals -E1(-x).
double exp_integral_ei(double x);

//! Entire exponential integral Ein(z) = int_0^z (1 - e^{-t}) / t dt, z >= 0.
double exp_integral_ein(double z);

/*!
 * \f$ \int_{lo}^{hi} e^{-c x} x^{-1} dx \f$ for 0 < lo < hi <= inf.
 *
 * Any real c is accepted on a finite interval; hi = inf requires c > 0.
 * This is the building block of every Levy bin mass.
 */
double exp_weighted_log_integral(double c, double lo, double hi);

//! Log density of Gamma(shape, rate) at x. DomainError unless all args > 0.
double gamma_logpdf(double x, double shape, double rate);

//! Thread-safe log |Gamma(x)|.
double log_gamma(double x);

//! Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace thetasub
