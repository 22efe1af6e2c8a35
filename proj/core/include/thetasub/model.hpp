#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * Parameters of a theta-subordinator.
 *
 * The Levy density is \f$ v(x) = (\beta / x) e^{-\alpha x - \theta(x)} \f$
 * with \f$ \theta(x) = \rho_k + \theta_k x \f$ on the half-open bin
 * \f$ B_k = [b_k, b_{k+1}) \f$, k = 1..N, and \f$ \theta \equiv 0 \f$ on
 * \f$ B_0 = (0, b_1) \f$. With N = 0 the model is a Gamma(beta, alpha)
 * process.
 */
struct ModelParams
{
    double alpha{1};
    double beta{1};
    std::vector<double> bin_edges;  //!< b_1 < ... < b_N, all > 0
    std::vector<double> theta_slopes;  //!< theta_1 .. theta_N
    std::vector<double> theta_intercepts;  //!< rho_1 .. rho_N

    //! Number of perturbed bins N.
    std::size_t bin_count() const { return bin_edges.size(); }

    //! Lower edge of bin k (0..N); b_0 = 0.
    double lower_edge(std::size_t k) const;
    //! Upper edge of bin k (0..N); b_{N+1} = inf.
    double upper_edge(std::size_t k) const;

    //! Bin index 0..N containing x >= 0 (half-open bins).
    std::size_t bin_of(double x) const;

    //! Slope theta_k for k in 0..N (zero for k = 0).
    double slope(std::size_t k) const { return k == 0 ? 0.0 : theta_slopes[k - 1]; }
    //! Intercept rho_k for k in 0..N (zero for k = 0).
    double intercept(std::size_t k) const
    {
        return k == 0 ? 0.0 : theta_intercepts[k - 1];
    }

    //! True when theta_N > -alpha (integrable tail); always true for N = 0.
    bool tail_integrable() const;

    //! Throw DomainError if the invariants fail.
    void validate() const;

    //! Gamma(beta, alpha) parameters with the same bins and theta == 0.
    ModelParams gamma_reference() const;

    friend bool operator==(ModelParams const&, ModelParams const&) = default;
};

//! theta(x); DomainError for x <= 0.
double theta_at(ModelParams const& params, double x);

//! Levy density (beta / x) exp(-alpha x - theta(x)); DomainError for x <= 0.
double levy_density(ModelParams const& params, double x);

/*!
 * Levy measure of bin B_k, k in 1..N.
 *
 * \f$ \beta e^{-\rho_k} \{E_1((\theta_k+\alpha) b_k) - E_1((\theta_k+\alpha)
 * b_{k+1})\} \f$, with the second term absent for the unbounded last bin.
 * Finite inner bins accept any sign of theta_k + alpha; the last bin needs
 * theta_N + alpha > 0.
 */
double nu_bin_mass(ModelParams const& params, std::size_t k);

/*!
 * (nu_new - nu_old)(B_0) for a change of alpha at fixed beta.
 *
 * Equals beta log(alpha_old/alpha_new) - beta {E1(alpha_new b1) -
 * E1(alpha_old b1)}; b1 may be +inf (no perturbed bins).
 */
double nu_diff_bin0(double alpha_new, double alpha_old, double beta, double b1);

//! int_0^1 x v(x) dx by adaptive quadrature (relative tolerance 1e-8).
double gamma_drift(ModelParams const& params);

//---------------------------------------------------------------------------//
// PRIORS
//---------------------------------------------------------------------------//
//! Coordinates in which priors and random-walk proposals are expressed.
enum class Parameterisation
{
    standard,  //!< (alpha, beta, theta_k, rho_k)
    split_gamma,  //!< N = 1 only: (alpha, beta, alpha_1, beta_1)
};

//! One univariate prior density.
struct PriorComponent
{
    enum class Family
    {
        uniform,  //!< a = lo, b = hi
        gamma,  //!< a = shape, b = rate
        normal,  //!< a = mean, b = standard deviation
    };

    Family family{Family::uniform};
    double a{0};
    double b{1};

    static PriorComponent uniform(double lo, double hi);
    static PriorComponent gamma(double shape, double rate);
    //! Gamma prior from its mean and variance (moment matching).
    static PriorComponent gamma_mean_var(double mean, double variance);
    static PriorComponent normal(double mean, double sd);

    //! Log density, -inf outside the support.
    double logpdf(double x) const;
    void validate() const;

    std::string describe() const;

    friend bool operator==(PriorComponent const&, PriorComponent const&) = default;
};

/*!
 * Independent priors over the free parameters.
 *
 * A missing beta prior means beta is known and never updated. In the
 * standard coordinates one theta and one rho component apply to every bin.
 * In split_gamma coordinates (N = 1) alpha1 = alpha + theta_1 and
 * beta1 = beta exp(-rho_1) carry their own priors.
 */
struct PriorSpec
{
    Parameterisation parameterisation{Parameterisation::standard};
    std::optional<PriorComponent> alpha;
    std::optional<PriorComponent> beta;
    std::optional<PriorComponent> theta;
    std::optional<PriorComponent> rho;
    std::optional<PriorComponent> alpha1;
    std::optional<PriorComponent> beta1;
    bool tail_constraint{true};

    bool beta_free() const { return beta.has_value(); }

    //! ConfigError unless the spec covers every free parameter of params.
    void check_covers(ModelParams const& params) const;
};

//! Sum of prior log densities; -inf outside support or when the tail
//! constraint is violated. ConfigError on a spec/params shape mismatch.
double prior_logpdf(PriorSpec const& spec, ModelParams const& params);

//---------------------------------------------------------------------------//
/*!
 * Split-gamma view of an N = 1 model.
 *
 * v(x) = (beta/x) e^{-alpha x} below b_1 and (beta1/x) e^{-alpha1 x} above,
 * so alpha1 = alpha + theta_1 and beta1 = beta e^{-rho_1}.
 */
struct SplitGammaView
{
    double alpha;
    double beta;
    double alpha1;
    double beta1;

    static SplitGammaView from(ModelParams const& params);
    ModelParams to_params(double b1) const;
};

}  // namespace thetasub
