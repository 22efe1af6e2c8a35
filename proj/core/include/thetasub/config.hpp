#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mcmc.hpp"
#include "model.hpp"

namespace thetasub
{
//---------------------------------------------------------------------------//
/*!
 * Model, prior and proposal settings for a fit.
 *
 * Read from a flat "key = value" file; '#' starts a comment. Recognised keys:
 *
 * \code
   bins = 1, 2, 4            # b_1..b_N (omit or "none" for a Gamma model)
   parameterisation = standard | split_gamma
   alpha = 1.0               # initial values
   beta = 0.44
   theta = 0                 # one value for every bin, or one per bin
   rho = 0
   alpha1 = 0.2              # split_gamma initial values (optional)
   beta1 = 0.04
   prior.alpha = gamma(2, 1) # uniform(lo,hi) gamma(shape,rate)
   prior.beta = uniform(0.01, 10)  # gamma_mv(mean,var) normal(mean,sd)
   prior.theta = normal(0, 10)
   prior.rho = normal(0, 10)
   prior.alpha1 = ...
   prior.beta1 = ...
   tail_constraint = true
   grid.m = 10
   sigma.alpha = 0.025       # also sigma.theta/rho/beta/alpha1/beta1
   beta_move_period = 5
   schedule = params         # comma list of params | beta
   \endcode
 *
 * A missing prior.beta means beta is known.
 */
struct FitConfig
{
    ModelParams params0;
    PriorSpec prior;
    ProposalSpec proposal;
    std::size_t refinement{10};
    //! Recognised key/value pairs in file order, for the run manifest.
    std::vector<std::pair<std::string, std::string>> entries;
};

//! ConfigError with the line number on unknown keys or malformed values.
FitConfig parse_config(std::istream& is);
FitConfig load_config(std::filesystem::path const& file);

//! Parse "family(a, b)". ConfigError if malformed.
PriorComponent parse_prior(std::string const& text);

}  // namespace thetasub
