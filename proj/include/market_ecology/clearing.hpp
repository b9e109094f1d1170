/// \file   clearing.hpp
///
/// \brief  Walrasian price setting: root of aggregate excess demand, with a
///         quasi-Newton minimization of the squared excess demand as fallback.
///
/// \copyright  Copyright 2026 The market-ecology authors
///
///             Licensed under the Apache License, Version 2.0 (the "License");
///             you may not use this file except in compliance with the License.
///             You may obtain a copy of the License at
///
///                 http://www.apache.org/licenses/LICENSE-2.0
///
///             Unless required by applicable law or agreed to in writing, software
///             distributed under the License is distributed on an "AS IS" BASIS,
///             WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
///             See the License for the specific language governing permissions and
///             limitations under the License.
///
#ifndef ME_CLEARING_HPP
#define ME_CLEARING_HPP

#include "market_ecology/strategies.hpp"

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace market_ecology {

///
/// \brief  One fund's demand as a function of the candidate price p.
///
///         The fund's wealth is marked to the candidate price,
///         W(p) = wealth_base + wealth_slope p, and its signal is
///         phi(p) = signal_base - signal_slope log2(p). For tanh strategies
///         the target holding is W(p) lambda* (tanh(c phi(p)) + 1/2) / p;
///         for the Kelly bettor it is W(p) fraction / p.
///
struct demand_term
{
    strategy_params params;
    double wealth_base    = 0.;
    double wealth_slope   = 0.;
    double signal_base    = 0.;
    double signal_slope   = 0.;   ///< 1 for price-dependent signals, 0 otherwise
    double fraction       = 0.;   ///< Kelly stock fraction
    double shares_prev    = 0.;

    [[nodiscard]] double wealth_at(double p) const
    {
        return wealth_base + wealth_slope * p;
    }

    [[nodiscard]] double signal_at(double p) const;

    [[nodiscard]] double target(double p) const;

    [[nodiscard]] double target_derivative(double p) const;
};

///
/// \brief  Thrown when the fallback minimization cannot produce a finite
///         positive price.
///
class clearing_failed
: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

///
/// \brief  Sum over funds of target holding minus current holding.
///
double aggregate_excess_demand(const std::vector<demand_term> &terms, double p);

///
/// \brief  Analytic derivative of aggregate_excess_demand with respect to p.
///
double demand_derivative(const std::vector<demand_term> &terms, double p);

enum class clearing_mode
{
    root,
    minimized,
};

std::string_view to_string(clearing_mode mode);

struct clearing_options
{
    double abs_tol             = 1e-8;   ///< shares; set to 1e-8 Q by the engine
    std::size_t max_iterations = 200;
    std::size_t max_expansions = 60;
    double initial_step        = 1. / 64.;   ///< first bracket offset in log price
    double expansion_factor    = 2.;
    double move_limit          = 1024.;  ///< 2^10, bound on p / p_prev
};

struct clearing_result
{
    double price          = 0.;
    double residual       = 0.;
    clearing_mode mode    = clearing_mode::root;
    std::size_t iterations = 0;
    bool bound_hit        = false;   ///< bracket search reached the move limit
};

///
/// \brief  Finds the market-clearing price starting from the previous price.
///
///         A bracket is located by geometric expansion around p_prev, both
///         directions interleaved so that the nearest sign change wins, then a
///         safeguarded Newton iteration in log price (bisection when a
///         Newton step leaves the bracket or stalls) locates the root. When
///         no sign change exists within the move limit, the squared excess
///         demand is minimized with a one-dimensional BFGS iteration and the
///         best finite price is returned.
///
clearing_result find_clearing_price( const std::vector<demand_term> &terms
                                   , double p_prev
                                   , const clearing_options &options = {});

} // namespace market_ecology

#endif // ME_CLEARING_HPP
