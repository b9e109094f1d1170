/// \file   parameters.hpp
///
/// \brief  Model parameters in annual units and their per-step conversions.
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
#ifndef ME_PARAMETERS_HPP
#define ME_PARAMETERS_HPP

#include <array>
#include <cmath>
#include <cstddef>

namespace market_ecology {

///
/// \brief  Number of trading days in a year, used to annualize quantities.
///
constexpr std::size_t day_count = 252;

///
/// \brief  Index of the three core strategies in wealth vectors and fund lists.
///
enum strategy_index : std::size_t
{
    noise_trader_index   = 0,
    value_investor_index = 1,
    trend_follower_index = 2,
};

///
/// \brief  Mean-reversion rate that gives the noise factor a deviation
///         half-life of `years` years.
///
inline double reversion_rate_for_half_life(double years)
{
    return 1. - std::pow(0.5, 1. / (years * double(day_count)));
}

///
/// \brief  Model parameters, all rates in annual units.
///
///         Defaults reproduce the default parameter table of the model.
///
struct model_parameters
{
    double risk_free_rate        = 0.01;   ///< r
    double dividend_growth       = 0.01;   ///< g
    double cost_of_equity        = 0.02;   ///< k
    double dividend_volatility   = 0.06;   ///< sigma
    double dividend_autocorrelation = 0.1; ///< omega
    double noise_reversion_rate  = reversion_rate_for_half_life(6.); ///< rho, per step
    double noise_volatility      = 0.12;   ///< gamma (sigma^NT)
    double noise_floor           = 1e-4;   ///< lower bound on X

    /// leverage limit lambda* for NT, VI, TF
    std::array<double, 3> leverage_limit = {1., 8., 1.};
    /// signal scale c for NT, VI, TF
    std::array<double, 3> signal_scale   = {5., 10., 4.};

    /// leverage limit of the optional Kelly bettor
    double kelly_leverage_limit = 8.;
    /// half-life (steps) of the Kelly bettor's exponentially weighted estimates
    double kelly_half_life      = 2520.;
};

///
/// \brief  Per-step rates derived from annual parameters.
///
struct step_rates
{
    double growth_log;       ///< ln(1+g)/252, drift of log dividends (before Ito term)
    double growth_simple;    ///< exp(growth_log) - 1, expected per-step dividend growth
    double dividend_sigma;   ///< sigma / sqrt(252)
    double noise_gamma;      ///< gamma / sqrt(252)
    double risk_free;        ///< (1+r)^(1/252) - 1
    double cost_of_equity;   ///< (1+k)^(1/252) - 1
};

inline step_rates to_step_rates(const model_parameters &p)
{
    const double n = double(day_count);
    step_rates s{};
    s.growth_log     = std::log1p(p.dividend_growth) / n;
    s.growth_simple  = std::expm1(s.growth_log);
    s.dividend_sigma = p.dividend_volatility / std::sqrt(n);
    s.noise_gamma    = p.noise_volatility / std::sqrt(n);
    s.risk_free      = std::expm1(std::log1p(p.risk_free_rate) / n);
    s.cost_of_equity = std::expm1(std::log1p(p.cost_of_equity) / n);
    return s;
}

} // namespace market_ecology

#endif // ME_PARAMETERS_HPP
