/// \file   processes.hpp
///
/// \brief  Exogenous stochastic drivers: the autocorrelated geometric dividend
///         process and the mean-reverting noise-trader factor.
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
#ifndef ME_PROCESSES_HPP
#define ME_PROCESSES_HPP

#include "market_ecology/parameters.hpp"

namespace market_ecology {

///
/// \brief  State of the dividend process
///
///             D(t) = D(t-1) exp(g - sigma^2/2 + sigma U(t))
///             U(t) = omega U(t-2) + sqrt(1 - omega^2) Z(t)
///
///         U has unit variance, zero odd-lag autocorrelation and
///         autocorrelation omega^k at lag 2k.
///
struct dividend_state
{
    double d_curr     = 1.;  ///< current dividend per share, > 0
    double u_lag1     = 0.;  ///< U(t-1)
    double u_lag2     = 0.;  ///< U(t-2)
    double g_step     = 0.;  ///< per-step log growth
    double sigma_step = 0.;  ///< per-step volatility
    double omega      = 0.;  ///< autocorrelation parameter, |omega| < 1

    void validate() const;
};

///
/// \brief  Advances U by one step and shifts the lags. Returns the new U.
///
double step_u(dividend_state &state, double z);

///
/// \brief  Advances the dividend by one step. Returns the new dividend.
///
double step_dividend(dividend_state &state, double z);

///
/// \brief  Discretized Ornstein-Uhlenbeck factor multiplying the value
///         estimate in the noise-trader signal.
///
struct noise_factor_state
{
    double x_curr     = 1.;    ///< current level, >= x_floor
    double rho        = 0.;    ///< mean-reversion rate per step, in (0, 1)
    double mu         = 1.;    ///< long-run mean
    double gamma_step = 0.;    ///< per-step volatility
    double x_floor    = 1e-4;  ///< keeps log2(X) defined

    void validate() const;
};

///
/// \brief  x' = max(x_floor, x + rho (mu - x) + gamma eps). Returns x'.
///
double step_noise_factor(noise_factor_state &state, double eps);

///
/// \brief  Dividend state with the given starting dividend and default
///         parameters converted to per-step units.
///
dividend_state make_dividend_state(const model_parameters &p, double d0);

noise_factor_state make_noise_factor_state(const model_parameters &p);

} // namespace market_ecology

#endif // ME_PROCESSES_HPP
