/// \file   processes.cpp
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
#include "market_ecology/processes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace market_ecology {

void dividend_state::validate() const
{
    if(!(d_curr > 0.) || !std::isfinite(d_curr)) {
        throw std::invalid_argument("dividend must be positive and finite");
    }
    if(!(std::abs(omega) < 1.)) {
        throw std::invalid_argument("dividend autocorrelation must satisfy |omega| < 1");
    }
    if(sigma_step < 0.) {
        throw std::invalid_argument("dividend volatility must be non-negative");
    }
}

double step_u(dividend_state &state, double z)
{
    const double u = state.omega * state.u_lag2
                   + std::sqrt(1. - state.omega * state.omega) * z;
    state.u_lag2 = state.u_lag1;
    state.u_lag1 = u;
    return u;
}

double step_dividend(dividend_state &state, double z)
{
    const double u = step_u(state, z);
    const double s = state.sigma_step;
    state.d_curr *= std::exp(state.g_step - 0.5 * s * s + s * u);
    return state.d_curr;
}

void noise_factor_state::validate() const
{
    if(!(rho > 0. && rho < 1.)) {
        throw std::invalid_argument("noise reversion rate must lie in (0, 1)");
    }
    if(!(x_floor > 0.) || x_curr < x_floor) {
        throw std::invalid_argument("noise factor must stay above a positive floor");
    }
    if(gamma_step < 0.) {
        throw std::invalid_argument("noise volatility must be non-negative");
    }
}

double step_noise_factor(noise_factor_state &state, double eps)
{
    const double x = state.x_curr + state.rho * (state.mu - state.x_curr)
                   + state.gamma_step * eps;
    state.x_curr = std::max(state.x_floor, x);
    return state.x_curr;
}

dividend_state make_dividend_state(const model_parameters &p, double d0)
{
    const auto rates = to_step_rates(p);
    dividend_state s;
    s.d_curr     = d0;
    s.g_step     = rates.growth_log;
    s.sigma_step = rates.dividend_sigma;
    s.omega      = p.dividend_autocorrelation;
    s.validate();
    return s;
}

noise_factor_state make_noise_factor_state(const model_parameters &p)
{
    const auto rates = to_step_rates(p);
    noise_factor_state s;
    s.rho        = p.noise_reversion_rate;
    s.gamma_step = rates.noise_gamma;
    s.x_floor    = p.noise_floor;
    s.validate();
    return s;
}

} // namespace market_ecology
