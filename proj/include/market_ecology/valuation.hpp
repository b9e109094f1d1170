/// \file   valuation.hpp
///
/// \brief  Gordon-growth valuation of the stock and the value investors'
///         estimate of it.
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
#ifndef ME_VALUATION_HPP
#define ME_VALUATION_HPP

#include <cstddef>
#include <span>
#include <stdexcept>

namespace market_ecology {

///
/// \brief  Thrown when the discount rate does not exceed the growth rate,
///         or when there is not enough history to estimate growth.
///
class valuation_error
: public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

struct valuation_config
{
    /// per-step required rate of return, must exceed the growth rate
    double k_step = 0.;
    /// number of most recent dividends used to estimate growth; 0 uses all
    std::size_t estimation_window = 0;
};

///
/// \brief  d_next / (k - g). Throws valuation_error when k <= g.
///
double gordon_value(double d_next, double g_hat, double k_step);

///
/// \brief  Per-step growth estimate exp(mean log(D(t)/D(t-1))) - 1.
///
///         Ignores the autocorrelation of the dividend process. Requires at
///         least two strictly positive dividends.
///
double estimate_growth(std::span<const double> dividends);

///
/// \brief  Same estimate from the first and last dividend of a window
///         spanning `steps` steps, for incremental use.
///
double estimate_growth(double first, double last, std::size_t steps);

///
/// \brief  The value investors' valuation: current dividend grown one step
///         by the estimated rate, discounted with the Gordon formula.
///
double vi_value(std::span<const double> dividend_history, const valuation_config &config);

} // namespace market_ecology

#endif // ME_VALUATION_HPP
