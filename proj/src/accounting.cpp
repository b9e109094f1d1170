/// \file   accounting.cpp
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
#include "market_ecology/accounting.hpp"

#include <algorithm>
#include <cmath>

namespace market_ecology {

namespace {

// keeps cash >= margin, with loans >= 0 as small as possible
void refinance(fund &f, double p)
{
    f.margin = std::max(0., -f.shares) * p;
    if(f.cash < f.margin) {
        f.loans += f.margin - f.cash;
        f.cash = f.margin;
    } else if(f.loans > 0.) {
        const double repay = std::min(f.loans, f.cash - f.margin);
        f.loans -= repay;
        f.cash  -= repay;
    }
}

} // namespace

double wealth(const fund &f, double p)
{
    return f.cash + f.shares * p - f.loans;
}

fund apply_trade(fund f, double ds, double p)
{
    if(ds == 0.) {
        return f;
    }
    f.shares += ds;
    f.cash   -= ds * p;
    refinance(f, p);
    return f;
}

settlement accrue_and_settle( fund f
                            , double p_new
                            , double p_old
                            , double dividend_per_share
                            , double r_step
                            , double reinvestment)
{
    const double w_old    = wealth(f, p_old);
    const double interest = r_step * (f.cash - f.loans);
    const double income   = interest + dividend_per_share * f.shares;
    const double pnl      = interest + (p_new - p_old + dividend_per_share) * f.shares;
    const double flow     = (reinvestment - 1.) * pnl;

    f.cash += income + flow;
    refinance(f, p_new);
    f.wealth_prev = w_old;

    const double ret = w_old != 0. ? pnl / w_old : 0.;
    return {f, pnl, flow, ret};
}

bool check_solvency(const fund &f, double p)
{
    return wealth(f, p) > 0.;
}

fund replenish_to(fund f, double w_target, double p)
{
    f.cash += w_target - wealth(f, p);
    refinance(f, p);
    return f;
}

double realized_leverage(const fund &f, double p)
{
    return std::abs(f.shares) * p / wealth(f, p);
}

} // namespace market_ecology
