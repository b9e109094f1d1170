/// \file   test_accounting.cpp
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

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

using namespace market_ecology;

namespace {

fund make_fund(double cash, double shares = 0., double loans = 0.)
{
    fund f;
    f.cash = cash;
    f.shares = shares;
    f.loans = loans;
    return f;
}

} // namespace

TEST_CASE("wealth examples")
{
    CHECK(wealth(make_fund(100.), 7.) == 100.);
    CHECK(wealth(make_fund(0., 10., 50.), 10.) == 50.);
}

TEST_CASE("trade examples")
{
    const auto f = make_fund(100.);
    const auto same = apply_trade(f, 0., 10.);
    CHECK(same.cash == f.cash);
    CHECK(same.shares == f.shares);

    const auto bought = apply_trade(f, 5., 10.);
    CHECK(bought.cash == 50.);
    CHECK(bought.shares == 5.);
    CHECK(wealth(bought, 10.) == 100.);

    const auto shorted = apply_trade(f, -3., 10.);
    CHECK(shorted.shares == -3.);
    CHECK(shorted.cash == 130.);
    CHECK(shorted.margin == 30.);
    CHECK(wealth(shorted, 10.) == 100.);
}

TEST_CASE("buying beyond cash borrows")
{
    const auto f = apply_trade(make_fund(100.), 30., 10.);
    CHECK(f.cash == 0.);
    CHECK(f.loans == 200.);
    CHECK(wealth(f, 10.) == 100.);
    const auto back = apply_trade(f, -30., 10.);
    CHECK(back.loans == 0.);
    CHECK(back.cash == 100.);
}

TEST_CASE("trades conserve wealth and keep the balance sheet consistent")
{
    std::mt19937_64 rng(6);
    std::normal_distribution<double> n(0., 1.);
    std::uniform_real_distribution<double> price(1., 200.);
    auto f = make_fund(1e6);
    for(int k = 0; k < 10'000; ++k) {
        const double p = price(rng);
        const double before = wealth(f, p);
        f = apply_trade(f, 5000. * n(rng), p);
        CHECK(wealth(f, p) == doctest::Approx(before).epsilon(1e-9));
        CHECK(f.loans >= 0.);
        CHECK(f.cash >= f.margin * (1. - 1e-12));
        CHECK(f.margin == doctest::Approx(std::max(0., -f.shares) * p).epsilon(1e-12));
        // keep the fund solvent by marking it back to its cash value occasionally
        if(wealth(f, p) < 1e5) {
            f = replenish_to(f, 1e6, p);
        }
    }
}

TEST_CASE("settlement with full reinvestment of a bond holding")
{
    const double r = 4e-5;
    const auto s = accrue_and_settle(make_fund(1000.), 12., 10., 0.3, r, 1.);
    CHECK(wealth(s.account, 12.) == doctest::Approx(1000. * (1. + r)).epsilon(1e-15));
    CHECK(s.period_return == doctest::Approx(r).epsilon(1e-15));
    CHECK(s.external_flow == 0.);
}

TEST_CASE("settlement without reinvestment keeps wealth constant")
{
    const auto s = accrue_and_settle(make_fund(50., 10., 20.), 13., 10., 0.5, 1e-4, 0.);
    CHECK(wealth(s.account, 13.) == doctest::Approx(130.).epsilon(1e-14));
    CHECK(s.pnl == doctest::Approx(1e-4 * 30. + 35.).epsilon(1e-14));
}

TEST_CASE("settlement with reinvestment rate two doubles the profit")
{
    const auto s = accrue_and_settle(make_fund(0., 10.), 11., 10., 0., 0., 2.);
    CHECK(s.pnl == 10.);
    CHECK(wealth(s.account, 11.) == doctest::Approx(120.).epsilon(1e-15));
    CHECK(s.external_flow == 10.);
    CHECK(s.period_return == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s.account.wealth_prev == 100.);
}

TEST_CASE("wealth change equals reinvested profit")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1., 1.);
    for(int k = 0; k < 1000; ++k) {
        auto f = make_fund(1000. * (1. + u(rng)), 50. * u(rng), 0.);
        f = apply_trade(f, 0., 10.);
        const double p_old = 10., p_new = 10. * (1. + 0.1 * u(rng)), d = 0.05 * (1. + u(rng));
        const double fr = 2. * (1. + u(rng));
        const double w0 = wealth(f, p_old);
        const auto s = accrue_and_settle(f, p_new, p_old, d, 1e-4, fr);
        const double pnl = 1e-4 * (f.cash - f.loans) + (p_new - p_old + d) * f.shares;
        CHECK(s.pnl == doctest::Approx(pnl).epsilon(1e-12));
        CHECK(wealth(s.account, p_new) - w0 == doctest::Approx(fr * pnl).epsilon(1e-9).scale(std::abs(w0)));
    }
}

TEST_CASE("solvency is strict")
{
    CHECK(check_solvency(make_fund(1.), 1.));
    CHECK_FALSE(check_solvency(make_fund(0.), 1.));
    CHECK_FALSE(check_solvency(make_fund(-5.), 1.));
}

TEST_CASE("replenishment adjusts cash only")
{
    const auto at = replenish_to(make_fund(100.), 100., 3.);
    CHECK(at.cash == 100.);
    const auto topped = replenish_to(make_fund(90.), 100., 3.);
    CHECK(topped.cash == 100.);
    const auto invested = apply_trade(make_fund(100.), 20., 10.);
    const auto shrunk = replenish_to(invested, 40., 10.);
    CHECK(shrunk.shares == 20.);
    CHECK(wealth(shrunk, 10.) == doctest::Approx(40.).epsilon(1e-15));
}

TEST_CASE("realized leverage")
{
    const auto f = apply_trade(make_fund(100.), 15., 10.);
    CHECK(realized_leverage(f, 10.) == doctest::Approx(1.5).epsilon(1e-15));
    const auto s = apply_trade(make_fund(100.), -5., 10.);
    CHECK(realized_leverage(s, 10.) == doctest::Approx(0.5).epsilon(1e-15));
}
