/// \file   test_processes.cpp
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
#include "market_ecology/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace market_ecology;

namespace {

double sample_acf(const std::vector<double> &x, std::size_t lag)
{
    double m = 0.;
    for(double v : x) {
        m += v;
    }
    m /= double(x.size());
    double num = 0., den = 0.;
    for(std::size_t t = 0; t < x.size(); ++t) {
        den += (x[t] - m) * (x[t] - m);
        if(t >= lag) {
            num += (x[t] - m) * (x[t - lag] - m);
        }
    }
    return num / den;
}

std::vector<double> simulate_u(double omega, std::size_t n, std::uint64_t seed)
{
    dividend_state s;
    s.omega = omega;
    normal_stream z(seed);
    std::vector<double> u(n);
    for(auto &v : u) {
        v = step_u(s, z());
    }
    return u;
}

} // namespace

TEST_CASE("step_u passes the shock through when omega is zero")
{
    dividend_state s;
    CHECK(step_u(s, 0.7) == 0.7);
}

TEST_CASE("step_u keeps only the lag-two term without a shock")
{
    dividend_state s;
    s.omega = 0.1;
    s.u_lag1 = 5.;
    s.u_lag2 = 1.;
    CHECK(step_u(s, 0.) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s.u_lag2 == 5.);
    CHECK(s.u_lag1 == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("U has unit variance and lag-two autocorrelation omega")
{
    const auto u = simulate_u(0.1, 1'000'000, 11);
    double m = 0., v = 0.;
    for(double x : u) {
        m += x;
    }
    m /= double(u.size());
    for(double x : u) {
        v += (x - m) * (x - m);
    }
    v /= double(u.size() - 1);
    CHECK(v == doctest::Approx(1.).epsilon(0.01));
    CHECK(std::abs(sample_acf(u, 1)) < 0.01);
    CHECK(std::abs(sample_acf(u, 2) - 0.1) < 0.01);
    // odd lags vanish and even lags decay as powers of omega
    CHECK(std::abs(sample_acf(u, 3)) < 0.01);
    CHECK(std::abs(sample_acf(u, 4) - 0.01) < 0.01);
}

TEST_CASE("U variance is near one for several seeds")
{
    for(std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const auto u = simulate_u(0.1, 100'000, seed);
        double v = 0.;
        for(double x : u) {
            v += x * x;
        }
        v /= double(u.size());
        CHECK(std::abs(v - 1.) < 0.02);
    }
}

TEST_CASE("degenerate dividend process leaves the dividend unchanged")
{
    dividend_state s;
    s.d_curr = 3.25;
    CHECK(step_dividend(s, 1.3) == 3.25);
}

TEST_CASE("dividend update evaluates the geometric closed form")
{
    dividend_state s;
    s.d_curr = 1.;
    s.sigma_step = 0.06 / std::sqrt(252.);
    const double sig = 0.06 / std::sqrt(252.);
    const double expected = std::exp(-sig * sig / 2. + sig);
    CHECK(step_dividend(s, 1.) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("dividend log growth matches the annual growth rate")
{
    model_parameters p;
    auto s = make_dividend_state(p, 1.);
    normal_stream z(5);
    const std::size_t n = 1'000'000;
    double log_d = 0.;
    for(std::size_t t = 0; t < n; ++t) {
        const double before = s.d_curr;
        step_dividend(s, z());
        log_d += std::log(s.d_curr / before);
        // renormalize to avoid overflow; the ratio is what matters
        s.d_curr = 1.;
    }
    const double per_year = log_d / double(n) * 252.;
    const double expected = std::log(1.01) - 0.06 * 0.06 / 2.;
    // standard error over ~3968 years, inflated for the lag-two correlation
    const double se = 0.06 / std::sqrt(double(n) / 252.) * std::sqrt(1.2);
    CHECK(std::abs(per_year - expected) < 4. * se);
    CHECK(std::abs(per_year - 0.01) < 0.005);
}

TEST_CASE("dividends stay positive under extreme shocks")
{
    dividend_state s;
    s.sigma_step = 0.5;
    s.omega = 0.9;
    for(int t = 0; t < 20; ++t) {
        step_dividend(s, t % 2 == 0 ? -8. : -6.);
        REQUIRE(s.d_curr > 0.);
    }
}

TEST_CASE("noise factor examples")
{
    noise_factor_state s;
    s.rho = 0.5;
    s.x_curr = 1.;
    CHECK(step_noise_factor(s, 0.) == 1.);
    s.x_curr = 2.;
    CHECK(step_noise_factor(s, 0.) == 1.5);
}

TEST_CASE("noise factor deviation halves over six years")
{
    noise_factor_state s;
    s.rho = 1. - std::pow(0.5, 1. / (6. * 252.));
    s.x_curr = 2.;
    for(int t = 0; t < 1512; ++t) {
        step_noise_factor(s, 0.);
    }
    CHECK(std::abs(s.x_curr - 1. - 0.5) < 1e-9);
    CHECK(reversion_rate_for_half_life(6.) == s.rho);
}

TEST_CASE("noise factor is floored")
{
    noise_factor_state s;
    s.rho = 0.1;
    s.gamma_step = 1.;
    CHECK(step_noise_factor(s, -100.) == s.x_floor);
}

TEST_CASE("invalid process states are rejected")
{
    dividend_state d;
    d.omega = 1.;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.omega = 0.;
    d.d_curr = 0.;
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    noise_factor_state x;
    x.rho = 0.;
    CHECK_THROWS_AS(x.validate(), std::invalid_argument);
    x.rho = 1.;
    CHECK_THROWS_AS(x.validate(), std::invalid_argument);
}

TEST_CASE("equal seeds give bit-identical series")
{
    CHECK(simulate_u(0.1, 10'000, 42) == simulate_u(0.1, 10'000, 42));
    CHECK(simulate_u(0.1, 100, 42) != simulate_u(0.1, 100, 43));
    CHECK(stream_seed(1, "dividend", 0) != stream_seed(1, "noise", 0));
    CHECK(stream_seed(1, "dividend", 0) != stream_seed(1, "dividend", 1));
}

TEST_CASE("step conversions use the 252-day year")
{
    model_parameters p;
    const auto r = to_step_rates(p);
    CHECK(r.growth_log == doctest::Approx(std::log(1.01) / 252.).epsilon(1e-15));
    CHECK(r.dividend_sigma == doctest::Approx(0.06 / std::sqrt(252.)).epsilon(1e-15));
    CHECK(r.noise_gamma == doctest::Approx(0.12 / std::sqrt(252.)).epsilon(1e-15));
    CHECK(std::pow(1. + r.risk_free, 252.) == doctest::Approx(1.01).epsilon(1e-13));
}
