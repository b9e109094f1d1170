/// \file   ecology.hpp
///
/// \brief  Ecological and market-malfunction analytics over captured runs.
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
#ifndef ME_ECOLOGY_HPP
#define ME_ECOLOGY_HPP

#include "market_ecology/wealth_vector.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace market_ecology {

using matrix3 = std::array<std::array<double, 3>, 3>;

///
/// \brief  Thrown when an estimator does not have enough data.
///
class insufficient_data
: public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

///
/// \brief  Annualized geometric mean (prod(1 + r))^(252/T) - 1.
///
double avg_return(std::span<const double> returns);

///
/// \brief  Moves w_j by delta and rescales the other two entries
///         proportionally so that the vector stays on the simplex. Throws
///         std::domain_error when the result leaves the closed simplex.
///
wealth_vector perturb(const wealth_vector &base, std::size_t j, double delta);

///
/// \brief  Returns of the three strategies measured at a wealth point.
///
///         The weights are relative to the reference total wealth and need
///         not sum to one (removal runs zero one entry). The seed index
///         selects common random numbers across points.
///
using return_estimator = std::function<std::array<double, 3>(const std::array<double, 3> &weights,
                                                            std::size_t seed_index)>;

struct community_matrix
{
    matrix3 g{};
    matrix3 standard_error{};
    double h = 0.;
    std::size_t seeds = 0;
    wealth_vector base;

    /// entry divided by its standard error
    [[nodiscard]] double t_stat(std::size_t i, std::size_t j) const;
};

///
/// \brief  G_ij = (pi_i(w + h e_j) - pi_i(w - h e_j)) / (2h), perturbed
///         points renormalized on the simplex, averaged over seeds with
///         standard errors from seed dispersion.
///
community_matrix estimate_community_matrix( const wealth_vector &base
                                          , double h
                                          , std::size_t seeds
                                          , const return_estimator &estimator);

struct food_web
{
    matrix3 raw{};          ///< max(0, pi_i(w) - pi_i(w with w_j = 0)), seed averaged
    matrix3 normalized{};   ///< positive rows scaled to sum to one
    matrix3 difference{};   ///< seed-averaged pi_i(w) - pi_i(w without j), unclipped
    matrix3 standard_error{};
    std::size_t seeds = 0;
};

///
/// \brief  Rows with a positive sum are divided by it; zero rows stay zero.
///
matrix3 normalize_rows(const matrix3 &a);

///
/// \brief  Food-web matrix from removal runs: the base point against the
///         base point with one strategy's wealth set to zero (the other
///         absolute wealths unchanged). Diagonal entries are zero.
///
food_web estimate_food_web( const wealth_vector &base
                          , std::size_t seeds
                          , const return_estimator &estimator);

struct trophic_result
{
    std::optional<std::array<double, 3>> levels;   ///< empty when undefined
    std::size_t iterations = 0;

    [[nodiscard]] bool defined() const { return levels.has_value(); }
};

///
/// \brief  Fixed-point iteration T <- 1 + A T from T = 1. Converged when
///         max |delta T| < 1e-10 within 10^4 iterations; undefined (cycle)
///         otherwise.
///
trophic_result trophic_levels(const matrix3 &a);

///
/// \brief  Order of the strategies by increasing trophic level, e.g.
///         "nt<vi<tf", or "undefined".
///
std::string trophic_ordering(const trophic_result &result);

///
/// \brief  Rolling standard deviation of log returns over `window` returns,
///         annualized by sqrt(252). Entry k covers returns k .. k+window-1,
///         i.e. it ends at price index k + window.
///
std::vector<double> rolling_volatility(std::span<const double> prices, std::size_t window = 252);

///
/// \brief  Annualized standard deviation of all log returns of the series.
///
double volatility(std::span<const double> prices);

///
/// \brief  |log2(p / V)|.
///
double mispricing(double p, double v);

///
/// \brief  Sample Pearson autocorrelation of the series at the lag.
///
double return_autocorrelation(std::span<const double> returns, std::size_t lag = 1);

struct malfunction_coeffs
{
    std::array<double, 3> coefficients{};   ///< (nt, vi, tf), no intercept
    std::array<double, 3> t_stats{};
    double r_squared = 0.;            ///< centered, valid since the weights sum to one
    double r_squared_uncentered = 0.;
    std::size_t observations = 0;
};

///
/// \brief  OLS of a metric on the three relative wealths without an
///         intercept. Throws std::domain_error on a rank-deficient design.
///
malfunction_coeffs regress_malfunction(std::span<const wealth_vector> wealths,
                                       std::span<const double> metric);

///
/// \brief  Linear prediction b_nt w_nt + b_vi w_vi + b_tf w_tf.
///
double predict_metric(const wealth_vector &w, const std::array<double, 3> &coefficients);

///
/// \brief  Volatility and mispricing predictors with the reference
///         coefficients (2.4, -68, 107) and (-0.15, -1.02, 1.5).
///
std::array<double, 2> predict_metrics(const wealth_vector &w);

struct gaussian
{
    std::vector<double> mean;
    std::vector<double> covariance;   ///< row-major, dimension mean.size()
};

///
/// \brief  0.5 [tr(S2^-1 S1) + (m2 - m1)' S2^-1 (m2 - m1) - k + ln(|S2| / |S1|)],
///         the divergence of the first Gaussian from the second. Throws
///         std::domain_error unless both covariances are positive definite.
///
double kl_divergence_gaussian(const gaussian &first, const gaussian &second);

///
/// \brief  Sample mean and covariance (n - 1 normalization) of points of
///         equal dimension.
///
gaussian fit_gaussian(std::span<const std::vector<double>> points);

///
/// \brief  Years (s / dS)^2 needed to tell two Sharpe ratios apart at s
///         standard deviations.
///
double detection_time(double s, double sharpe_gap);

///
/// \brief  Annualized mean over annualized standard deviation of per-step
///         returns, without subtracting the risk-free rate.
///
double sharpe(std::span<const double> returns);

} // namespace market_ecology

#endif // ME_ECOLOGY_HPP
