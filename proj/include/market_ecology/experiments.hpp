/// \file   experiments.hpp
///
/// \brief  Experiment harness: sweeps, ensembles and the estimators built on them.
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
#ifndef ME_EXPERIMENTS_HPP
#define ME_EXPERIMENTS_HPP

#include "market_ecology/config.hpp"
#include "market_ecology/ecology.hpp"
#include "market_ecology/engine.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace market_ecology {

///
/// \brief  Size of the worker pool: MARKET_ECOLOGY_WORKERS when set to a
///         positive integer, otherwise the hardware concurrency.
///
std::size_t worker_count();

///
/// \brief  Calls body(0) ... body(n - 1) on a bounded pool of threads.
///         The exception of the lowest failing index is rethrown.
///
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body,
                  std::size_t workers = worker_count());

///
/// \brief  Summary statistics of one run over its analysis window.
///
struct run_summary
{
    /// NaN for a strategy with fewer than two returns in the window
    std::array<double, 3> returns{};           ///< annualized geometric mean
    std::array<double, 3> return_volatility{}; ///< annualized std of per-step returns
    std::array<double, 3> sharpe_ratio{};
    double acf1 = 0.;           ///< lag-1 autocorrelation of price log returns
    double price_volatility = 0.;
    double mispricing = 0.;     ///< mean |log2(p / V)|
    std::size_t steps = 0;
    bool halted = false;
};

run_summary summarize_run(const run_output &out);

///
/// \brief  Relative wealth of the core funds with insolvent funds counted
///         as zero.
///
wealth_vector relative_wealth(const step_record &record);

///
/// \brief  Supply of the base configuration, used unchanged when one
///         strategy is removed.
///
double base_supply(const run_config &base);

///
/// \brief  Constant-wealth run at the given weights (relative to the base
///         total wealth) with the base supply and run index seed_index.
///
run_config constant_wealth_config(const run_config &base,
                                  const std::array<double, 3> &weights,
                                  std::size_t seed_index);

///
/// \brief  Estimator of the three strategies' annualized returns from
///         constant-wealth runs; absent strategies report zero.
///
return_estimator make_return_estimator(const run_config &base);

///
/// \brief  Evaluates all (weights, seed) pairs in parallel and serves them
///         from a table; unknown pairs are computed on demand.
///
return_estimator precomputed_estimator(const run_config &base,
                                       const std::vector<std::array<double, 3>> &points,
                                       std::size_t seeds);

community_matrix community_experiment(const run_config &base, const experiment_settings &s);

struct trophic_study
{
    food_web web;
    trophic_result levels;
    std::vector<std::string> per_seed_ordering;   ///< ordering from each seed alone
};

trophic_study trophic_experiment(const run_config &base, const experiment_settings &s);

///
/// \brief  Barycentric grid i + j + k = resolution mapped to
///         w = margin + (1 - 3 margin) (i, j, k) / resolution.
///
std::vector<wealth_vector> simplex_grid(std::size_t resolution, double margin);

struct sweep_row
{
    std::size_t index = 0;
    wealth_vector w;
    run_summary mean;            ///< seed averages
    std::optional<std::size_t> dominant;  ///< highest finite mean return
    std::string trophic;         ///< ordering, "undefined" or "failed"; empty when not computed
    std::size_t failures = 0;    ///< halted runs
};

sweep_row sweep_point(const run_config &base, const wealth_vector &w, std::size_t seeds,
                      bool with_trophic);

std::vector<sweep_row> sweep_simplex(const run_config &base, const experiment_settings &s,
                                     bool with_trophic = true);

struct trajectory
{
    std::size_t run = 0;
    wealth_vector initial;
    std::vector<double> years;
    std::vector<wealth_vector> path;
    std::vector<std::array<bool, 3>> alive;
    bool insolvent = false;
    double insolvency_year = -1.;
    std::string error;
};

///
/// \brief  Reinvest-mode runs from uniform random or fixed initial wealth,
///         sampled every sample_years. Insolvent funds are frozen and
///         count as zero wealth; after a fatal error the last state is
///         carried forward.
///
std::vector<trajectory> monte_carlo_trajectories(const run_config &base, const experiment_settings &s);

struct convergence_curve
{
    std::string parameter;
    double variant = 0.;
    std::vector<double> years;
    std::vector<double> kl;          ///< NaN where a fit is degenerate
    double insolvent_fraction = 0.;
    std::size_t runs = 0;
};

///
/// \brief  Gaussian fit over (w_nt, w_vi) of the ensemble at each sample
///         time against the pooled reference window, D_KL(reference || t).
///
convergence_curve convergence_curve_of(const std::vector<trajectory> &runs, const experiment_settings &s,
                                       std::string parameter, double variant);

std::vector<convergence_curve> convergence_experiment(const run_config &base, const experiment_settings &s);

///
/// \brief  Per-step log growth of price-taking bettors holding m x* of
///         their wealth along a recorded path, x* from public estimates
///         with the given leverage limit. Entry k is for multipliers[k].
///
std::vector<double> shadow_kelly_growth(const run_output &out, const std::vector<double> &multipliers,
                                        double lambda_max);

struct kelly_optimality
{
    std::vector<double> multipliers;
    std::vector<double> mean_log_growth;   ///< annualized
    std::vector<double> standard_error;
    std::size_t runs = 0;
};

kelly_optimality kelly_optimality_experiment(const run_config &base, const experiment_settings &s);

struct survival_curves
{
    std::vector<std::string> names;
    std::vector<double> years;
    std::vector<std::vector<double>> fraction;   ///< [fund][sample]
    std::size_t runs = 0;
};

///
/// \brief  Reinvest-mode runs with a Kelly bettor added; fraction of runs
///         in which each fund is still solvent at each sample time.
///
survival_curves survival_experiment(const run_config &base, const experiment_settings &s);

struct malfunction_study
{
    malfunction_coeffs volatility;
    malfunction_coeffs mispricing;
    std::vector<std::size_t> t;
    std::vector<wealth_vector> wealth;
    std::vector<double> rolling_volatility;
    std::vector<double> mispricing_series;
    bool halted = false;
};

///
/// \brief  One reinvest-mode run from the base wealth vector; daily rolling
///         volatility (252 steps) and mispricing regressed on the wealths.
///
malfunction_study malfunction_experiment(const run_config &base);

struct stylized_facts
{
    std::vector<double> returns;
    double mean = 0.;
    double volatility = 0.;
    double skewness = 0.;
    double excess_kurtosis = 0.;
    std::vector<double> acf_returns;            ///< lags 1 .. max_lag
    std::vector<double> acf_absolute_returns;
    double mean_mispricing = 0.;
    double max_mispricing = 0.;
};

stylized_facts stylized_facts_experiment(const run_config &base, const experiment_settings &s);

} // namespace market_ecology

#endif // ME_EXPERIMENTS_HPP
