/// \file   config.hpp
///
/// \brief  Flat key-value configuration files, overrides and the canonical hash.
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
#ifndef ME_CONFIG_HPP
#define ME_CONFIG_HPP

#include "market_ecology/engine.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace market_ecology {

class config_error
: public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

using key_values = std::map<std::string, std::string>;

///
/// \brief  Parses `key = value` lines. Blank lines and text after `#` are
///         ignored. Throws config_error on malformed lines, duplicate or
///         unknown keys.
///
key_values parse_config_text(std::string_view text);

key_values load_config_file(const std::filesystem::path &path);

///
/// \brief  Applies one `key=value` override.
///
void apply_override(key_values &values, std::string_view assignment);

///
/// \brief  Every known key with its default value.
///
const key_values &default_config();

///
/// \brief  Defaults merged with the given values, each value re-printed in
///         a normal form so that equivalent files hash equally.
///
key_values canonicalize(const key_values &values);

///
/// \brief  FNV-1a over the sorted `key=value` lines of the canonical
///         config, prefixed with `experiment=<id>`, as 16 hex digits.
///
std::string config_hash(const key_values &canonical, std::string_view experiment);

///
/// \brief  Run configuration described by the keys.
///
run_config to_run_config(const key_values &values);

///
/// \brief  Settings of the experiment harness.
///
struct experiment_settings
{
    std::size_t seeds      = 5;
    std::size_t resolution = 15;
    double margin          = 0.02;
    double h               = 0.02;
    std::size_t runs       = 50;
    bool uniform_init      = true;
    double sample_years    = 1.;     ///< spacing of recorded trajectory samples
    double reference_start_years = 100.;
    double reference_end_years   = 200.;
    std::string variant_parameter = "f";
    std::vector<double> variants  = {0.1, 0.3, 1., 3., 5.};
    std::vector<double> multipliers = {0., 0.25, 0.5, 0.75, 1., 1.25, 1.5, 2.};
    double shadow_lambda   = 8.;     ///< leverage limit of the shadow Kelly bettors
    double slice_nt        = 0.42;   ///< noise-trader wealth of the ACF slice
    std::size_t max_lag    = 50;
    bool sweep_trophic     = true;   ///< food-web ordering per sweep point
};

experiment_settings to_experiment_settings(const key_values &values);

double parse_double(std::string_view key, std::string_view text);
std::uint64_t parse_unsigned(std::string_view key, std::string_view text);
bool parse_bool(std::string_view key, std::string_view text);
std::vector<double> parse_list(std::string_view key, std::string_view text);

} // namespace market_ecology

#endif // ME_CONFIG_HPP
