/// \file   io.hpp
///
/// \brief  CSV tables and JSON run manifests.
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
#ifndef ME_IO_HPP
#define ME_IO_HPP

#include "market_ecology/config.hpp"
#include "market_ecology/engine.hpp"

#include <concepts>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace market_ecology {

///
/// \brief  Raised for unreadable or malformed files.
///
class io_error
: public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// doubles use 17 significant digits; non-finite values print as nan, inf, -inf
std::string cell(double x);
std::string cell(std::string_view text);

template<std::integral T>
std::string cell(T x)
{
    if constexpr(std::same_as<T, bool>) {
        return x ? "1" : "0";
    } else {
        return std::to_string(x);
    }
}

struct csv_table
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    csv_table() = default;
    explicit csv_table(std::vector<std::string> names);

    /// throws std::invalid_argument when the width does not match the header
    void add(std::vector<std::string> row);

    /// index of a named column, io_error when absent
    [[nodiscard]] std::size_t column(std::string_view name) const;
};

///
/// \brief  Writes `# config_hash: <hash>`, the header and one line per row.
///
void write_csv(std::ostream &os, std::string_view config_hash, const csv_table &table);
void write_csv_file(const std::filesystem::path &path, std::string_view config_hash, const csv_table &table);

struct csv_document
{
    std::string config_hash;
    csv_table table;
};

csv_document parse_csv(std::istream &is);
csv_document read_csv_file(const std::filesystem::path &path);

///
/// \brief  One row per step.
///
/// Columns: t, price, value, vi_value, dividend, noise_factor, u, then for each
/// fund `<name>_wealth, <name>_shares, <name>_leverage, <name>_target_leverage,
/// <name>_return, <name>_alive`, then mode, iterations, residual, bound_hit,
/// share_sum, trade_wealth_error.
///
csv_table run_table(const run_output &out);

/// step, fund, wealth of every insolvency
csv_table insolvency_table(const run_output &out);

struct output_file
{
    std::string kind;   ///< table name, e.g. "run"
    std::string path;   ///< relative to the manifest directory
};

struct experiment_manifest
{
    std::string experiment;
    key_values config;                  ///< canonical
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::size_t> run_indices;
    std::vector<output_file> outputs;
    double wall_seconds = 0.;
    std::string git_describe;
};

std::string manifest_json(const experiment_manifest &m);
experiment_manifest parse_manifest(std::string_view json_text);

void write_manifest_file(const std::filesystem::path &path, const experiment_manifest &m);
experiment_manifest read_manifest_file(const std::filesystem::path &path);

} // namespace market_ecology

#endif // ME_IO_HPP
