/// \file   wealth_vector.hpp
///
/// \brief  Relative wealths (w_nt, w_vi, w_tf) on the unit simplex.
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
#ifndef ME_WEALTH_VECTOR_HPP
#define ME_WEALTH_VECTOR_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace market_ecology {

struct wealth_vector
{
    std::array<double, 3> w = {1. / 3., 1. / 3., 1. / 3.};

    wealth_vector() = default;

    wealth_vector(double nt, double vi, double tf)
    : w{nt, vi, tf}
    {}

    double &operator[](std::size_t i) { return w[i]; }
    double operator[](std::size_t i) const { return w[i]; }

    [[nodiscard]] double sum() const { return w[0] + w[1] + w[2]; }

    ///
    /// \brief  Throws std::invalid_argument unless every entry is
    ///         non-negative and the entries sum to one within 1e-12.
    ///
    void validate() const
    {
        for(double x : w) {
            if(!(x >= 0.) || !std::isfinite(x)) {
                throw std::invalid_argument("wealth vector entries must be non-negative");
            }
        }
        if(std::abs(sum() - 1.) > 1e-12) {
            throw std::invalid_argument("wealth vector must sum to one, got " + std::to_string(sum()));
        }
    }

    ///
    /// \brief  Rescales non-negative entries so that they sum to one.
    ///
    static wealth_vector normalized(double nt, double vi, double tf)
    {
        const double s = nt + vi + tf;
        if(!(s > 0.)) {
            throw std::invalid_argument("cannot normalize a zero wealth vector");
        }
        return {nt / s, vi / s, tf / s};
    }
};

} // namespace market_ecology

#endif // ME_WEALTH_VECTOR_HPP
