/// \file   rng.hpp
///
/// \brief  Seeding rule that fans a master seed out to per-process streams.
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
#ifndef ME_RNG_HPP
#define ME_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace market_ecology {

using random_engine = std::mt19937_64;

///
/// \brief  64-bit FNV-1a hash, used for process names and config hashes.
///
constexpr std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for(unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

///
/// \brief  SplitMix64 finalizer.
///
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

///
/// \brief  Seed of the sub-stream for process `name` in run `run_index`.
///
///         sub-stream id = fnv1a64(name) XOR run_index; the engine seed is
///         splitmix64(master XOR splitmix64(id)).
///
constexpr std::uint64_t stream_seed( std::uint64_t master
                                   , std::string_view name
                                   , std::uint64_t run_index)
{
    const std::uint64_t id = fnv1a64(name) ^ run_index;
    return splitmix64(master ^ splitmix64(id));
}

inline random_engine make_stream( std::uint64_t master
                                , std::string_view name
                                , std::uint64_t run_index)
{
    return random_engine(stream_seed(master, name, run_index));
}

///
/// \brief  Standard-normal draws from one seeded sub-stream.
///
class normal_stream
{
public:
    explicit normal_stream(std::uint64_t seed)
    : engine_(seed)
    {}

    double operator()()
    {
        return normal_(engine_);
    }

private:
    random_engine engine_;
    std::normal_distribution<double> normal_{0., 1.};
};

} // namespace market_ecology

#endif // ME_RNG_HPP
