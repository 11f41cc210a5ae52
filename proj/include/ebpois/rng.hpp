#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ebpois {

/// Identifier recorded in every output that consumed random numbers.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64/splitmix64-seeded streams/boost.random distributions";

using Engine = std::mt19937_64;

/// SplitMix64 finalizer applied to (seed, stream); distinct streams of one
/// seed get decorrelated engine seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace ebpois
