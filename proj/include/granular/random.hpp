#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace granular {

using Rng = std::mt19937_64;

/// Derives an independent sub-stream seed from a master seed, a stream name
/// and an index. Used so that e.g. the split, the SOM trainings and every
/// SONFIS-R step draw from their own generator.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, std::uint64_t index = 0) noexcept;

Rng make_rng(std::uint64_t seed);

}  // namespace granular
