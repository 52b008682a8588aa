#pragma once

#include <cstdint>
#include <random>

namespace qlink {

/// The one generator used for every stochastic output.
using Rng = std::mt19937_64;

/// Independent seed for item `index` of a run seeded with `master`
/// (splitmix64 finalizer over the pair).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace qlink
