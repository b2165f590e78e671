#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "entromin/common.hpp"

namespace entromin {

/// A (master, stream) pair. The same pair always produces the same draws.
struct RandomSeed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const RandomSeed&, const RandomSeed&) = default;
};

using Engine = std::mt19937_64;

Engine make_engine(RandomSeed seed);

// Mixes a master seed with a path of indices into a new 64-bit seed. Used to
// give every (cell, trial) its own reproducible instance.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

Vector gaussian_vector(Engine& engine, Index n);

}  // namespace entromin
