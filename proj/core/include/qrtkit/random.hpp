// Copyright 2026 The qrtkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRTKIT_RANDOM_HPP
#define QRTKIT_RANDOM_HPP

#include <cstdint>
#include <random>

#include "qrtkit/types.hpp"

namespace qrtkit {

// All randomness flows through a generator passed by value: a call with the
// same generator state reproduces the same output. Derive distinct streams
// with seeded().
using Rng = std::mt19937_64;

Rng seeded(uint64_t seed, uint64_t stream = 0);

// iid standard complex Gaussian entries.
cmat ginibre(int rows, int cols, Rng rng);

// Haar-distributed via QR with the phase convention fixed (R diagonal > 0).
cmat random_unitary(int d, Rng rng);

cvec random_pure(int d, Rng rng);

// rank = 0 means full rank.
cmat random_density(int d, Rng rng, int rank = 0);

}  // namespace qrtkit

#endif  // QRTKIT_RANDOM_HPP
