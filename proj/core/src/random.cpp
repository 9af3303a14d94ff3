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

#include "qrtkit/random.hpp"

#include <cmath>

namespace qrtkit {

Rng seeded(uint64_t seed, uint64_t stream) {
  // splitmix64 over (seed, stream) so nearby streams decorrelate.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return Rng(z);
}

cmat ginibre(int rows, int cols, Rng rng) {
  if (rows <= 0 || cols <= 0) throw InvalidArgument("ginibre: dims must be positive");
  std::normal_distribution<double> g(0.0, 1.0);
  cmat out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double re = g(rng);
      double im = g(rng);
      out(i, j) = cplx(re, im);
    }
  return out;
}

cmat random_unitary(int d, Rng rng) {
  cmat g = ginibre(d, d, rng);
  Eigen::HouseholderQR<cmat> qr(g);
  cmat q = qr.householderQ();
  cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the result is Haar rather than QR-convention biased.
  for (int j = 0; j < d; ++j) {
    cplx rj = r(j, j);
    cplx phase = (std::abs(rj) > 0.0) ? rj / std::abs(rj) : cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

cvec random_pure(int d, Rng rng) {
  cmat g = ginibre(d, 1, rng);
  cvec v = g.col(0);
  double n = v.norm();
  if (n == 0.0) {
    v = cvec::Zero(d);
    v[0] = 1.0;
    return v;
  }
  return v / n;
}

cmat random_density(int d, Rng rng, int rank) {
  if (rank < 0 || rank > d) throw InvalidArgument("random_density: bad rank");
  const int r = (rank == 0) ? d : rank;
  cmat g = ginibre(d, r, rng);
  cmat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace qrtkit
