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

#ifndef QRTKIT_DIVERGENCE_HPP
#define QRTKIT_DIVERGENCE_HPP

#include <cstdint>

#include "qrtkit/channel.hpp"
#include "qrtkit/linalg.hpp"
#include "qrtkit/optimize.hpp"
#include "qrtkit/types.hpp"

namespace qrtkit {

// All values in bits. support_ok == false means supp(rho) escapes supp(sigma)
// and value is +infinity.
struct DivergenceValue {
  double value = 0.0;
  bool support_ok = true;
  bool finite() const { return support_ok; }
};

// Von Neumann entropy in bits.
double entropy(const cmat& rho, double support_tol = tol::support);

// Tr[rho (log2 rho - log2 sigma)] on supports. sigma may be subnormalized PSD.
DivergenceValue rel_entropy(const cmat& rho, const cmat& sigma,
                            double support_tol = tol::support);

// log2 op_norm(sigma^{-1/2} rho sigma^{-1/2}) on supp(sigma).
DivergenceValue dmax(const cmat& rho, const cmat& sigma, double support_tol = tol::support);

// (1/(alpha-1)) log2 Tr[rho^alpha sigma^{1-alpha}], alpha in (0,1) u (1,2].
DivergenceValue petz_renyi(double alpha, const cmat& rho, const cmat& sigma,
                           double support_tol = tol::support);

// (1/2)||rho - sigma||_1.
double trace_distance(const cmat& rho, const cmat& sigma);

// Adjoint of the Frechet derivative of the matrix natural log at sigma,
// applied to rho: d/dt Tr[rho ln(sigma + tE)] = Tr[E dln_adjoint(sigma,rho)]
// for Hermitian E. sigma must be positive definite (callers smooth it).
cmat dln_adjoint(const cmat& sigma, const cmat& rho);

enum class DivKind { RelEntropy, DMax, TraceDistance };

struct ChannelDivergenceResult {
  double value = 0.0;
  bool support_ok = true;  // false: some iterate certified +infinity
  cvec maximizer;          // pure state vector on R tensor A
  bool converged = false;  // top restarts agree within tol
  int iterations = 0;
};

using AscentOpts = SphereOpts;

// max over pure phi on R tensor A (R iso A) of d(N(phi) || M(phi)).
// The pure-input restriction is lossless for RelEntropy and DMax; for other
// kinds it is a heuristic lower bound.
ChannelDivergenceResult channel_divergence(const ChoiChannel& n, const ChoiChannel& m,
                                           DivKind kind, const AscentOpts& opts = {});

// Choi-level max-relative entropy: least log2 t with t*M - N completely
// positive. Exact, no outer optimization.
DivergenceValue dmax_channels(const ChoiChannel& n, const ChoiChannel& m);

}  // namespace qrtkit

#endif  // QRTKIT_DIVERGENCE_HPP
