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

#ifndef QRTKIT_CHANNEL_HPP
#define QRTKIT_CHANNEL_HPP

#include <vector>

#include "qrtkit/linalg.hpp"
#include "qrtkit/random.hpp"
#include "qrtkit/types.hpp"

namespace qrtkit {

// Choi matrix convention: J = sum_{x,y} |x><y|_A tensor N(|x><y|), so
// Tr J = dim_in for trace-preserving maps, CP iff J >= 0, TP iff
// Tr_B J = I_A. The input factor A is leftmost in J. A reference system R,
// when present, is always the leftmost tensor factor of states.
struct ChoiChannel {
  int dim_in = 0;
  int dim_out = 0;
  cmat choi;
};

bool is_cp(const ChoiChannel& n, double eig_floor = tol::psd);
bool is_tp(const ChoiChannel& n, double tp_tol = tol::tp);
bool is_cptp(const ChoiChannel& n);

// Validates shape + hermiticity, hermitizes round-off, and when `cptp` also
// enforces CP (NotCp) and TP (NotTp).
ChoiChannel make_channel(int dim_in, int dim_out, const cmat& choi, bool cptp = true);

ChoiChannel choi_from_kraus(int dim_in, int dim_out, const std::vector<cmat>& kraus);
std::vector<cmat> kraus_from_choi(const ChoiChannel& n, double support_tol = tol::support);

// (id_R tensor N)(rho) with rho on R tensor A; dim_r is deduced from shapes.
cmat apply(const ChoiChannel& n, const cmat& rho_ra);
// Adjoint map with a spectator R: (id_R tensor N^dag)(y) with y on R tensor B.
cmat apply_adjoint(const ChoiChannel& n, const cmat& y_rb);

// m after n.
ChoiChannel compose(const ChoiChannel& m, const ChoiChannel& n);
ChoiChannel tensor_channels(const ChoiChannel& a, const ChoiChannel& b);
ChoiChannel channel_power(const ChoiChannel& n, int copies);

ChoiChannel identity_channel(int d);
ChoiChannel replacement_channel(int dim_in, const cmat& sigma);
ChoiChannel unitary_channel(const cmat& u);
ChoiChannel dephasing_channel(int d);
// Unitary permutation of n = perm.size() factors of dimension d each;
// conjugating by it equals permute_factors with the same perm.
ChoiChannel permutation_channel(int d, const std::vector<int>& perm);

// Stinespring dilation with a Haar random isometry A -> B tensor E;
// requires dim_out * dim_env >= dim_in.
ChoiChannel random_channel(int dim_in, int dim_out, int dim_env, Rng rng);

// Pre/post realization: theta[N] = post o (N tensor id_E) o pre with
// pre: A_outer -> A tensor E and post: B tensor E -> B_outer.
struct Superchannel {
  ChoiChannel pre;
  ChoiChannel post;
  int dim_a = 0;
  int dim_b = 0;
  int dim_e = 0;
};

Superchannel make_superchannel(const ChoiChannel& pre, const ChoiChannel& post, int dim_a,
                               int dim_b, int dim_e);
Superchannel identity_superchannel(int dim_a, int dim_b);
ChoiChannel superchannel_apply(const Superchannel& theta, const ChoiChannel& n);

}  // namespace qrtkit

#endif  // QRTKIT_CHANNEL_HPP
