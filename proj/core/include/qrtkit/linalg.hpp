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

#ifndef QRTKIT_LINALG_HPP
#define QRTKIT_LINALG_HPP

#include <functional>
#include <vector>

#include "qrtkit/types.hpp"

namespace qrtkit {

// Spectral decomposition of a Hermitian matrix: a = V diag(w) V^dag,
// eigenvalues ascending, V unitary.
struct Eigh {
  rvec eigenvalues;
  cmat eigenvectors;
};

bool is_hermitian(const cmat& a, double tol_entries = tol::herm);

// (a + a^dag)/2; cheap cleanup for values that are Hermitian up to round-off.
cmat hermitize(const cmat& a);

// Throws NotHermitian when a deviates from a^dag beyond tol_entries.
Eigh eigh(const cmat& a, double tol_entries = tol::herm);

// f applied to eigenvalues above the support cutoff; eigenvalues below
// support_tol * max|eig| are treated as exact zeros and mapped to zero.
cmat matrix_fn_on_support(const cmat& a, const std::function<double(double)>& f,
                          double support_tol = tol::support);

// Generalized matrix power on the support (negative p inverts on the support).
cmat mpow_on_support(const cmat& a, double p, double support_tol = tol::support);

double trace_norm(const cmat& a);   // sum of singular values
double op_norm(const cmat& a);      // largest singular value
cmat positive_part(const cmat& a);  // sum over positive eigenspaces
double min_eig(const cmat& a);

bool is_psd(const cmat& a, double eig_floor = tol::psd);

// Real Hilbert-Schmidt inner product Re Tr[a^dag b].
double hs_inner(const cmat& a, const cmat& b);

cmat tensor(const cmat& a, const cmat& b);
cmat tensor_power(const cmat& a, int n);

// Multi-factor index helpers treat the leftmost factor as most significant.
// partial_trace removes factor `traced`; ptrace_keep keeps exactly `keep`
// (in their original order) and traces out the rest.
cmat partial_trace(const cmat& x, const std::vector<int>& dims, int traced);
cmat ptrace_keep(const cmat& x, const std::vector<int>& dims, const std::vector<int>& keep);

// Reorders tensor factors: output factor k is input factor perm[k].
cmat permute_factors(const cmat& x, const std::vector<int>& dims, const std::vector<int>& perm);

// Partial transpose of factor `which`.
cmat partial_transpose(const cmat& x, const std::vector<int>& dims, int which);

cvec basis_state(int d, int i);
cmat basis_proj(int d, int i);

// Orthogonal Hermitian operator basis of a d-dim space: d diagonal units,
// then for i<j the symmetric and antisymmetric off-diagonal pairs.
// Normalized so that Tr[B_k B_l] = delta_kl up to a factor of 1 for diagonal
// and 2 for off-diagonal elements; enumeration order is deterministic.
std::vector<cmat> hermitian_basis(int d);

// Binary entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double x);

}  // namespace qrtkit

#endif  // QRTKIT_LINALG_HPP
