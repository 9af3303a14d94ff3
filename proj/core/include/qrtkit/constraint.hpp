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

#ifndef QRTKIT_CONSTRAINT_HPP
#define QRTKIT_CONSTRAINT_HPP

#include <vector>

#include "qrtkit/linalg.hpp"
#include "qrtkit/types.hpp"

namespace qrtkit {

// An affine slice of the PSD cone on a dim-dimensional complex space:
// { X >= 0 : Tr[ops[k] X] = rhs[k] for all k }. Immutable after construction
// by convention; ops are Hermitian.
struct ConstraintSystem {
  int dim = 0;
  std::vector<cmat> ops;
  std::vector<double> rhs;

  void add(const cmat& f, double r);
  // Appends one row per Hermitian basis element of expr's space:
  // Tr[B_k lhs] = Tr[B_k target].
  void add_matrix_equality(const std::vector<cmat>& lhs_coeff_per_basis,
                           const std::vector<double>& rhs_per_basis);
};

struct MembershipReport {
  bool inside = false;
  double worst_equality = 0.0;  // max |Tr[F X] - rhs|
  double min_eigenvalue = 0.0;
};

MembershipReport membership(const ConstraintSystem& s, const cmat& x,
                            double eq_tol = tol::membership, double eig_floor = tol::psd);

}  // namespace qrtkit

#endif  // QRTKIT_CONSTRAINT_HPP
