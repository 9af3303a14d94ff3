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

#include "qrtkit/constraint.hpp"

#include <cmath>

#include "qrtkit/linalg.hpp"

namespace qrtkit {

void ConstraintSystem::add(const cmat& f, double r) {
  if (f.rows() != dim || f.cols() != dim) throw DimMismatch("ConstraintSystem::add");
  const double scale = 1.0 + f.cwiseAbs().maxCoeff();
  if ((f - f.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw InvalidArgument("ConstraintSystem::add: functional not Hermitian");
  ops.push_back(hermitize(f));
  rhs.push_back(r);
}

void ConstraintSystem::add_matrix_equality(const std::vector<cmat>& lhs_coeff_per_basis,
                                           const std::vector<double>& rhs_per_basis) {
  if (lhs_coeff_per_basis.size() != rhs_per_basis.size())
    throw DimMismatch("ConstraintSystem::add_matrix_equality");
  for (size_t k = 0; k < lhs_coeff_per_basis.size(); ++k)
    add(lhs_coeff_per_basis[k], rhs_per_basis[k]);
}

MembershipReport membership(const ConstraintSystem& s, const cmat& x, double eq_tol,
                            double eig_floor) {
  if (x.rows() != s.dim || x.cols() != s.dim) throw DimMismatch("membership");
  MembershipReport rep;
  rep.worst_equality = 0.0;
  for (size_t i = 0; i < s.ops.size(); ++i)
    rep.worst_equality = std::max(rep.worst_equality, std::abs(hs_inner(s.ops[i], x) - s.rhs[i]));
  rep.min_eigenvalue = min_eig(x);
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  rep.inside = rep.worst_equality <= eq_tol * scale && rep.min_eigenvalue >= -eig_floor * scale;
  return rep;
}

}  // namespace qrtkit
