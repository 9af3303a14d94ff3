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

#ifndef QRTKIT_OPTIMIZE_HPP
#define QRTKIT_OPTIMIZE_HPP

#include <functional>
#include <vector>

#include "qrtkit/constraint.hpp"
#include "qrtkit/random.hpp"
#include "qrtkit/types.hpp"

namespace qrtkit {

// Heuristic multistart gradient ascent over unit vectors. grad, when present,
// is the Wirtinger derivative df/dpsi*; otherwise finite differences are used.
struct SphereObjective {
  std::function<double(const cvec&)> f;
  std::function<cvec(const cvec&)> grad;
};

struct SphereAscentResult {
  cvec argmax;
  double value = 0.0;
  bool converged = false;  // top restart values agree within tol
  int iterations = 0;
  std::vector<double> restart_values;  // sorted descending
};

struct SphereOpts {
  int restarts = 32;
  int max_iters = 500;
  double tol = 1e-6;
  uint64_t seed = 1;
  double fd_step = 1e-5;
};

SphereAscentResult maximize_on_sphere(int dim, const SphereObjective& obj,
                                      const SphereOpts& opts,
                                      const std::vector<cvec>& seeds = {});

// Certified minimization of a smooth convex f over a bounded affine slice of
// the PSD cone. The workhorse is conditional-gradient (linear SDP subproblems
// give vertices and the duality-gap certificate); an interior log-det barrier
// quasi-Newton polish accelerates convergence between vertex steps. The
// returned gap always comes from one exact linearized subproblem at x.
struct ConvexMinOpts {
  double gap_tol = tol::fw_gap;
  int max_iters = 200;       // conditional-gradient steps
  int polish_iters = 400;    // quasi-Newton iterations per polish
  double mu_init = 1e-2;
  double mu_final = 1e-10;
};

struct ConvexMinResult {
  cmat x;
  double value = 0.0;
  double gap = 0.0;  // value - gap <= true minimum <= value
  bool converged = false;
  int iterations = 0;
};

ConvexMinResult minimize_convex_over_set(const ConstraintSystem& set,
                                         const std::function<double(const cmat&)>& f,
                                         const std::function<cmat(const cmat&)>& grad,
                                         const cmat& x0, const ConvexMinOpts& opts = {});

// Orthonormal (Hilbert-Schmidt) Hermitian basis of the tangent space of the
// affine constraints, plus exact affine projection of a nearby point.
struct AffineSlice {
  int dim = 0;
  std::vector<cmat> tangent;  // orthonormal Hermitian directions
  cmat project(const cmat& x) const;  // nearest point satisfying equalities

  static AffineSlice build(const ConstraintSystem& set);

 private:
  rmat k_rows_;        // constraint coordinates
  rvec k_rhs_;
  rmat pinv_factor_;   // K^T (K K^T)^{-1}
};

}  // namespace qrtkit

#endif  // QRTKIT_OPTIMIZE_HPP
