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

#ifndef QRTKIT_SDP_HPP
#define QRTKIT_SDP_HPP

#include <string>
#include <utility>
#include <vector>

#include "qrtkit/channel.hpp"
#include "qrtkit/constraint.hpp"
#include "qrtkit/types.hpp"

namespace qrtkit {

// Standard-form semidefinite program over block-diagonal PSD variables:
//   minimize   sum_b <C_b, X_b>
//   subject to sum_b <A_{i,b}, X_b> = rhs_i,   X_b >= 0.
// Blocks of dim > 1 are complex Hermitian; dim-1 blocks are real scalars.
// Complex blocks are embedded as real symmetric internally.
struct SdpProblem {
  struct Row {
    std::vector<std::pair<int, cmat>> terms;  // (block, Hermitian coefficient)
    double rhs = 0.0;
  };

  std::vector<int> block_dims;
  std::vector<cmat> objective;  // one Hermitian matrix per block
  std::vector<Row> rows;

  int add_block(int dim);
  int add_scalar();  // convenience: dim-1 block
  void set_objective(int block, const cmat& c);
  void set_objective_scalar(int block, double c);
  int add_row(double rhs);
  void add_term(int row, int block, const cmat& coeff);
  void add_scalar_term(int row, int block, double coeff);
};

enum class SdpStatus { Optimal, Infeasible, MaxIter };

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // |primal - dual|
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  std::vector<cmat> x;  // primal blocks
  rvec y;               // dual multipliers, one per row
  std::vector<cmat> s;  // dual slack blocks
  int iterations = 0;
  bool primal_infeasible = false;  // valid when status == Infeasible
  bool dual_infeasible = false;
  double certificate = 0.0;  // rhs'y of the improving ray, or <C,X> if dual side

  bool ok() const { return status == SdpStatus::Optimal; }
};

struct SdpOpts {
  int max_iters = 200;
  double tol_feas = 1e-10;
  double tol_gap = 1e-11;      // relative duality gap target
  double accept_feas = 1e-7;   // graded acceptance at iteration cap
  double accept_gap = 1e-7;    // matches tol::solver_gap; the attainable gap
                               // floor on degenerate faces sits near 1e-8
};

SdpSolution solve_sdp(const SdpProblem& p, const SdpOpts& opts = {});

std::string dump_sdp_json(const SdpProblem& p);

// ---- Prebuilt templates ----

// Completely bounded trace norm of the difference N - M of CP maps with equal
// output marginals (CPTP pairs in particular):
//   2 min ||Tr_B w||_inf  s.t.  w >= J(N) - J(M), w >= 0.
double diamond_norm(const ChoiChannel& n, const ChoiChannel& m);
double diamond_norm_delta(const cmat& j_delta, int dim_in, int dim_out);

// min over CPTP E of log2 min{t : t J(E) >= J(N) - J(M)}, the log distance
// from the difference to the CPTP cone. Returns -infinity for the zero map.
double lr_to_cptp(const ChoiChannel& n, const ChoiChannel& m);
double lr_to_cptp_delta(const cmat& j_delta, int dim_in, int dim_out);

struct LinearOptResult {
  double value = 0.0;
  cmat argopt;
  SdpStatus status = SdpStatus::Optimal;
};

// Optimize Tr[C X] over the PSD points of an affine slice. Throws
// SolverFailure unless the solve certifies optimality.
LinearOptResult linear_opt_over_set(const cmat& c, const ConstraintSystem& set,
                                    bool maximize, const SdpOpts& opts = {});

}  // namespace qrtkit

#endif  // QRTKIT_SDP_HPP
