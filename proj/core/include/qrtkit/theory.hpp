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

#ifndef QRTKIT_THEORY_HPP
#define QRTKIT_THEORY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrtkit/channel.hpp"
#include "qrtkit/constraint.hpp"
#include "qrtkit/random.hpp"
#include "qrtkit/types.hpp"

namespace qrtkit {

enum class TheoryKind { Coherence, Athermality, Trivial, ReplacementOnly };

// A resource theory presented as affine slices of the PSD cone: one slice of
// states per dimension and one slice of Choi matrices per (in, out) pair.
//
// Dimensions are tensor powers of the base system. free_states(d^k) is the
// set on k base factors; for athermality that is the singleton {gamma^(x)k}.
// free_channels(din, dout) is oriented input-side -> output-side: athermality
// constrains N(gamma_in^(x)j) = gamma_out^(x)k. Mixed-orientation sets (a
// spectator factor that keeps its input-side Gibbs state on the output) are
// built with free_channels_gibbs.
struct ResourceTheory {
  TheoryKind kind = TheoryKind::Trivial;
  std::string name;

  bool convex = true;
  bool extreme_points_pure = false;
  bool has_full_rank_free_state = true;
  // The free-state set is one point (athermality).
  bool singleton_free_states = false;
  // Free channels all share one output on each free input (athermality).
  bool singleton_free_output = false;
  // False for theories that intentionally violate the completeness axioms
  // (replacement-only lacks the identity); they are oracle helpers, not
  // subjects of validate_axioms.
  bool axiom_complete = true;

  // Base Gibbs states; set for athermality only.
  cmat gibbs_in, gibbs_out;

  ConstraintSystem free_states(int dim) const;
  ConstraintSystem free_channels(int dim_in, int dim_out) const;
  // Explicit Gibbs pair; for theories without Gibbs data only the dimensions
  // of the arguments matter.
  ConstraintSystem free_channels_gibbs(const cmat& gin, const cmat& gout) const;

  // Strictly feasible points of the two slices.
  cmat interior_free_state(int dim) const;
  ChoiChannel interior_free_channel(int dim_in, int dim_out) const;

  // Tensor power of the base input Gibbs state, the canonical free input on
  // k base factors. Athermality only; other theories have no distinguished
  // base system and throw InvalidArgument.
  cmat free_input_power(int copies) const;
};

ResourceTheory coherence_theory();
// Throws NotFullRank when either Gibbs state is singular.
ResourceTheory athermality_theory(const cmat& gamma_in, const cmat& gamma_out);
ResourceTheory trivial_theory();
// Free channels replace the input with a diagonal free state; deliberately
// not axiom-complete (no identity channel). Oracle helper.
ResourceTheory replacement_only_theory();

// Random feasible point: optimizes `mixture` random linear costs over the
// slice and averages the optimizers. mixture = 1 gives an extreme-ish point,
// larger values give interior points.
cmat free_sample(const ConstraintSystem& set, Rng rng, int mixture = 1);

struct AxiomCheck {
  std::string name;
  double violation = 0.0;  // worst over samples: max(|equality|, -min_eig)
  bool passed = false;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  double max_violation = 0.0;
  bool all_passed = false;
  int samples = 0;
};

// Samples free channels and validates the closure axioms by membership:
// composition, id (x) M, M1 (x) M2, permutation sandwiches, replacement to a
// free state, plus identity and trace membership. tol is the violation
// budget per check.
AxiomReport validate_axioms(const ResourceTheory& t, int dim, int samples, uint64_t seed,
                            double axiom_tol = tol::membership);

// Generic variant for hand-built channel sets, sharing the check engine of
// validate_axioms. Sets are keyed by dimensions only, so every system is
// treated as a tensor power of the base system. Demonstrations of validator
// failures use this entry point with sets that are intentionally not closed.
struct ChannelSetHooks {
  std::function<ConstraintSystem(int dim_in, int dim_out)> free_channels;
  std::function<ConstraintSystem(int dim)> free_states;
  std::function<ChoiChannel(int dim_in, int dim_out)> interior_channel;
};

AxiomReport validate_axiom_hooks(const ChannelSetHooks& hooks, int dim, int samples,
                                 uint64_t seed, double axiom_tol = tol::membership);

// Output sets of free channels at a fixed free input: the states
// (id_R^n (x) M)(Phi_n) on R^n B^n, with Phi_n the n-copy free input
// rearranged copy-major and M ranging over free_channels(A^n -> B^n).
// `target` membership is decided by a feasibility solve over the Choi slice;
// for theories with structure (diagonal free inputs under incoherent
// channels, singleton outputs) an equivalent reduced program is used.
struct SteinSetReport {
  bool member = false;
  double violation = 0.0;  // distance-like residual; ~0 for members
};

// Auto picks the reduced program when the theory has one and the generic
// Choi-slice solve otherwise; the explicit routes exist so the two can be
// cross-checked against each other.
enum class SteinRoute { Auto, Reduced, Generic };

SteinSetReport stein_set_membership(const ResourceTheory& t, int copies, const cmat& phi_ra,
                                    const cmat& target, SteinRoute route = SteinRoute::Auto);

struct SteinClosureReport {
  double full_rank_min_eig = 0.0;  // property 2 witness
  double trace_violation = 0.0;    // property 3
  double tensor_violation = 0.0;   // property 4
  double permutation_violation = 0.0;  // property 5
  double max_violation = 0.0;
  bool all_passed = false;
  int samples = 0;
};

// Verifies closure of the output sets at the free input phi_ra: a full-rank
// member exists, tracing a copy of an M_n element lands in M_{n-1}, tensors
// of M_1 elements land in M_n, and copy permutations preserve membership.
// Sampled `samples` times; copies is 2 or 3, and 3 requires a theory with a
// reduced membership program (the generic solve does not scale past 2).
SteinClosureReport stein_closure_check(const ResourceTheory& t, const cmat& phi_ra, int copies,
                                       int samples, uint64_t seed);

}  // namespace qrtkit

#endif  // QRTKIT_THEORY_HPP
