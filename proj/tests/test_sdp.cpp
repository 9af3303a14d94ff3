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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qrtkit/channel.hpp"
#include "qrtkit/divergence.hpp"
#include "qrtkit/linalg.hpp"
#include "qrtkit/random.hpp"
#include "qrtkit/sdp.hpp"

using namespace qrtkit;

namespace {

void check_weak_duality(const SdpSolution& s) {
  REQUIRE(s.ok());
  CHECK(s.dual_value <= s.primal_value + 1e-9);
}

cmat hadamard() {
  cmat h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

}  // namespace

TEST_CASE("scalar lower bound: min x subject to x >= 1") {
  SdpProblem p;
  const int bx = p.add_scalar();
  const int bs = p.add_scalar();
  p.set_objective_scalar(bx, 1.0);
  const int r = p.add_row(1.0);
  p.add_scalar_term(r, bx, 1.0);
  p.add_scalar_term(r, bs, -1.0);
  SdpSolution s = solve_sdp(p);
  check_weak_duality(s);
  CHECK(s.primal_value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(s.gap <= 1e-7 * (1.0 + std::abs(s.primal_value)));
  CHECK(s.primal_residual <= 1e-7);
}

TEST_CASE("max overlap with a state over effects caps at one") {
  Rng rng = seeded(7, 0);
  const cmat rho = random_density(3, rng);
  SdpProblem p;
  const int bp = p.add_block(3);
  const int bq = p.add_block(3);
  p.set_objective(bp, -rho);
  for (const auto& h : hermitian_basis(3)) {
    const int r = p.add_row(h.trace().real());
    p.add_term(r, bp, h);
    p.add_term(r, bq, h);
  }
  SdpSolution s = solve_sdp(p);
  check_weak_duality(s);
  CHECK(-s.primal_value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((s.x[0] - cmat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("min energy over states recovers the smallest eigenvalue") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    for (int d : {2, 3, 5}) {
      Rng rng = seeded(seed, d);
      cmat g = ginibre(d, d, rng);
      cmat sigma = hermitize(g + g.adjoint());
      SdpProblem p;
      const int bx = p.add_block(d);
      p.set_objective(bx, sigma);
      const int r = p.add_row(1.0);
      p.add_term(r, bx, cmat::Identity(d, d));
      SdpSolution s = solve_sdp(p);
      check_weak_duality(s);
      CHECK(s.primal_value == doctest::Approx(min_eig(sigma)).epsilon(1e-7));
    }
  }
}

TEST_CASE("solver is deterministic") {
  Rng rng = seeded(11, 0);
  const cmat rho = random_density(4, rng);
  auto build = [&]() {
    SdpProblem p;
    const int bx = p.add_block(4);
    p.set_objective(bx, rho);
    const int r = p.add_row(1.0);
    p.add_term(r, bx, cmat::Identity(4, 4));
    return p;
  };
  SdpSolution a = solve_sdp(build());
  SdpSolution b = solve_sdp(build());
  CHECK(a.primal_value == b.primal_value);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("conflicting scalar bounds are declared infeasible") {
  SdpProblem p;
  const int bx = p.add_scalar();
  const int b1 = p.add_scalar();
  const int b2 = p.add_scalar();
  p.set_objective_scalar(bx, 1.0);
  int r = p.add_row(1.0);  // x - s1 = 1  =>  x >= 1
  p.add_scalar_term(r, bx, 1.0);
  p.add_scalar_term(r, b1, -1.0);
  r = p.add_row(0.0);  // x + s2 = 0  =>  x <= 0
  p.add_scalar_term(r, bx, 1.0);
  p.add_scalar_term(r, b2, 1.0);
  SdpSolution s = solve_sdp(p);
  CHECK(s.status == SdpStatus::Infeasible);
  CHECK(s.primal_infeasible);
}

TEST_CASE("diamond norm of the zero difference vanishes") {
  ChoiChannel id2 = identity_channel(2);
  CHECK(diamond_norm(id2, id2) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("diamond norm separates identity from Hadamard maximally") {
  ChoiChannel id2 = identity_channel(2);
  ChoiChannel had = unitary_channel(hadamard());
  CHECK(std::abs(diamond_norm(id2, had) - 2.0) <= 1e-6);
}

TEST_CASE("diamond norm of a phase-rotation pair has a closed form") {
  // For unitaries with relative phases e^{+-i theta/2}, the completely
  // bounded distance is 2 sin(theta/2) once the hull misses the origin.
  const double theta = M_PI / 2.0;
  cmat rz = cmat::Zero(2, 2);
  rz(0, 0) = std::polar(1.0, -theta / 2);
  rz(1, 1) = std::polar(1.0, theta / 2);
  ChoiChannel id2 = identity_channel(2);
  ChoiChannel rot = unitary_channel(rz);
  CHECK(diamond_norm(id2, rot) == doctest::Approx(2.0 * std::sin(theta / 2)).epsilon(1e-7));
}

TEST_CASE("diamond norm dominates twice the best sampled output distance") {
  for (uint64_t seed : {21u, 22u, 23u, 24u}) {
    ChoiChannel n = random_channel(2, 2, 2, seeded(seed, 0));
    ChoiChannel m = random_channel(2, 2, 2, seeded(seed, 1));
    const double dn = diamond_norm(n, m);
    AscentOpts opts;
    opts.restarts = 64;
    opts.seed = seed;
    ChannelDivergenceResult lower = channel_divergence(n, m, DivKind::TraceDistance, opts);
    CHECK(2.0 * lower.value <= dn + 1e-6);
    CHECK(dn - 2.0 * lower.value <= 1e-4);
  }
}

TEST_CASE("log distance to the channel cone matches the diamond norm identity") {
  ChoiChannel id2 = identity_channel(2);
  ChoiChannel had = unitary_channel(hadamard());
  CHECK(lr_to_cptp(id2, had) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(lr_to_cptp(id2, id2) == -std::numeric_limits<double>::infinity());

  for (uint64_t seed : {31u, 32u, 33u, 34u, 35u}) {
    ChoiChannel n = random_channel(2, 2, 2, seeded(seed, 2));
    ChoiChannel m = random_channel(2, 2, 2, seeded(seed, 3));
    const double dn = diamond_norm(n, m);
    const double lr = lr_to_cptp(n, m);
    CHECK(std::exp2(lr) == doctest::Approx(0.5 * dn).epsilon(1e-6));
  }
}

TEST_CASE("diamond norm is multiplicative under tensoring") {
  ChoiChannel n1 = random_channel(2, 2, 2, seeded(41, 0));
  ChoiChannel m1 = random_channel(2, 2, 2, seeded(41, 1));
  ChoiChannel n2 = random_channel(2, 2, 2, seeded(41, 2));
  ChoiChannel m2 = random_channel(2, 2, 2, seeded(41, 3));
  const double d1 = diamond_norm_delta(n1.choi - m1.choi, 2, 2);
  const double d2 = diamond_norm_delta(n2.choi - m2.choi, 2, 2);
  // (N1-M1) (x) (N2-M2) expanded by linearity of the Choi map.
  ChoiChannel a = tensor_channels(n1, n2);
  ChoiChannel b = tensor_channels(n1, m2);
  ChoiChannel c = tensor_channels(m1, n2);
  ChoiChannel d = tensor_channels(m1, m2);
  const cmat j_prod = a.choi - b.choi - c.choi + d.choi;
  const double dp = diamond_norm_delta(j_prod, 4, 4);
  CHECK(dp == doctest::Approx(d1 * d2).epsilon(1e-5));
}

TEST_CASE("linear optimization over density matrices") {
  ConstraintSystem set;
  set.dim = 2;
  set.add(cmat::Identity(2, 2), 1.0);
  LinearOptResult r = linear_opt_over_set(cmat::Identity(2, 2), set, true);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("linear optimization over diagonal qubit states") {
  ConstraintSystem set;
  set.dim = 2;
  set.add(cmat::Identity(2, 2), 1.0);
  cmat re01 = cmat::Zero(2, 2);
  re01(0, 1) = re01(1, 0) = 1.0;
  set.add(re01, 0.0);
  cmat im01 = cmat::Zero(2, 2);
  im01(0, 1) = cplx(0, 1);
  im01(1, 0) = cplx(0, -1);
  set.add(im01, 0.0);

  cmat mz = cmat::Zero(2, 2);
  mz(0, 0) = -1.0;
  mz(1, 1) = 1.0;
  LinearOptResult r = linear_opt_over_set(mz, set, true);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(r.argopt(1, 1).real() - 1.0) < 1e-6);
  CHECK(std::abs(r.argopt(0, 0).real()) < 1e-6);
}

TEST_CASE("linear optimization over Gibbs-preserving qubit channels") {
  // Choi set: CP, TP, and fixed Gibbs output on the Gibbs input.
  const double pg = 0.73;
  cmat gamma = cmat::Zero(2, 2);
  gamma(0, 0) = pg;
  gamma(1, 1) = 1.0 - pg;

  ConstraintSystem set;
  set.dim = 4;
  const cmat id2 = cmat::Identity(2, 2);
  for (const auto& e : hermitian_basis(2)) set.add(tensor(e, id2), e.trace().real());
  for (const auto& h : hermitian_basis(2))
    set.add(tensor(gamma.transpose(), h), hs_inner(h, gamma));

  Rng rng = seeded(51, 0);
  cmat g = ginibre(4, 4, rng);
  cmat c = hermitize(g + g.adjoint());
  LinearOptResult r = linear_opt_over_set(c, set, true);

  const cmat interior = tensor(id2, gamma);  // replace-with-Gibbs channel
  MembershipReport rep = membership(set, r.argopt);
  CHECK(rep.inside);
  double best = -1e300;
  Rng rng2 = seeded(52, 0);
  for (int k = 0; k < 2000; ++k) {
    best = std::max(best, hs_inner(c, oracles::sample_feasible(set, interior, rng2)));
  }
  CHECK(best <= r.value + 1e-9);
  CHECK(std::abs(hs_inner(c, r.argopt) - r.value) <= 1e-6);
}
