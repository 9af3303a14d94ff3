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

#include "qrtkit/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qrtkit/linalg.hpp"
#include "qrtkit/sdp.hpp"

namespace qrtkit {

namespace {

int ipow(int base, int exp) {
  long long v = 1;
  for (int i = 0; i < exp; ++i) {
    v *= base;
    if (v > (1 << 30)) throw InvalidArgument("ipow: dimension overflow");
  }
  return static_cast<int>(v);
}

// k with base^k == dim; dim == 1 gives k = 0.
int power_exponent(int dim, int base, const char* where) {
  if (dim < 1 || base < 2) throw InvalidArgument(std::string(where) + ": bad dimension");
  int k = 0;
  long long cur = 1;
  while (cur < dim) {
    cur *= base;
    ++k;
  }
  if (cur != dim) throw InvalidArgument(std::string(where) + ": dimension is not a base power");
  return k;
}

cmat tensor_power_of(const cmat& g, int k) {
  cmat out = cmat::Identity(1, 1);
  for (int i = 0; i < k; ++i) out = tensor(out, g);
  return out;
}

// Scaled so that Tr[X_ij rho] = Re rho_ij and Tr[Y_ij rho] = Im rho_ij:
// membership violations read as off-diagonal components.
std::vector<cmat> offdiag_hermitian_basis(int d) {
  std::vector<cmat> out;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      cmat x = cmat::Zero(d, d);
      x(i, j) = 0.5;
      x(j, i) = 0.5;
      out.push_back(x);
      cmat y = cmat::Zero(d, d);
      y(i, j) = cplx(0.0, -0.5);
      y(j, i) = cplx(0.0, 0.5);
      out.push_back(y);
    }
  }
  return out;
}

// Basis of the traceless Hermitian matrices: diagonal differences plus the
// off-diagonal pair elements. Rank d^2 - 1, no redundancy against TP rows.
std::vector<cmat> traceless_hermitian_basis(int d) {
  std::vector<cmat> out;
  for (int i = 1; i < d; ++i) out.push_back(basis_proj(d, i) - basis_proj(d, 0));
  for (const cmat& h : offdiag_hermitian_basis(d)) out.push_back(h);
  return out;
}

void add_tp_rows(ConstraintSystem& set, int din, int dout) {
  const cmat idb = cmat::Identity(dout, dout);
  for (const cmat& h : hermitian_basis(din)) set.add(tensor(h, idb), h.trace().real());
}

// Tr[(g^T tensor H) J] = <H, N(g)>. The trace direction of H is implied by
// TP, so only traceless H keep the rows independent.
void add_gibbs_rows(ConstraintSystem& set, const cmat& gin, const cmat& gout) {
  const cmat gt = gin.transpose();
  for (const cmat& h : traceless_hermitian_basis(static_cast<int>(gout.rows())))
    set.add(tensor(gt, h), hs_inner(h, gout));
}

// Diagonal inputs map to diagonal outputs: every basis-state output block has
// vanishing off-diagonal part.
void add_incoherent_rows(ConstraintSystem& set, int din, int dout) {
  const auto off = offdiag_hermitian_basis(dout);
  for (int i = 0; i < din; ++i) {
    const cmat pa = basis_proj(din, i);
    for (const cmat& h : off) set.add(tensor(pa, h), 0.0);
  }
}

// J = I_A tensor sigma with sigma diagonal. Off-diagonal-in-A structure is
// already pinned by TP on the I_B component, so only traceless B directions
// are added there.
void add_replacement_rows(ConstraintSystem& set, int din, int dout) {
  const auto ta = traceless_hermitian_basis(din);
  const auto tb = traceless_hermitian_basis(dout);
  for (const cmat& ea : ta)
    for (const cmat& hb : tb) set.add(tensor(ea, hb), 0.0);
  const cmat ia = cmat::Identity(din, din);
  for (const cmat& h : offdiag_hermitian_basis(dout)) set.add(tensor(ia, h), 0.0);
}

void validate_density(const cmat& g, const char* where) {
  if (g.rows() != g.cols() || g.rows() < 1) throw InvalidArgument(std::string(where) + ": not square");
  if (!is_hermitian(g)) throw InvalidArgument(std::string(where) + ": not Hermitian");
  if (std::abs(g.trace().real() - 1.0) > tol::tp) throw InvalidArgument(std::string(where) + ": trace != 1");
}

ConstraintSystem pinned_state_set(const cmat& target) {
  ConstraintSystem s;
  s.dim = static_cast<int>(target.rows());
  for (const cmat& h : hermitian_basis(s.dim)) s.add(h, hs_inner(h, target));
  return s;
}

double membership_violation(const MembershipReport& r) {
  return std::max(r.worst_equality, std::max(0.0, -r.min_eigenvalue));
}

}  // namespace

ConstraintSystem ResourceTheory::free_states(int dim) const {
  if (dim < 1) throw InvalidArgument("free_states: dim");
  ConstraintSystem s;
  s.dim = dim;
  switch (kind) {
    case TheoryKind::Trivial:
      s.add(cmat::Identity(dim, dim), 1.0);
      break;
    case TheoryKind::Coherence:
    case TheoryKind::ReplacementOnly:
      s.add(cmat::Identity(dim, dim), 1.0);
      for (const cmat& h : offdiag_hermitian_basis(dim)) s.add(h, 0.0);
      break;
    case TheoryKind::Athermality: {
      const int k = power_exponent(dim, static_cast<int>(gibbs_in.rows()), "free_states");
      return pinned_state_set(tensor_power_of(gibbs_in, k));
    }
  }
  return s;
}

ConstraintSystem ResourceTheory::free_channels(int dim_in, int dim_out) const {
  if (kind == TheoryKind::Athermality) {
    const int j = power_exponent(dim_in, static_cast<int>(gibbs_in.rows()), "free_channels");
    const int k = power_exponent(dim_out, static_cast<int>(gibbs_out.rows()), "free_channels");
    return free_channels_gibbs(tensor_power_of(gibbs_in, j), tensor_power_of(gibbs_out, k));
  }
  ConstraintSystem s;
  s.dim = dim_in * dim_out;
  add_tp_rows(s, dim_in, dim_out);
  if (kind == TheoryKind::Coherence) add_incoherent_rows(s, dim_in, dim_out);
  if (kind == TheoryKind::ReplacementOnly) add_replacement_rows(s, dim_in, dim_out);
  return s;
}

ConstraintSystem ResourceTheory::free_channels_gibbs(const cmat& gin, const cmat& gout) const {
  validate_density(gin, "free_channels_gibbs");
  validate_density(gout, "free_channels_gibbs");
  const int din = static_cast<int>(gin.rows());
  const int dout = static_cast<int>(gout.rows());
  if (kind != TheoryKind::Athermality) return free_channels(din, dout);
  ConstraintSystem s;
  s.dim = din * dout;
  add_tp_rows(s, din, dout);
  add_gibbs_rows(s, gin, gout);
  return s;
}

cmat ResourceTheory::interior_free_state(int dim) const {
  if (dim < 1) throw InvalidArgument("interior_free_state: dim");
  if (kind == TheoryKind::Athermality) {
    const int k = power_exponent(dim, static_cast<int>(gibbs_in.rows()), "interior_free_state");
    return tensor_power_of(gibbs_in, k);
  }
  return cmat::Identity(dim, dim) / dim;
}

ChoiChannel ResourceTheory::interior_free_channel(int dim_in, int dim_out) const {
  if (dim_in < 1 || dim_out < 1) throw InvalidArgument("interior_free_channel: dims");
  cmat sigma;
  if (kind == TheoryKind::Athermality) {
    power_exponent(dim_in, static_cast<int>(gibbs_in.rows()), "interior_free_channel");
    const int k = power_exponent(dim_out, static_cast<int>(gibbs_out.rows()), "interior_free_channel");
    sigma = tensor_power_of(gibbs_out, k);
  } else {
    sigma = cmat::Identity(dim_out, dim_out) / dim_out;
  }
  return replacement_channel(dim_in, sigma);
}

cmat ResourceTheory::free_input_power(int copies) const {
  if (copies < 1) throw InvalidArgument("free_input_power: copies");
  if (kind != TheoryKind::Athermality)
    throw InvalidArgument("free_input_power: theory has no distinguished base system");
  return tensor_power_of(gibbs_in, copies);
}

ResourceTheory coherence_theory() {
  ResourceTheory t;
  t.kind = TheoryKind::Coherence;
  t.name = "coherence";
  t.extreme_points_pure = true;
  return t;
}

ResourceTheory athermality_theory(const cmat& gamma_in, const cmat& gamma_out) {
  validate_density(gamma_in, "athermality_theory");
  validate_density(gamma_out, "athermality_theory");
  if (eigh(gamma_in).eigenvalues.minCoeff() <= tol::support)
    throw NotFullRank("athermality_theory: gamma_in");
  if (eigh(gamma_out).eigenvalues.minCoeff() <= tol::support)
    throw NotFullRank("athermality_theory: gamma_out");
  ResourceTheory t;
  t.kind = TheoryKind::Athermality;
  t.name = "athermality";
  t.singleton_free_states = true;
  t.singleton_free_output = true;
  t.gibbs_in = hermitize(gamma_in);
  t.gibbs_out = hermitize(gamma_out);
  return t;
}

ResourceTheory trivial_theory() {
  ResourceTheory t;
  t.kind = TheoryKind::Trivial;
  t.name = "trivial";
  t.extreme_points_pure = true;
  return t;
}

ResourceTheory replacement_only_theory() {
  ResourceTheory t;
  t.kind = TheoryKind::ReplacementOnly;
  t.name = "replacement-only";
  t.extreme_points_pure = true;
  t.axiom_complete = false;
  return t;
}

cmat free_sample(const ConstraintSystem& set, Rng rng, int mixture) {
  if (mixture < 1) throw InvalidArgument("free_sample: mixture");
  std::uniform_real_distribution<double> wdist(0.5, 1.5);
  cmat acc = cmat::Zero(set.dim, set.dim);
  double wsum = 0.0;
  for (int i = 0; i < mixture; ++i) {
    const cmat cost = hermitize(ginibre(set.dim, set.dim, seeded(rng(), 11)));
    const double w = mixture == 1 ? 1.0 : wdist(rng);
    acc += w * linear_opt_over_set(cost, set, false).argopt;
    wsum += w;
  }
  return hermitize(acc / wsum);
}

namespace {

// Gibbs-keyed presentation shared by the theory validator and the hook
// validator. Sets without Gibbs data read only dimensions of the markers.
struct SetFamily {
  std::function<ConstraintSystem(const cmat& gin, const cmat& gout)> channels;
  std::function<ConstraintSystem(const cmat& marker)> states;
  std::function<ChoiChannel(const cmat& gin, const cmat& gout)> interior;
};

AxiomReport run_axiom_checks(const SetFamily& f, const cmat& base_in, const cmat& base_out,
                             int samples, uint64_t seed, double axiom_tol) {
  if (samples < 1) throw InvalidArgument("validate_axioms: samples");
  const int da = static_cast<int>(base_in.rows());
  const int db = static_cast<int>(base_out.rows());
  const cmat unit = cmat::Identity(1, 1);

  const ConstraintSystem f_ab = f.channels(base_in, base_out);
  const ConstraintSystem f_aa = f.channels(base_in, base_in);
  const ConstraintSystem f_bb = f.channels(base_out, base_out);
  const ConstraintSystem f_trace = f.channels(base_in, unit);
  const ConstraintSystem f_a2b2 = f.channels(tensor(base_in, base_in), tensor(base_out, base_out));
  const ConstraintSystem f_spec = f.channels(tensor(base_in, base_in), tensor(base_in, base_out));
  const ConstraintSystem s_b = f.states(base_out);

  AxiomReport rep;
  rep.samples = samples;
  auto check_at = [&rep](const std::string& name) -> AxiomCheck& {
    for (auto& c : rep.checks)
      if (c.name == name) return c;
    rep.checks.push_back(AxiomCheck{name, 0.0, false});
    return rep.checks.back();
  };
  auto record = [&](const std::string& name, const ConstraintSystem& set, const cmat& x) {
    AxiomCheck& c = check_at(name);
    c.violation = std::max(c.violation, membership_violation(membership(set, x)));
  };

  record("identity", f_aa, identity_channel(da).choi);
  // The trace map to a one-dimensional output has Choi I_A.
  record("trace", f_trace, cmat::Identity(da, da));
  record("interior", f_ab, f.interior(base_in, base_out).choi);

  Rng rng = seeded(seed, 0);
  std::uniform_real_distribution<double> wdist(0.3, 0.7);
  const ChoiChannel swap_a = permutation_channel(da, {1, 0});
  const ChoiChannel swap_b = permutation_channel(db, {1, 0});
  for (int s = 0; s < samples; ++s) {
    const ChoiChannel m1 = make_channel(da, db, free_sample(f_ab, seeded(rng(), 1), 1), false);
    const ChoiChannel m2 = make_channel(da, db, free_sample(f_ab, seeded(rng(), 2), 1), false);
    const ChoiChannel m3 = make_channel(db, db, free_sample(f_bb, seeded(rng(), 3), 1), false);
    const cmat sigma = free_sample(s_b, seeded(rng(), 4), 2);
    const double w = wdist(rng);

    record("mixture", f_ab, w * m1.choi + (1.0 - w) * m2.choi);
    record("composition", f_ab, compose(m3, m1).choi);
    record("replacement", f_ab, replacement_channel(da, sigma).choi);
    record("spectator", f_spec, tensor_channels(identity_channel(da), m1).choi);
    record("tensor", f_a2b2, tensor_channels(m1, m2).choi);

    const ChoiChannel prod12 = tensor_channels(m1, m2);
    const ChoiChannel prod21 = tensor_channels(m2, m1);
    ChoiChannel mixed = prod12;
    mixed.choi = w * prod12.choi + (1.0 - w) * prod21.choi;
    record("permutation", f_a2b2, compose(swap_b, compose(mixed, swap_a)).choi);
  }

  rep.max_violation = 0.0;
  rep.all_passed = true;
  for (auto& c : rep.checks) {
    c.passed = c.violation <= axiom_tol;
    rep.max_violation = std::max(rep.max_violation, c.violation);
    rep.all_passed = rep.all_passed && c.passed;
  }
  return rep;
}

}  // namespace

AxiomReport validate_axioms(const ResourceTheory& t, int dim, int samples, uint64_t seed,
                            double axiom_tol) {
  cmat base_in, base_out;
  if (t.kind == TheoryKind::Athermality) {
    if (dim != t.gibbs_in.rows())
      throw InvalidArgument("validate_axioms: dim must match the base Gibbs system");
    base_in = t.gibbs_in;
    base_out = t.gibbs_out;
  } else {
    base_in = cmat::Identity(dim, dim) / dim;
    base_out = base_in;
  }
  SetFamily f;
  f.channels = [&t](const cmat& gin, const cmat& gout) { return t.free_channels_gibbs(gin, gout); };
  f.states = [&t](const cmat& marker) {
    if (t.singleton_free_states) return pinned_state_set(marker);
    return t.free_states(static_cast<int>(marker.rows()));
  };
  f.interior = [&t](const cmat& gin, const cmat& gout) {
    const cmat sigma = t.singleton_free_output
                           ? gout
                           : cmat(cmat::Identity(gout.rows(), gout.cols()) / gout.rows());
    return replacement_channel(static_cast<int>(gin.rows()), sigma);
  };
  return run_axiom_checks(f, base_in, base_out, samples, seed, axiom_tol);
}

AxiomReport validate_axiom_hooks(const ChannelSetHooks& hooks, int dim, int samples,
                                 uint64_t seed, double axiom_tol) {
  if (!hooks.free_channels || !hooks.free_states || !hooks.interior_channel)
    throw InvalidArgument("validate_axiom_hooks: all hooks must be set");
  const cmat base = cmat::Identity(dim, dim) / dim;
  SetFamily f;
  f.channels = [&hooks](const cmat& gin, const cmat& gout) {
    return hooks.free_channels(static_cast<int>(gin.rows()), static_cast<int>(gout.rows()));
  };
  f.states = [&hooks](const cmat& marker) {
    return hooks.free_states(static_cast<int>(marker.rows()));
  };
  f.interior = [&hooks](const cmat& gin, const cmat& gout) {
    return hooks.interior_channel(static_cast<int>(gin.rows()), static_cast<int>(gout.rows()));
  };
  return run_axiom_checks(f, base, base, samples, seed, axiom_tol);
}

namespace {

// phi^(x)n on (R A)^n rearranged copy-major to R^n A^n.
cmat copy_major_input(const cmat& phi, int dr, int da, int n) {
  if (n == 1) return phi;
  cmat p = phi;
  for (int i = 1; i < n; ++i) p = tensor(p, phi);
  std::vector<int> dims(2 * n), perm(2 * n);
  for (int c = 0; c < n; ++c) {
    dims[2 * c] = dr;
    dims[2 * c + 1] = da;
  }
  for (int c = 0; c < n; ++c) {
    perm[c] = 2 * c;
    perm[n + c] = 2 * c + 1;
  }
  return permute_factors(p, dims, perm);
}

// Adjoint of M -> <H, (id_R tensor M)(Phi)> as a functional of the Choi
// matrix: K[(x b),(y b')] = sum_{r r'} conj(Phi[(r x),(r' y)]) H[(r b),(r' b')].
cmat output_row_op(const cmat& phi_n, const cmat& h, int drn, int dan, int dbn) {
  cmat k = cmat::Zero(dan * dbn, dan * dbn);
  for (int x = 0; x < dan; ++x)
    for (int y = 0; y < dan; ++y)
      for (int b = 0; b < dbn; ++b)
        for (int bp = 0; bp < dbn; ++bp) {
          cplx v = 0.0;
          for (int r = 0; r < drn; ++r)
            for (int rp = 0; rp < drn; ++rp)
              v += std::conj(phi_n(r * dan + x, rp * dan + y)) * h(r * dbn + b, rp * dbn + bp);
          k(x * dbn + b, y * dbn + bp) = v;
        }
  return hermitize(k);
}

// Dense two-phase primal simplex.  The reduced membership program is a small
// classical LP whose L1 optimum sits on a degenerate face; a barrier method
// loses the endgame there, while a pivoting method terminates on it exactly.
// The lexicographic ratio test breaks degenerate ties decisively, where a
// scalar tie window either merges distinct ratios or lets cycling through.
struct SimplexResult {
  Eigen::VectorXd x;
  double objective = 0.0;
};

SimplexResult simplex_min(Eigen::MatrixXd a, Eigen::VectorXd b, const Eigen::VectorXd& cost) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  for (int i = 0; i < m; ++i)
    if (b(i) < 0.0) {
      a.row(i) = -a.row(i);
      b(i) = -b(i);
    }

  // Columns n..n+m-1 are phase-1 artificials.
  Eigen::MatrixXd ext(m, n + m);
  ext << a, Eigen::MatrixXd::Identity(m, m);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  Eigen::VectorXd xb = b;
  Eigen::MatrixXd bm = Eigen::MatrixXd::Identity(m, m);
  Eigen::PartialPivLU<Eigen::MatrixXd> blu(bm);
  Eigen::MatrixXd binv = Eigen::MatrixXd::Identity(m, m);
  // One refinement step keeps solves usable when a degenerate pivot leaves the
  // basis poorly conditioned.
  auto fsolve = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd v = blu.solve(rhs);
    v += blu.solve(rhs - bm * v);
    return v;
  };
  auto tsolve = [&](const Eigen::VectorXd& rhs) {
    Eigen::VectorXd v = binv.transpose() * rhs;
    v += binv.transpose() * (rhs - bm.transpose() * v);
    return v;
  };
  auto refresh = [&]() {
    for (int i = 0; i < m; ++i) bm.col(i) = ext.col(basis[i]);
    blu.compute(bm);
    binv = blu.inverse();
    xb = fsolve(b);
  };

  auto run = [&](const Eigen::VectorXd& cc) {
    for (int iter = 0; iter < 20000; ++iter) {
      refresh();
      Eigen::VectorXd cb(m);
      for (int i = 0; i < m; ++i) cb(i) = cc(basis[i]);
      const Eigen::VectorXd y = tsolve(cb);

      std::vector<char> in_basis(n + m, 0);
      for (int i = 0; i < m; ++i) in_basis[basis[i]] = 1;
      int enter = -1;
      double most = -1e-9;
      for (int j = 0; j < n; ++j) {
        if (in_basis[j]) continue;
        const double rc = cc(j) - y.dot(ext.col(j));
        if (rc < most) {
          most = rc;
          enter = j;
        }
      }
      if (enter < 0) return;
      if (std::getenv("QRTKIT_SIMPLEX_TRACE") != nullptr && iter % 500 == 0) {
        double obj = 0.0;
        for (int i = 0; i < m; ++i) obj += cc(basis[i]) * xb(i);
        std::fprintf(stderr, "splx m=%d n=%d iter=%d obj=%.6e most=%.3e enter=%d\n", m, n, iter,
                     obj, most, enter);
      }

      const Eigen::VectorXd d = fsolve(ext.col(enter));
      // Relaxed ratio bound, then a pivot from within it: rows inside the
      // bound keep infeasibility at tolerance level, and preferring a healthy
      // pivot element keeps the basis condition number in range.
      double bound = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (d(i) <= 1e-11) continue;
        const double r = (std::max(xb(i), 0.0) + 1e-11 * (1.0 + std::abs(xb(i)))) / d(i);
        bound = std::min(bound, r);
      }
      if (!std::isfinite(bound)) throw SolverFailure("simplex: unbounded");
      int leave = -1;
      for (double dmin : {1e-7, 1e-11}) {
        for (int i = 0; i < m; ++i) {
          if (d(i) <= dmin || std::max(xb(i), 0.0) / d(i) > bound) continue;
          if (leave < 0) {
            leave = i;
            continue;
          }
          const double ri = std::max(xb(i), 0.0) / d(i);
          const double rl = std::max(xb(leave), 0.0) / d(leave);
          double scale = std::max({1.0, std::abs(ri), std::abs(rl)});
          int cmp = 0;
          if (ri < rl - 1e-9 * scale) cmp = -1;
          else if (ri > rl + 1e-9 * scale) cmp = +1;
          for (int col = 0; col < m && cmp == 0; ++col) {
            const double vi = binv(i, col) / d(i);
            const double vl = binv(leave, col) / d(leave);
            scale = std::max({1.0, std::abs(vi), std::abs(vl)});
            if (vi < vl - 1e-9 * scale) cmp = -1;
            else if (vi > vl + 1e-9 * scale) cmp = +1;
          }
          if (cmp < 0 || (cmp == 0 && basis[i] < basis[leave])) leave = i;
        }
        if (leave >= 0) break;
      }
      if (leave < 0) throw SolverFailure("simplex: unbounded");
      basis[leave] = enter;
    }
    throw SolverFailure("simplex: iteration limit");
  };

  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + m);
  c1.tail(m).setOnes();
  run(c1);
  double art = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) art += std::abs(xb(i));
  if (art > 1e-6) throw SolverFailure("simplex: infeasible");

  // Leftover basic artificials sit at zero; pivot each onto some original
  // column so phase 2 never moves them again.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    refresh();
    std::vector<char> in_basis(n + m, 0);
    for (int r = 0; r < m; ++r) in_basis[basis[r]] = 1;
    bool done = false;
    for (int j = 0; j < n && !done; ++j) {
      if (in_basis[j]) continue;
      if (std::abs((binv * ext.col(j))(i)) > 1e-9) {
        basis[i] = j;
        done = true;
      }
    }
    if (!done) throw SolverFailure("simplex: dependent row");
  }

  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(n + m);
  c2.head(n) = cost;
  run(c2);
  refresh();

  SimplexResult res;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) res.x(basis[i]) = std::max(xb(i), 0.0);
  res.objective = cost.dot(res.x);
  return res;
}

SteinSetReport singleton_output_membership(const ResourceTheory& t, int n, const cmat& target) {
  const cmat predicted =
      tensor(tensor_power_of(t.gibbs_in, n), tensor_power_of(t.gibbs_out, n));
  SteinSetReport rep;
  if (target.rows() != predicted.rows())
    throw DimMismatch("stein_set_membership: target");
  rep.violation = (target - predicted).cwiseAbs().maxCoeff();
  rep.member = rep.violation <= tol::membership;
  return rep;
}

// Diagonal free inputs under incoherent channels: the output is determined by
// the channel's action on basis states, and any assignment of basis states to
// diagonal densities is realized by a measure-and-prepare incoherent channel.
// Membership is therefore a nonnegative linear system in those densities.
SteinSetReport coherence_membership(int n, const cmat& phi, const cmat& target, int dr, int da) {
  const int drn = ipow(dr, n);
  const int dan = ipow(da, n);
  if (target.rows() % drn != 0) throw DimMismatch("stein_set_membership: target");
  const int dbn = static_cast<int>(target.rows()) / drn;

  // Product weights over copy multi-indices, most-significant digit first.
  std::vector<std::vector<double>> qn(drn, std::vector<double>(dan, 1.0));
  for (int rr = 0; rr < drn; ++rr)
    for (int aa = 0; aa < dan; ++aa) {
      int rrem = rr, arem = aa;
      double v = 1.0;
      for (int c = n - 1; c >= 0; --c) {
        const int rdig = rrem % dr;
        const int adig = arem % da;
        rrem /= dr;
        arem /= da;
        v *= phi(rdig * da + adig, rdig * da + adig).real();
      }
      qn[rr][aa] = v;
    }

  double offv = 0.0;
  for (int i = 0; i < target.rows(); ++i)
    for (int j = 0; j < target.cols(); ++j)
      if (i != j) offv = std::max(offv, std::abs(target(i, j)));

  // Targets produced by actual solves carry round-off, so the data rows are
  // matched through minimized L1 slack rather than demanded exactly; the
  // optimal slack is the reported distance to the set.
  // Each data row is divided by its largest coefficient: the product weights
  // span several orders of magnitude, and the slack read-out multiplies the
  // scale back.  Row layout: the data rows first, then one normalization row
  // per input multi-index.
  const int ns = dan * dbn;
  const int ndata = drn * dbn;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ndata + dan, ns + 2 * ndata);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ndata + dan);
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ns + 2 * ndata);
  std::vector<double> rowscale(ndata);
  for (int rr = 0; rr < drn; ++rr) {
    double c = 0.0;
    for (int aa = 0; aa < dan; ++aa) c = std::max(c, qn[rr][aa]);
    if (c <= 0.0) c = 1.0;
    for (int b = 0; b < dbn; ++b) {
      const int k = rr * dbn + b;
      for (int aa = 0; aa < dan; ++aa) a(k, aa * dbn + b) = qn[rr][aa] / c;
      a(k, ns + 2 * k) = 1.0;
      a(k, ns + 2 * k + 1) = -1.0;
      cost(ns + 2 * k) = 1.0;
      cost(ns + 2 * k + 1) = 1.0;
      rhs(k) = target(rr * dbn + b, rr * dbn + b).real() / c;
      rowscale[k] = c;
    }
  }
  for (int aa = 0; aa < dan; ++aa) {
    for (int b = 0; b < dbn; ++b) a(ndata + aa, aa * dbn + b) = 1.0;
    rhs(ndata + aa) = 1.0;
  }

  const SimplexResult sol = simplex_min(a, rhs, cost);
  double resid = 0.0;
  for (int k = 0; k < ndata; ++k)
    resid = std::max(resid,
                     rowscale[k] * std::abs(sol.x(ns + 2 * k) - sol.x(ns + 2 * k + 1)));

  SteinSetReport rep;
  rep.violation = std::max(offv, resid);
  rep.member = rep.violation <= tol::membership;
  return rep;
}

SteinSetReport generic_membership(const ResourceTheory& t, int n, const cmat& phi,
                                  const cmat& target, int dr, int da) {
  const int drn = ipow(dr, n);
  const int dan = ipow(da, n);
  if (target.rows() % drn != 0) throw DimMismatch("stein_set_membership: target");
  const int dbn = static_cast<int>(target.rows()) / drn;
  // One output row per Hermitian basis element of R^n B^n; past this size the
  // dense Schur solve stops being practical.
  if (drn * dbn > 16)
    throw InvalidArgument("stein_set_membership: generic route limited to dim(R^n B^n) <= 16");
  const cmat phin = copy_major_input(phi, dr, da, n);

  // Slice rows are exact (the Choi variable is ours); the output rows are
  // matched through minimized L1 slack so that round-off in the target does
  // not make the program infeasible.
  const ConstraintSystem slice = t.free_channels(dan, dbn);
  SdpProblem p;
  const int bj = p.add_block(dan * dbn);
  for (size_t i = 0; i < slice.ops.size(); ++i) {
    const int row = p.add_row(slice.rhs[i]);
    p.add_term(row, bj, slice.ops[i]);
  }
  std::vector<std::pair<int, int>> slack;
  std::vector<double> rowscale;
  for (const cmat& h : hermitian_basis(drn * dbn)) {
    const cmat op = output_row_op(phin, h, drn, dan, dbn);
    double c = op.cwiseAbs().maxCoeff();
    if (c <= 1e-12) c = 1.0;
    const int row = p.add_row(hs_inner(h, target) / c);
    p.add_term(row, bj, cmat(op / c));
    const int sp = p.add_scalar();
    const int sm = p.add_scalar();
    p.add_scalar_term(row, sp, 1.0);
    p.add_scalar_term(row, sm, -1.0);
    p.set_objective_scalar(sp, 1.0);
    p.set_objective_scalar(sm, 1.0);
    slack.emplace_back(sp, sm);
    rowscale.push_back(c);
  }

  const SdpSolution sol = solve_sdp(p);
  // The decision needs a near-feasible point more than a certified gap: the
  // difference read below is a genuine residual of the returned Choi matrix,
  // so a non-member can never read small, while a member's read drifts by at
  // most the row residual.
  const bool usable =
      sol.status == SdpStatus::Optimal ||
      (sol.status == SdpStatus::MaxIter && sol.primal_residual <= tol::membership &&
       sol.dual_residual <= tol::membership);
  if (!usable) throw SolverFailure("stein_set_membership: feasibility");
  // Same difference read as the reduced route: the slack-pair sum overstates
  // the fit error at any interior iterate.
  double resid = 0.0;
  for (size_t k = 0; k < slack.size(); ++k)
    resid = std::max(resid, rowscale[k] * std::abs(sol.x[slack[k].first](0, 0).real() -
                                                   sol.x[slack[k].second](0, 0).real()));
  resid = std::max(resid, std::max(0.0, -eigh(sol.x[0]).eigenvalues.minCoeff()));

  SteinSetReport rep;
  rep.violation = resid;
  rep.member = rep.violation <= tol::membership;
  return rep;
}

}  // namespace

SteinSetReport stein_set_membership(const ResourceTheory& t, int copies, const cmat& phi_ra,
                                    const cmat& target, SteinRoute route) {
  if (copies < 1) throw InvalidArgument("stein_set_membership: copies");
  if (phi_ra.rows() != phi_ra.cols() || !is_hermitian(phi_ra))
    throw InvalidArgument("stein_set_membership: phi");
  if (target.rows() != target.cols() || !is_hermitian(target, 1e-6))
    throw InvalidArgument("stein_set_membership: target");

  int da = 0, dr = 0;
  if (t.kind == TheoryKind::Athermality) {
    da = static_cast<int>(t.gibbs_in.rows());
    if (phi_ra.rows() % da != 0) throw DimMismatch("stein_set_membership: phi");
    dr = static_cast<int>(phi_ra.rows()) / da;
  } else {
    da = static_cast<int>(std::llround(std::sqrt(static_cast<double>(phi_ra.rows()))));
    if (static_cast<long long>(da) * da != phi_ra.rows())
      throw InvalidArgument("stein_set_membership: phi must live on R tensor A with R ~ A");
    dr = da;
  }
  if (route == SteinRoute::Generic) return generic_membership(t, copies, phi_ra, target, dr, da);

  if (t.kind == TheoryKind::Athermality) {
    const cmat canonical = tensor(t.gibbs_in, t.gibbs_in);
    if (phi_ra.rows() == canonical.rows() &&
        (phi_ra - canonical).cwiseAbs().maxCoeff() <= tol::membership)
      return singleton_output_membership(t, copies, target);
    if (route == SteinRoute::Reduced)
      throw InvalidArgument("stein_set_membership: no reduced program off the canonical input");
    return generic_membership(t, copies, phi_ra, target, dr, da);
  }
  if (t.kind == TheoryKind::Coherence) {
    const MembershipReport free_phi = membership(t.free_states(dr * da), phi_ra);
    if (!free_phi.inside)
      throw InvalidArgument("stein_set_membership: phi must be a free (diagonal) state");
    return coherence_membership(copies, phi_ra, target, dr, da);
  }
  if (route == SteinRoute::Reduced)
    throw InvalidArgument("stein_set_membership: theory has no reduced program");
  return generic_membership(t, copies, phi_ra, target, dr, da);
}

SteinClosureReport stein_closure_check(const ResourceTheory& t, const cmat& phi_ra, int copies,
                                       int samples, uint64_t seed) {
  if (samples < 1) throw InvalidArgument("stein_closure_check: samples");
  if (copies < 2 || copies > 3) throw InvalidArgument("stein_closure_check: copies must be 2 or 3");
  const bool has_reduced = t.kind == TheoryKind::Coherence || t.singleton_free_output;
  if (copies > 2 && !has_reduced)
    throw InvalidArgument("stein_closure_check: copies = 3 needs a reduced membership program");

  const cmat phi = hermitize(phi_ra);
  int da = 0;
  if (t.kind == TheoryKind::Athermality) {
    da = static_cast<int>(t.gibbs_in.rows());
    if ((phi - tensor(t.gibbs_in, t.gibbs_in)).cwiseAbs().maxCoeff() > tol::membership)
      throw InvalidArgument("stein_closure_check: phi must be the Gibbs input pair");
  } else {
    da = static_cast<int>(std::llround(std::sqrt(static_cast<double>(phi.rows()))));
    if (static_cast<long long>(da) * da != phi.rows())
      throw InvalidArgument("stein_closure_check: phi must live on R tensor A with R ~ A");
    if (!membership(t.free_states(static_cast<int>(phi.rows())), phi).inside)
      throw InvalidArgument("stein_closure_check: phi must be free");
  }

  const int n = copies;
  const int dr = da;
  const int db = t.kind == TheoryKind::Athermality ? static_cast<int>(t.gibbs_out.rows()) : da;
  Rng rng = seeded(seed, 0);

  const int dan = ipow(da, n);
  const int dbn = ipow(db, n);
  const cmat phin = copy_major_input(phi, dr, da, n);

  SteinClosureReport rep;
  rep.samples = samples;

  const ChoiChannel interior = t.interior_free_channel(dan, dbn);
  const cmat tau_full = qrtkit::apply(interior, phin);
  rep.full_rank_min_eig = eigh(tau_full).eigenvalues.minCoeff();
  double interior_violation = stein_set_membership(t, n, phi, tau_full).violation;

  std::vector<int> tau_dims(2 * n);
  for (int c = 0; c < n; ++c) {
    tau_dims[c] = dr;
    tau_dims[n + c] = db;
  }
  std::vector<int> keep_front;  // drop the last copy pair
  for (int c = 0; c < n - 1; ++c) keep_front.push_back(c);
  for (int c = 0; c < n - 1; ++c) keep_front.push_back(n + c);
  std::vector<int> swap01(2 * n);
  for (int c = 0; c < 2 * n; ++c) swap01[c] = c;
  std::swap(swap01[0], swap01[1]);
  std::swap(swap01[n], swap01[n + 1]);

  const ConstraintSystem base_set = t.free_channels(da, db);
  std::uniform_real_distribution<double> wdist(0.3, 0.7);
  auto draw_base = [&](uint64_t stream) {
    return make_channel(da, db, free_sample(base_set, seeded(rng(), stream), 1), false);
  };
  auto tensor_of_draws = [&](uint64_t stream) {
    ChoiChannel acc = draw_base(stream);
    for (int c = 1; c < n; ++c) acc = tensor_channels(acc, draw_base(stream + c));
    return acc;
  };

  for (int s = 0; s < samples; ++s) {
    const double w = wdist(rng);
    const ChoiChannel t1 = tensor_of_draws(10);
    const ChoiChannel t2 = tensor_of_draws(20);
    ChoiChannel mn = t1;
    mn.choi = w * t1.choi + (1.0 - w) * t2.choi;
    const cmat tau_n = qrtkit::apply(mn, phin);

    const cmat tau_traced = ptrace_keep(tau_n, tau_dims, keep_front);
    rep.trace_violation = std::max(rep.trace_violation,
                                   stein_set_membership(t, n - 1, phi, tau_traced).violation);

    std::vector<cmat> singles;
    for (int c = 0; c < n; ++c) singles.push_back(qrtkit::apply(draw_base(30 + c), phi));
    cmat prod = singles[0];
    for (int c = 1; c < n; ++c) prod = tensor(prod, singles[c]);
    std::vector<int> pair_dims(2 * n), pair_perm(2 * n);
    for (int c = 0; c < n; ++c) {
      pair_dims[2 * c] = dr;
      pair_dims[2 * c + 1] = db;
      pair_perm[c] = 2 * c;
      pair_perm[n + c] = 2 * c + 1;
    }
    const cmat tau_tensor = permute_factors(prod, pair_dims, pair_perm);
    rep.tensor_violation =
        std::max(rep.tensor_violation, stein_set_membership(t, n, phi, tau_tensor).violation);

    const cmat tau_perm = permute_factors(tau_n, tau_dims, swap01);
    rep.permutation_violation =
        std::max(rep.permutation_violation, stein_set_membership(t, n, phi, tau_perm).violation);
  }

  rep.max_violation = std::max({interior_violation, rep.trace_violation, rep.tensor_violation,
                                rep.permutation_violation});
  rep.all_passed = rep.max_violation <= tol::membership && rep.full_rank_min_eig > 0.0;
  return rep;
}

}  // namespace qrtkit
