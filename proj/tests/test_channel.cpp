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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "qrtkit/channel.hpp"
#include "qrtkit/linalg.hpp"
#include "qrtkit/random.hpp"

using namespace qrtkit;

namespace {

cmat apply_kraus(const std::vector<cmat>& ks, const cmat& rho) {
  cmat out = cmat::Zero(ks[0].rows(), ks[0].rows());
  for (const cmat& k : ks) out += k * rho * k.adjoint();
  return out;
}

}  // namespace

TEST_CASE("identity channel leaves bipartite states alone") {
  ChoiChannel id2 = identity_channel(2);
  CHECK(is_cptp(id2));
  const cmat rho = random_density(4, seeded(1, 0));
  CHECK((qrtkit::apply(id2, rho) - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("replacement channel is constant with a spectator") {
  const cmat omega = random_density(2, seeded(2, 0));
  ChoiChannel rep = replacement_channel(2, omega);
  CHECK(is_cptp(rep));
  const cmat rho_ra = random_density(4, seeded(2, 1));
  const cmat out = qrtkit::apply(rep, rho_ra);
  const cmat want = tensor(partial_trace(rho_ra, {2, 2}, 1), omega);
  CHECK((out - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Choi application agrees with the Kraus form") {
  for (uint64_t seed : {3u, 4u, 5u}) {
    ChoiChannel n = random_channel(2, 2, 3, seeded(seed, 0));
    auto ks = kraus_from_choi(n);
    for (int t = 0; t < 3; ++t) {
      const cmat rho = random_density(2, seeded(seed, 1 + (uint64_t)t));
      CHECK((qrtkit::apply(n, rho) - apply_kraus(ks, rho)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Kraus round trips through the Choi matrix") {
  // Identity Kraus set.
  ChoiChannel j_id = choi_from_kraus(2, 2, {cmat::Identity(2, 2)});
  CHECK((j_id.choi - identity_channel(2).choi).cwiseAbs().maxCoeff() < 1e-12);

  // Reset-to-|0> Kraus set equals the replacement channel to |0><0|.
  cmat k0 = cmat::Zero(2, 2), k1 = cmat::Zero(2, 2);
  k0(0, 0) = 1;
  k1(0, 1) = 1;
  ChoiChannel reset = choi_from_kraus(2, 2, {k0, k1});
  CHECK((reset.choi - replacement_channel(2, basis_proj(2, 0)).choi).cwiseAbs().maxCoeff() <
        1e-12);

  for (uint64_t seed : {6u, 7u}) {
    ChoiChannel n = random_channel(2, 2, 3, seeded(seed, 0));
    ChoiChannel back = choi_from_kraus(2, 2, kraus_from_choi(n));
    CHECK((back.choi - n.choi).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("composition matches sequential application") {
  ChoiChannel id2 = identity_channel(2);
  ChoiChannel n = random_channel(2, 2, 2, seeded(8, 0));
  CHECK((compose(id2, n).choi - n.choi).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((compose(n, id2).choi - n.choi).cwiseAbs().maxCoeff() < 1e-10);

  ChoiChannel m = random_channel(2, 3, 2, seeded(8, 1));
  ChoiChannel mn = compose(m, n);
  CHECK(is_cptp(mn));
  for (int t = 0; t < 5; ++t) {
    const cmat rho = random_density(2, seeded(9, (uint64_t)t));
    const cmat staged = qrtkit::apply(m, qrtkit::apply(n, rho));
    CHECK((qrtkit::apply(mn, rho) - staged).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("tensor powers of replacement channels replace with tensor powers") {
  const cmat omega = random_density(2, seeded(10, 0));
  ChoiChannel rep2 = channel_power(replacement_channel(2, omega), 2);
  ChoiChannel want = replacement_channel(4, tensor(omega, omega));
  CHECK((rep2.choi - want.choi).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("tensor powers act factorwise on product inputs") {
  ChoiChannel n = random_channel(2, 2, 2, seeded(11, 0));
  ChoiChannel n2 = channel_power(n, 2);
  CHECK(is_cptp(n2));
  const cmat phi = random_density(2, seeded(11, 1));
  const cmat lhs = qrtkit::apply(n2, tensor(phi, phi));
  const cmat one = qrtkit::apply(n, phi);
  CHECK((lhs - tensor(one, one)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("apply is linear in the state and in the channel") {
  ChoiChannel n = random_channel(2, 2, 2, seeded(12, 0));
  ChoiChannel m = random_channel(2, 2, 2, seeded(12, 1));
  const cmat r1 = random_density(2, seeded(12, 2));
  const cmat r2 = random_density(2, seeded(12, 3));
  const double p = 0.3;

  const cmat mix_state = qrtkit::apply(n, p * r1 + (1 - p) * r2);
  CHECK((mix_state - (p * qrtkit::apply(n, r1) + (1 - p) * qrtkit::apply(n, r2)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  ChoiChannel mix{2, 2, p * n.choi + (1 - p) * m.choi};
  const cmat mix_chan = qrtkit::apply(mix, r1);
  CHECK((mix_chan - (p * qrtkit::apply(n, r1) + (1 - p) * qrtkit::apply(m, r1)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("adjoint application satisfies the inner-product identity") {
  ChoiChannel n = random_channel(2, 3, 2, seeded(13, 0));
  const cmat x = random_density(4, seeded(13, 1));  // on R (x) A
  cmat y = hermitize(ginibre(6, 6, seeded(13, 2)));  // on R (x) B
  CHECK(std::abs(hs_inner(y, qrtkit::apply(n, x)) - hs_inner(apply_adjoint(n, y), x)) <
        1e-10);
}

TEST_CASE("permutation channels permute factors and invert") {
  ChoiChannel idp = permutation_channel(2, {0, 1});
  CHECK((idp.choi - identity_channel(4).choi).cwiseAbs().maxCoeff() < 1e-12);

  const cmat rho = random_density(2, seeded(14, 0));
  const cmat sig = random_density(2, seeded(14, 1));
  ChoiChannel swap = permutation_channel(2, {1, 0});
  CHECK((qrtkit::apply(swap, tensor(rho, sig)) - tensor(sig, rho)).cwiseAbs().maxCoeff() <
        1e-10);

  const std::vector<int> perm{2, 0, 1};
  const std::vector<int> inv{1, 2, 0};
  ChoiChannel round = compose(permutation_channel(2, inv), permutation_channel(2, perm));
  CHECK((round.choi - identity_channel(8).choi).cwiseAbs().maxCoeff() < 1e-10);

  const cmat x = random_density(8, seeded(14, 2));
  CHECK((qrtkit::apply(permutation_channel(2, perm), x) - permute_factors(x, {2, 2, 2}, perm))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("random channels are CPTP and reduce to unitaries without environment") {
  for (uint64_t seed : {15u, 16u, 17u}) {
    ChoiChannel n = random_channel(2, 3, 4, seeded(seed, 0));
    CHECK(is_cptp(n));
  }
  ChoiChannel u = random_channel(3, 3, 1, seeded(18, 0));
  CHECK(is_cptp(u));
  // Unitary channels send pure states to pure states.
  const cvec psi = random_pure(3, seeded(18, 1));
  const cmat out = qrtkit::apply(u, psi * psi.adjoint());
  CHECK(std::abs(hs_inner(out, out) - 1.0) < 1e-9);
}

TEST_CASE("superchannels with trivial parts reproduce and replace") {
  ChoiChannel n = random_channel(2, 2, 2, seeded(19, 0));
  Superchannel triv = identity_superchannel(2, 2);
  CHECK((superchannel_apply(triv, n).choi - n.choi).cwiseAbs().maxCoeff() < 1e-10);

  // Post-processing that replaces the output makes the whole thing constant.
  const cmat omega = random_density(2, seeded(19, 1));
  Superchannel rep = make_superchannel(identity_channel(2), replacement_channel(2, omega), 2,
                                       2, 1);
  ChoiChannel out = superchannel_apply(rep, n);
  CHECK((out.choi - replacement_channel(2, omega).choi).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("superchannel application equals staged application") {
  // pre: A' -> A (x) E, post: B (x) E -> B', all qubits.
  ChoiChannel pre = random_channel(2, 4, 2, seeded(20, 0));
  ChoiChannel post = random_channel(4, 2, 2, seeded(20, 1));
  Superchannel theta = make_superchannel(pre, post, 2, 2, 2);
  ChoiChannel n = random_channel(2, 2, 2, seeded(20, 2));
  ChoiChannel tn = superchannel_apply(theta, n);
  CHECK(is_cptp(tn));

  ChoiChannel n_ext = tensor_channels(n, identity_channel(2));
  ChoiChannel staged = compose(post, compose(n_ext, pre));
  CHECK((tn.choi - staged.choi).cwiseAbs().maxCoeff() < 1e-9);

  for (int t = 0; t < 3; ++t) {
    const cmat rho = random_density(2, seeded(21, (uint64_t)t));
    const cmat lhs = qrtkit::apply(tn, rho);
    const cmat rhs = qrtkit::apply(post, qrtkit::apply(n_ext, qrtkit::apply(pre, rho)));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("mean output purity of random channels matches a direct Stinespring sample") {
  // Channel draw: Haar isometry A -> B (x) E. The oracle below rebuilds the
  // ensemble directly from Haar unitaries and never touches the Choi
  // plumbing under test.
  const int d = 2, env = 4;
  const cmat max_mixed = cmat::Identity(d, d) / d;
  const int samples = 300;

  double impl = 0.0;
  for (int k = 0; k < samples; ++k) {
    ChoiChannel n = random_channel(d, d, env, seeded(400, (uint64_t)k));
    const cmat out = qrtkit::apply(n, max_mixed);
    impl += hs_inner(out, out);
  }
  impl /= samples;

  double oracle = 0.0;
  for (int k = 0; k < samples; ++k) {
    const cmat u = random_unitary(d * env, seeded(500, (uint64_t)k));
    const cmat v = u.leftCols(d);  // Haar isometry, B leftmost in B (x) E
    const cmat out = ptrace_keep(cmat(v * v.adjoint() / d), {d, env}, {0});
    oracle += hs_inner(out, out);
  }
  oracle /= samples;

  CHECK(std::abs(impl - oracle) < 0.05 * oracle);
}
