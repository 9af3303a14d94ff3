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

#include <doctest.h>

#include "qrtkit/linalg.hpp"
#include "qrtkit/random.hpp"

using namespace qrtkit;

namespace {

cmat pauli_x() {
  cmat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

cmat random_hermitian(int d, Rng rng) {
  cmat g = ginibre(d, d, rng);
  return hermitize(g);
}

}  // namespace

TEST_CASE("eigh on the identity and Pauli X") {
  Eigh e = eigh(cmat::Identity(2, 2));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(1.0));

  Eigh x = eigh(pauli_x());
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(x.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
  for (uint64_t seed : {7u, 8u, 9u}) {
    const cmat h = random_hermitian(4, seeded(seed, 0));
    Eigh e = eigh(h);
    const cmat back =
        e.eigenvectors * e.eigenvalues.asDiagonal().toDenseMatrix().cast<cplx>() *
        e.eigenvectors.adjoint();
    CHECK((back - h).cwiseAbs().maxCoeff() < 1e-10);
    const cmat gram = e.eigenvectors.adjoint() * e.eigenvectors;
    CHECK((gram - cmat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i + 1 < 4; ++i) CHECK(e.eigenvalues(i) <= e.eigenvalues(i + 1));
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  cmat a(2, 2);
  a << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigh(a), NotHermitian);
}

TEST_CASE("matrix functions act on the support only") {
  CHECK(matrix_fn_on_support(cmat::Identity(2, 2), [](double x) { return std::log(x); })
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  cmat d40(2, 2);
  d40 << 4, 0, 0, 0;
  const cmat isq = mpow_on_support(d40, -0.5);
  CHECK(std::abs(isq(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(isq(1, 1)) < 1e-12);

  const cmat rho = random_density(3, seeded(3, 0));
  const cmat root = mpow_on_support(rho, 0.5);
  CHECK((root * root - rho).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("partial trace on product and entangled states") {
  const cmat rho = random_density(2, seeded(11, 0));
  const cmat sig = random_density(3, seeded(11, 1));
  const cmat prod = tensor(rho, sig);
  CHECK((partial_trace(prod, {2, 3}, 1) - rho).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(prod, {2, 3}, 0) - sig).cwiseAbs().maxCoeff() < 1e-12);

  cvec bell = (tensor(basis_state(2, 0), basis_state(2, 0)) +
               tensor(basis_state(2, 1), basis_state(2, 1))) /
              std::sqrt(2.0);
  const cmat phi = bell * bell.adjoint();
  CHECK((partial_trace(phi, {2, 2}, 0) - cmat::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
        1e-12);

  const cmat rho_ab = random_density(6, seeded(12, 0));
  const cmat a = partial_trace(rho_ab, {2, 3}, 1);
  CHECK(std::abs(a.trace().real() - 1.0) < 1e-12);
  CHECK(is_psd(a));
}

TEST_CASE("ptrace_keep and permute_factors are consistent") {
  const cmat x = random_density(8, seeded(13, 0));
  // Keeping {0,2} of three qubits equals tracing out the middle factor.
  CHECK((ptrace_keep(x, {2, 2, 2}, {0, 2}) - partial_trace(x, {2, 2, 2}, 1))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  const cmat a = random_density(2, seeded(14, 0));
  const cmat b = random_density(2, seeded(14, 1));
  const cmat c = random_density(2, seeded(14, 2));
  const cmat abc = tensor(a, tensor(b, c));
  // Output factor k is input factor perm[k]: perm {2,0,1} puts c first.
  const cmat cab = tensor(c, tensor(a, b));
  CHECK((permute_factors(abc, {2, 2, 2}, {2, 0, 1}) - cab).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("norms and positive part") {
  cmat d(2, 2);
  d << 1, 0, 0, -1;
  CHECK(trace_norm(d) == doctest::Approx(2.0));
  CHECK(op_norm(cmat::Identity(5, 5)) == doctest::Approx(1.0));

  cmat e(2, 2);
  e << 2, 0, 0, -3;
  const cmat pos = positive_part(e);
  CHECK(std::abs(pos(0, 0).real() - 2.0) < 1e-12);
  CHECK(std::abs(pos(1, 1)) < 1e-12);

  for (uint64_t seed : {21u, 22u}) {
    const cmat h = random_hermitian(4, seeded(seed, 0));
    CHECK(trace_norm(h) >= std::abs(h.trace().real()) - 1e-12);
    CHECK(op_norm(h) <= trace_norm(h) + 1e-12);
    CHECK(trace_norm(h) <= 4.0 * op_norm(h) + 1e-12);
  }
}

TEST_CASE("Audenaert trace inequality on random positive pairs") {
  for (uint64_t seed : {31u, 32u, 33u}) {
    Rng rng = seeded(seed, 0);
    const cmat a = 2.0 * random_density(3, seeded(seed, 1));
    const cmat b = 1.5 * random_density(3, seeded(seed, 2));
    for (double alpha : {0.25, 0.5, 0.75}) {
      const double lhs =
          hs_inner(mpow_on_support(a, alpha), mpow_on_support(b, 1.0 - alpha));
      const double rhs = 0.5 * (a.trace().real() + b.trace().real() - trace_norm(a - b));
      CHECK(lhs >= rhs - 1e-9);
    }
  }
}

TEST_CASE("hermitian basis is orthogonal with the stated normalization") {
  for (int d : {2, 3}) {
    auto basis = hermitian_basis(d);
    CHECK((int)basis.size() == d * d);
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK(is_hermitian(basis[i]));
      for (size_t j = 0; j < i; ++j) CHECK(std::abs(hs_inner(basis[i], basis[j])) < 1e-12);
      const double norm2 = hs_inner(basis[i], basis[i]);
      CHECK((std::abs(norm2 - 1.0) < 1e-12 || std::abs(norm2 - 2.0) < 1e-12));
    }
  }
}

TEST_CASE("binary entropy endpoints and midpoint") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(binary_entropy(-0.1), InvalidArgument);
  CHECK_THROWS_AS(binary_entropy(1.1), InvalidArgument);
}

TEST_CASE("partial transpose squares to the identity and detects entanglement") {
  const cmat x = random_density(4, seeded(41, 0));
  CHECK((partial_transpose(partial_transpose(x, {2, 2}, 1), {2, 2}, 1) - x)
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  cvec bell = (tensor(basis_state(2, 0), basis_state(2, 0)) +
               tensor(basis_state(2, 1), basis_state(2, 1))) /
              std::sqrt(2.0);
  CHECK(min_eig(partial_transpose(bell * bell.adjoint(), {2, 2}, 1)) < -0.4);
}
