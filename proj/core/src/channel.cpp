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

#include "qrtkit/channel.hpp"

#include <cmath>

namespace qrtkit {

bool is_cp(const ChoiChannel& n, double eig_floor) {
  const double scale = std::max(1.0, std::abs(n.choi.trace().real()));
  return is_hermitian(n.choi, 1e-8) && min_eig(n.choi) >= -eig_floor * scale;
}

bool is_tp(const ChoiChannel& n, double tp_tol) {
  cmat marg = partial_trace(n.choi, {n.dim_in, n.dim_out}, 1);
  return (marg - cmat::Identity(n.dim_in, n.dim_in)).cwiseAbs().maxCoeff() <= tp_tol;
}

bool is_cptp(const ChoiChannel& n) { return is_cp(n) && is_tp(n); }

ChoiChannel make_channel(int dim_in, int dim_out, const cmat& choi, bool cptp) {
  if (dim_in <= 0 || dim_out <= 0) throw InvalidArgument("make_channel: dims must be positive");
  if (choi.rows() != dim_in * dim_out || choi.cols() != dim_in * dim_out) {
    throw DimMismatch("make_channel: Choi must be (dim_in*dim_out) square");
  }
  if (!is_hermitian(choi, 1e-8)) throw NotHermitian("make_channel: Choi not Hermitian");
  ChoiChannel n{dim_in, dim_out, hermitize(choi)};
  if (cptp) {
    if (!is_cp(n)) throw NotCp("make_channel: Choi has negative eigenvalue");
    if (!is_tp(n)) throw NotTp("make_channel: partial trace of Choi is not the identity");
  }
  return n;
}

ChoiChannel choi_from_kraus(int dim_in, int dim_out, const std::vector<cmat>& kraus) {
  if (kraus.empty()) throw InvalidArgument("choi_from_kraus: empty Kraus list");
  cmat j = cmat::Zero(dim_in * dim_out, dim_in * dim_out);
  for (const cmat& k : kraus) {
    if (k.rows() != dim_out || k.cols() != dim_in) throw DimMismatch("choi_from_kraus: Kraus shape");
    // vec(K) with index (x b): component K(b, x)
    cvec v(dim_in * dim_out);
    for (int x = 0; x < dim_in; ++x)
      for (int b = 0; b < dim_out; ++b) v[x * dim_out + b] = k(b, x);
    j += v * v.adjoint();
  }
  return {dim_in, dim_out, hermitize(j)};
}

std::vector<cmat> kraus_from_choi(const ChoiChannel& n, double support_tol) {
  Eigh e = eigh(n.choi);
  const double cut = support_tol * std::max(1.0, e.eigenvalues.cwiseAbs().maxCoeff());
  std::vector<cmat> out;
  for (int k = 0; k < e.eigenvalues.size(); ++k) {
    double w = e.eigenvalues[k];
    if (w <= cut) continue;
    cmat kr(n.dim_out, n.dim_in);
    for (int x = 0; x < n.dim_in; ++x)
      for (int b = 0; b < n.dim_out; ++b) kr(b, x) = std::sqrt(w) * e.eigenvectors(x * n.dim_out + b, k);
    out.push_back(kr);
  }
  if (out.empty()) out.push_back(cmat::Zero(n.dim_out, n.dim_in));
  return out;
}

cmat apply(const ChoiChannel& n, const cmat& rho_ra) {
  const int da = n.dim_in, db = n.dim_out;
  if (rho_ra.rows() != rho_ra.cols() || rho_ra.rows() % da != 0) {
    throw DimMismatch("apply: state dim not a multiple of dim_in");
  }
  const int dr = static_cast<int>(rho_ra.rows()) / da;
  cmat out = cmat::Zero(dr * db, dr * db);
  for (int r = 0; r < dr; ++r)
    for (int rp = 0; rp < dr; ++rp)
      for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp) {
          cplx acc = 0.0;
          for (int x = 0; x < da; ++x)
            for (int y = 0; y < da; ++y)
              acc += rho_ra(r * da + x, rp * da + y) * n.choi(x * db + b, y * db + bp);
          out(r * db + b, rp * db + bp) = acc;
        }
  return out;
}

cmat apply_adjoint(const ChoiChannel& n, const cmat& y_rb) {
  const int da = n.dim_in, db = n.dim_out;
  if (y_rb.rows() != y_rb.cols() || y_rb.rows() % db != 0) {
    throw DimMismatch("apply_adjoint: operator dim not a multiple of dim_out");
  }
  const int dr = static_cast<int>(y_rb.rows()) / db;
  cmat out = cmat::Zero(dr * da, dr * da);
  for (int r = 0; r < dr; ++r)
    for (int rp = 0; rp < dr; ++rp)
      for (int x = 0; x < da; ++x)
        for (int y = 0; y < da; ++y) {
          cplx acc = 0.0;
          for (int b = 0; b < db; ++b)
            for (int bp = 0; bp < db; ++bp)
              acc += y_rb(r * db + b, rp * db + bp) * std::conj(n.choi(x * db + b, y * db + bp));
          out(r * da + x, rp * da + y) = acc;
        }
  return out;
}

ChoiChannel compose(const ChoiChannel& m, const ChoiChannel& n) {
  if (n.dim_out != m.dim_in) throw DimMismatch("compose: inner dims disagree");
  // J^{m o n} = (id_A tensor m)(J^n) with A as the spectator.
  return {n.dim_in, m.dim_out, qrtkit::apply(m, n.choi)};
}

ChoiChannel tensor_channels(const ChoiChannel& a, const ChoiChannel& b) {
  cmat big = tensor(a.choi, b.choi);  // factors A1 B1 A2 B2
  cmat re = permute_factors(big, {a.dim_in, a.dim_out, b.dim_in, b.dim_out}, {0, 2, 1, 3});
  return {a.dim_in * b.dim_in, a.dim_out * b.dim_out, re};
}

ChoiChannel channel_power(const ChoiChannel& n, int copies) {
  if (copies < 1) throw InvalidArgument("channel_power: copies must be >= 1");
  ChoiChannel out = n;
  for (int k = 1; k < copies; ++k) out = tensor_channels(out, n);
  return out;
}

ChoiChannel identity_channel(int d) {
  cmat j = cmat::Zero(d * d, d * d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) j(x * d + x, y * d + y) = 1.0;
  return {d, d, j};
}

ChoiChannel replacement_channel(int dim_in, const cmat& sigma) {
  if (sigma.rows() != sigma.cols()) throw DimMismatch("replacement_channel: sigma not square");
  return {dim_in, static_cast<int>(sigma.rows()),
          tensor(cmat::Identity(dim_in, dim_in), hermitize(sigma))};
}

ChoiChannel unitary_channel(const cmat& u) {
  if (u.rows() != u.cols()) throw DimMismatch("unitary_channel: not square");
  if ((u * u.adjoint() - cmat::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("unitary_channel: not unitary");
  }
  return choi_from_kraus(static_cast<int>(u.rows()), static_cast<int>(u.rows()), {u});
}

ChoiChannel dephasing_channel(int d) {
  cmat j = cmat::Zero(d * d, d * d);
  for (int x = 0; x < d; ++x) j(x * d + x, x * d + x) = 1.0;
  return {d, d, j};
}

ChoiChannel permutation_channel(int d, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  if (n < 1) throw InvalidArgument("permutation_channel: empty perm");
  int total = 1;
  for (int k = 0; k < n; ++k) total *= d;
  std::vector<int> strides(n, 1);
  for (int k = n - 2; k >= 0; --k) strides[k] = strides[k + 1] * d;
  cmat u = cmat::Zero(total, total);
  std::vector<int> mi(n);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int k = 0; k < n; ++k) {
      mi[k] = rem / strides[k];
      rem %= strides[k];
    }
    int nidx = 0;
    for (int k = 0; k < n; ++k) nidx += mi[perm[k]] * strides[k];
    u(nidx, idx) = 1.0;
  }
  return unitary_channel(u);
}

ChoiChannel random_channel(int dim_in, int dim_out, int dim_env, Rng rng) {
  if (dim_out * dim_env < dim_in) {
    throw InvalidArgument("random_channel: dim_out*dim_env must be >= dim_in");
  }
  cmat u = random_unitary(dim_out * dim_env, rng);
  std::vector<cmat> kraus;
  kraus.reserve(dim_env);
  for (int e = 0; e < dim_env; ++e) {
    cmat k(dim_out, dim_in);
    for (int b = 0; b < dim_out; ++b)
      for (int a = 0; a < dim_in; ++a) k(b, a) = u(b * dim_env + e, a);
    kraus.push_back(k);
  }
  return choi_from_kraus(dim_in, dim_out, kraus);
}

Superchannel make_superchannel(const ChoiChannel& pre, const ChoiChannel& post, int dim_a,
                               int dim_b, int dim_e) {
  if (pre.dim_out != dim_a * dim_e) throw DimMismatch("make_superchannel: pre output is not A*E");
  if (post.dim_in != dim_b * dim_e) throw DimMismatch("make_superchannel: post input is not B*E");
  return {pre, post, dim_a, dim_b, dim_e};
}

Superchannel identity_superchannel(int dim_a, int dim_b) {
  // E is trivial (dimension 1).
  return {identity_channel(dim_a), identity_channel(dim_b), dim_a, dim_b, 1};
}

ChoiChannel superchannel_apply(const Superchannel& theta, const ChoiChannel& n) {
  if (n.dim_in != theta.dim_a || n.dim_out != theta.dim_b) {
    throw DimMismatch("superchannel_apply: channel does not fit the slot");
  }
  ChoiChannel mid = tensor_channels(n, identity_channel(theta.dim_e));
  return compose(theta.post, compose(mid, theta.pre));
}

}  // namespace qrtkit
