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

#include "qrtkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrtkit {

namespace {

int checked_square(const cmat& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw DimMismatch(std::string(who) + ": matrix is " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()));
  }
  return static_cast<int>(a.rows());
}

// Row/col multi-index stride table; leftmost factor most significant.
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

int total_dim(const std::vector<int>& dims) {
  int t = 1;
  for (int d : dims) {
    if (d <= 0) throw InvalidArgument("tensor factor dims must be positive");
    t *= d;
  }
  return t;
}

}  // namespace

bool is_hermitian(const cmat& a, double tol_entries) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol_entries * std::max(1.0, a.cwiseAbs().maxCoeff());
}

cmat hermitize(const cmat& a) { return 0.5 * (a + a.adjoint()); }

Eigh eigh(const cmat& a, double tol_entries) {
  const int d = checked_square(a, "eigh");
  if (!is_hermitian(a, tol_entries)) {
    throw NotHermitian("eigh: deviation " +
                       std::to_string((a - a.adjoint()).cwiseAbs().maxCoeff()));
  }
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(a));
  if (es.info() != Eigen::Success) throw SolverFailure("eigh: eigensolver did not converge");
  Eigh out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  (void)d;
  return out;
}

cmat matrix_fn_on_support(const cmat& a, const std::function<double(double)>& f,
                          double support_tol) {
  Eigh e = eigh(a);
  const double scale = e.eigenvalues.cwiseAbs().maxCoeff();
  const double cut = support_tol * std::max(scale, 1e-300);
  rvec w = e.eigenvalues;
  for (int i = 0; i < w.size(); ++i) w[i] = (std::abs(w[i]) <= cut) ? 0.0 : f(w[i]);
  return e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint();
}

cmat mpow_on_support(const cmat& a, double p, double support_tol) {
  return matrix_fn_on_support(
      a, [p](double x) { return std::pow(x, p); }, support_tol);
}

double trace_norm(const cmat& a) {
  Eigen::JacobiSVD<cmat> svd(a);
  return svd.singularValues().sum();
}

double op_norm(const cmat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<cmat> svd(a);
  return svd.singularValues()(0);
}

cmat positive_part(const cmat& a) {
  Eigh e = eigh(a);
  rvec w = e.eigenvalues.cwiseMax(0.0);
  return e.eigenvectors * w.asDiagonal() * e.eigenvectors.adjoint();
}

double min_eig(const cmat& a) {
  Eigen::SelfAdjointEigenSolver<cmat> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const cmat& a, double eig_floor) {
  if (!is_hermitian(a, 1e-8)) return false;
  return min_eig(a) >= -eig_floor;
}

double hs_inner(const cmat& a, const cmat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimMismatch("hs_inner");
  return (a.adjoint() * b).trace().real();
}

cmat tensor(const cmat& a, const cmat& b) {
  cmat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cmat tensor_power(const cmat& a, int n) {
  if (n < 1) throw InvalidArgument("tensor_power: n must be >= 1");
  cmat out = a;
  for (int k = 1; k < n; ++k) out = tensor(out, a);
  return out;
}

cmat partial_trace(const cmat& x, const std::vector<int>& dims, int traced) {
  const int nd = static_cast<int>(dims.size());
  if (traced < 0 || traced >= nd) throw InvalidArgument("partial_trace: bad factor index");
  std::vector<int> keep;
  for (int k = 0; k < nd; ++k)
    if (k != traced) keep.push_back(k);
  return ptrace_keep(x, dims, keep);
}

cmat ptrace_keep(const cmat& x, const std::vector<int>& dims, const std::vector<int>& keep) {
  const int total = total_dim(dims);
  if (x.rows() != total || x.cols() != total) throw DimMismatch("ptrace_keep: dims mismatch");
  const int nd = static_cast<int>(dims.size());
  std::vector<bool> kept(nd, false);
  std::vector<int> kdims;
  for (int k : keep) {
    if (k < 0 || k >= nd || kept[k]) throw InvalidArgument("ptrace_keep: bad keep list");
    kept[k] = true;
    kdims.push_back(dims[k]);
  }
  std::vector<int> tdims;
  std::vector<int> tidx;
  for (int k = 0; k < nd; ++k)
    if (!kept[k]) {
      tdims.push_back(dims[k]);
      tidx.push_back(k);
    }
  const int dk = total_dim(kdims.empty() ? std::vector<int>{1} : kdims);
  const int dt = total_dim(tdims.empty() ? std::vector<int>{1} : tdims);
  const std::vector<int> strides = strides_of(dims);

  cmat out = cmat::Zero(dk, dk);
  std::vector<int> ki(keep.size(), 0), kj(keep.size(), 0), ti(tidx.size(), 0);
  for (int i = 0; i < dk; ++i) {
    {
      int rem = i;
      for (size_t u = 0; u < keep.size(); ++u) {
        int block = 1;
        for (size_t v = u + 1; v < keep.size(); ++v) block *= kdims[v];
        ki[u] = rem / block;
        rem %= block;
      }
    }
    for (int j = 0; j < dk; ++j) {
      int rem = j;
      for (size_t u = 0; u < keep.size(); ++u) {
        int block = 1;
        for (size_t v = u + 1; v < keep.size(); ++v) block *= kdims[v];
        kj[u] = rem / block;
        rem %= block;
      }
      cplx acc = 0.0;
      for (int t = 0; t < dt; ++t) {
        int rem2 = t;
        for (size_t u = 0; u < tidx.size(); ++u) {
          int block = 1;
          for (size_t v = u + 1; v < tidx.size(); ++v) block *= tdims[v];
          ti[u] = rem2 / block;
          rem2 %= block;
        }
        int row = 0, col = 0;
        for (size_t u = 0; u < keep.size(); ++u) {
          row += ki[u] * strides[keep[u]];
          col += kj[u] * strides[keep[u]];
        }
        for (size_t u = 0; u < tidx.size(); ++u) {
          row += ti[u] * strides[tidx[u]];
          col += ti[u] * strides[tidx[u]];
        }
        acc += x(row, col);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

cmat permute_factors(const cmat& x, const std::vector<int>& dims, const std::vector<int>& perm) {
  const int total = total_dim(dims);
  if (x.rows() != total || x.cols() != total) throw DimMismatch("permute_factors");
  const int nd = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != nd) throw InvalidArgument("permute_factors: perm size");
  std::vector<bool> seen(nd, false);
  std::vector<int> ndims(nd);
  for (int k = 0; k < nd; ++k) {
    if (perm[k] < 0 || perm[k] >= nd || seen[perm[k]]) throw InvalidArgument("permute_factors: bad perm");
    seen[perm[k]] = true;
    ndims[k] = dims[perm[k]];
  }
  const std::vector<int> old_strides = strides_of(dims);
  const std::vector<int> new_strides = strides_of(ndims);

  // map[old linear index] = new linear index
  std::vector<int> map(total, 0);
  std::vector<int> mi(nd, 0);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx;
    for (int k = 0; k < nd; ++k) {
      mi[k] = rem / old_strides[k];
      rem %= old_strides[k];
    }
    int nidx = 0;
    for (int k = 0; k < nd; ++k) nidx += mi[perm[k]] * new_strides[k];
    map[idx] = nidx;
  }
  cmat out(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) out(map[i], map[j]) = x(i, j);
  return out;
}

cmat partial_transpose(const cmat& x, const std::vector<int>& dims, int which) {
  const int total = total_dim(dims);
  if (x.rows() != total || x.cols() != total) throw DimMismatch("partial_transpose");
  const int nd = static_cast<int>(dims.size());
  if (which < 0 || which >= nd) throw InvalidArgument("partial_transpose: bad factor");
  const std::vector<int> strides = strides_of(dims);
  cmat out(total, total);
  std::vector<int> mi(nd), mj(nd);
  for (int i = 0; i < total; ++i) {
    int rem = i;
    for (int k = 0; k < nd; ++k) {
      mi[k] = rem / strides[k];
      rem %= strides[k];
    }
    for (int j = 0; j < total; ++j) {
      rem = j;
      for (int k = 0; k < nd; ++k) {
        mj[k] = rem / strides[k];
        rem %= strides[k];
      }
      int ii = i + (mj[which] - mi[which]) * strides[which];
      int jj = j + (mi[which] - mj[which]) * strides[which];
      out(ii, jj) = x(i, j);
    }
  }
  return out;
}

cvec basis_state(int d, int i) {
  if (i < 0 || i >= d) throw InvalidArgument("basis_state: index out of range");
  cvec v = cvec::Zero(d);
  v[i] = 1.0;
  return v;
}

cmat basis_proj(int d, int i) {
  cmat p = cmat::Zero(d, d);
  p(i, i) = 1.0;
  return p;
}

std::vector<cmat> hermitian_basis(int d) {
  std::vector<cmat> out;
  out.reserve(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i) out.push_back(basis_proj(d, i));
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      cmat s = cmat::Zero(d, d);
      s(i, j) = 1.0;
      s(j, i) = 1.0;
      out.push_back(s);
      cmat a = cmat::Zero(d, d);
      a(i, j) = cplx(0.0, -1.0);
      a(j, i) = cplx(0.0, 1.0);
      out.push_back(a);
    }
  }
  return out;
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) throw InvalidArgument("binary_entropy: x outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

}  // namespace qrtkit
