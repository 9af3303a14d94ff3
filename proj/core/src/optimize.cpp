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

#include "qrtkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "qrtkit/linalg.hpp"
#include "qrtkit/sdp.hpp"

namespace qrtkit {

namespace {

cvec tangent_project(const cvec& psi, const cvec& g) {
  return g - psi * psi.dot(g);
}

cvec numeric_wirtinger_grad(const cvec& psi, const std::function<double(const cvec&)>& f,
                            double h) {
  const int n = static_cast<int>(psi.size());
  cvec g(n);
  for (int j = 0; j < n; ++j) {
    cvec p = psi;
    p(j) = psi(j) + h;
    const double fr_p = f(p.normalized());
    p(j) = psi(j) - h;
    const double fr_m = f(p.normalized());
    p(j) = psi(j) + cplx(0.0, h);
    const double fi_p = f(p.normalized());
    p(j) = psi(j) - cplx(0.0, h);
    const double fi_m = f(p.normalized());
    const double dre = (fr_p - fr_m) / (2.0 * h);
    const double dim = (fi_p - fi_m) / (2.0 * h);
    g(j) = 0.5 * cplx(dre, dim);
  }
  return g;
}

struct AscentOutcome {
  cvec psi;
  double value = 0.0;
  int iterations = 0;
};

AscentOutcome ascend_once(cvec psi, const SphereObjective& obj, const SphereOpts& opts) {
  double fval = obj.f(psi);
  double eta = 0.2;
  int it = 0;
  int stall = 0;
  for (; it < opts.max_iters; ++it) {
    cvec g = obj.grad ? obj.grad(psi) : numeric_wirtinger_grad(psi, obj.f, opts.fd_step);
    cvec gt = tangent_project(psi, g);
    const double gnorm2 = gt.squaredNorm();
    if (std::sqrt(gnorm2) < 1e-9 * (1.0 + std::abs(fval))) break;

    bool accepted = false;
    while (eta > 1e-13) {
      cvec cand = (psi + eta * gt).normalized();
      const double fc = obj.f(cand);
      if (fc > fval + 1e-4 * eta * gnorm2) {
        if (fc - fval < 0.1 * opts.tol) ++stall; else stall = 0;
        psi = cand;
        fval = fc;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted || stall >= 3) break;
    eta = std::min(1.0, eta * 1.25);
  }
  return {psi, fval, it};
}

}  // namespace

SphereAscentResult maximize_on_sphere(int dim, const SphereObjective& obj,
                                      const SphereOpts& opts, const std::vector<cvec>& seeds) {
  SphereAscentResult out;
  const int total = std::max<int>(opts.restarts, static_cast<int>(seeds.size()));
  for (int r = 0; r < total; ++r) {
    cvec start;
    if (r < static_cast<int>(seeds.size())) {
      start = seeds[r].normalized();
    } else {
      Rng rng = seeded(opts.seed, static_cast<uint64_t>(r));
      start = random_pure(dim, rng);
    }
    AscentOutcome o = ascend_once(start, obj, opts);
    out.iterations += o.iterations;
    out.restart_values.push_back(o.value);
    if (out.argmax.size() == 0 || o.value > out.value) {
      out.value = o.value;
      out.argmax = o.psi;
    }
  }
  std::sort(out.restart_values.begin(), out.restart_values.end(), std::greater<double>());
  const int k = std::min<int>(3, static_cast<int>(out.restart_values.size()));
  out.converged = k > 0 && (out.restart_values[0] - out.restart_values[k - 1]) <= opts.tol;
  return out;
}

namespace {

// Orthonormal real coordinates of a Hermitian matrix: diagonal entries, then
// sqrt(2) * (Re, Im) of the strict upper triangle.
rvec herm_coords(const cmat& h) {
  const int d = static_cast<int>(h.rows());
  rvec c(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) c(k++) = h(i, i).real();
  const double s2 = std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      c(k++) = s2 * h(i, j).real();
      c(k++) = s2 * h(i, j).imag();
    }
  return c;
}

cmat herm_from_coords(const rvec& c, int d) {
  cmat h = cmat::Zero(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) h(i, i) = c(k++);
  const double is2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double re = c(k++) * is2;
      const double im = c(k++) * is2;
      h(i, j) = cplx(re, im);
      h(j, i) = cplx(re, -im);
    }
  return h;
}

double logdet_llt(const cmat& x, bool* ok) {
  Eigen::LLT<cmat> llt(x);
  if (llt.info() != Eigen::Success) {
    *ok = false;
    return 0.0;
  }
  *ok = true;
  double v = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < x.rows(); ++i) v += std::log(std::real(l(i, i)));
  return 2.0 * v;
}

}  // namespace

AffineSlice AffineSlice::build(const ConstraintSystem& set) {
  AffineSlice s;
  s.dim = set.dim;
  const int d = set.dim;
  const int m = static_cast<int>(set.ops.size());
  rmat k(m, d * d);
  for (int i = 0; i < m; ++i) k.row(i) = herm_coords(set.ops[i]).transpose();
  s.k_rows_ = k;
  s.k_rhs_ = Eigen::Map<const rvec>(set.rhs.data(), m);

  Eigen::JacobiSVD<rmat> svd(k, Eigen::ComputeFullV | Eigen::ComputeThinU);
  const double cut = 1e-12 * (svd.singularValues().size() ? svd.singularValues()(0) : 1.0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cut) ++rank;

  // K^T (K K^T)^{-1} via the thin SVD, restricted to the numerical row space.
  rmat u = svd.matrixU().leftCols(rank);
  rmat v = svd.matrixV().leftCols(rank);
  rvec sinv(rank);
  for (int i = 0; i < rank; ++i) sinv(i) = 1.0 / svd.singularValues()(i);
  s.pinv_factor_ = v * sinv.asDiagonal() * u.transpose();

  for (int i = rank; i < d * d; ++i)
    s.tangent.push_back(herm_from_coords(svd.matrixV().col(i), d));
  return s;
}

cmat AffineSlice::project(const cmat& x) const {
  rvec c = herm_coords(hermitize(x));
  rvec resid = k_rows_ * c - k_rhs_;
  rvec corrected = c - pinv_factor_ * resid;
  return herm_from_coords(corrected, dim);
}

namespace {

// Limited-memory BFGS minimization of f(x0 + sum t_i B_i) + mu * barrier over
// the strictly feasible region, in tangent coordinates t.
struct BarrierState {
  const AffineSlice* slice;
  cmat base;
  const std::function<double(const cmat&)>* f;
  const std::function<cmat(const cmat&)>* grad;
  double mu;

  cmat point(const rvec& t) const {
    cmat x = base;
    for (int i = 0; i < t.size(); ++i) x += t(i) * slice->tangent[i];
    return x;
  }

  bool eval(const rvec& t, double* val, rvec* g) const {
    cmat x = point(t);
    bool ok = false;
    const double ld = logdet_llt(x, &ok);
    if (!ok) return false;
    const double fv = (*f)(x);
    if (!std::isfinite(fv)) return false;
    *val = fv - mu * ld;
    if (g) {
      cmat gf = (*grad)(x);
      Eigen::LLT<cmat> llt(x);
      cmat xinv = llt.solve(cmat::Identity(x.rows(), x.cols()));
      cmat gtot = gf - mu * xinv;
      g->resize(static_cast<int>(slice->tangent.size()));
      for (size_t i = 0; i < slice->tangent.size(); ++i)
        (*g)(static_cast<int>(i)) = hs_inner(slice->tangent[i], gtot);
    }
    return true;
  }
};

rvec lbfgs_direction(const std::deque<std::pair<rvec, rvec>>& mem, const rvec& g) {
  rvec q = g;
  std::vector<double> alpha(mem.size());
  std::vector<double> rho(mem.size());
  for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
    rho[i] = 1.0 / mem[i].second.dot(mem[i].first);
    alpha[i] = rho[i] * mem[i].first.dot(q);
    q -= alpha[i] * mem[i].second;
  }
  if (!mem.empty()) {
    const auto& [s, y] = mem.back();
    q *= s.dot(y) / y.dot(y);
  }
  for (size_t i = 0; i < mem.size(); ++i) {
    const double beta = rho[i] * mem[i].second.dot(q);
    q += (alpha[i] - beta) * mem[i].first;
  }
  return -q;
}

rvec barrier_minimize(const BarrierState& st, rvec t, int max_iters) {
  double fval;
  rvec g;
  if (!st.eval(t, &fval, &g)) return t;
  std::deque<std::pair<rvec, rvec>> mem;
  for (int it = 0; it < max_iters; ++it) {
    if (g.norm() < 1e-9 * (1.0 + std::abs(fval))) break;
    rvec p = lbfgs_direction(mem, g);
    if (p.dot(g) > -1e-14 * p.norm() * g.norm()) {
      p = -g;
      mem.clear();
    }
    double step = 1.0;
    double fnew;
    rvec gnew;
    bool moved = false;
    while (step > 1e-14) {
      rvec tc = t + step * p;
      if (st.eval(tc, &fnew, &gnew) && fnew < fval + 1e-4 * step * p.dot(g)) {
        rvec s = tc - t;
        rvec y = gnew - g;
        if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
          mem.emplace_back(s, y);
          if (mem.size() > 12) mem.pop_front();
        }
        t = tc;
        fval = fnew;
        g = gnew;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return t;
}

}  // namespace

ConvexMinResult minimize_convex_over_set(const ConstraintSystem& set,
                                         const std::function<double(const cmat&)>& f,
                                         const std::function<cmat(const cmat&)>& grad,
                                         const cmat& x0, const ConvexMinOpts& opts) {
  AffineSlice slice = AffineSlice::build(set);
  cmat x = slice.project(x0);
  if (min_eig(x) <= 0.0) x = slice.project(hermitize(x) + 1e-10 * cmat::Identity(set.dim, set.dim));

  BarrierState st{&slice, x, &f, &grad, opts.mu_init};
  rvec t = rvec::Zero(static_cast<int>(slice.tangent.size()));
  for (double mu = opts.mu_init; mu >= opts.mu_final * 0.99; mu *= 0.1) {
    st.mu = mu;
    t = barrier_minimize(st, t, opts.polish_iters);
  }
  x = st.point(t);

  ConvexMinResult out;
  out.x = x;
  out.value = f(x);
  for (int it = 0; it < opts.max_iters; ++it) {
    out.iterations = it + 1;
    cmat g = grad(x);
    LinearOptResult lin = linear_opt_over_set(g, set, /*maximize=*/false);
    out.gap = hs_inner(g, x) - lin.value;
    if (out.gap <= opts.gap_tol) {
      out.converged = true;
      break;
    }
    // Vertex step with golden-section line search, then a short re-polish.
    const cmat v = lin.argopt;
    const cmat dir = v - x;
    auto h = [&](double s) {
      const double fv = f(hermitize(x + s * dir));
      return std::isfinite(fv) ? fv : 1e100;
    };
    double a = 0.0, b = 1.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = h(c1), f2 = h(c2);
    for (int ls = 0; ls < 60; ++ls) {
      if (f1 < f2) {
        b = c2; c2 = c1; f2 = f1;
        c1 = b - gr * (b - a); f1 = h(c1);
      } else {
        a = c1; c1 = c2; f1 = f2;
        c2 = a + gr * (b - a); f2 = h(c2);
      }
    }
    const double s_opt = 0.5 * (a + b);
    cmat stepped = hermitize(x + s_opt * dir);
    if (h(s_opt) >= out.value - 1e-15) {
      // No descent along the vertex direction; re-polish from x at small mu.
      st.base = x;
      t = rvec::Zero(static_cast<int>(slice.tangent.size()));
      st.mu = opts.mu_final;
      t = barrier_minimize(st, t, opts.polish_iters);
      cmat xp = st.point(t);
      if (f(xp) < out.value) {
        x = xp;
        out.value = f(x);
        out.x = x;
        continue;
      }
      break;
    }
    x = stepped;
    st.base = x;
    t = rvec::Zero(static_cast<int>(slice.tangent.size()));
    st.mu = std::max(opts.mu_final, 1e-6);
    t = barrier_minimize(st, t, opts.polish_iters / 4);
    st.mu = opts.mu_final;
    t = barrier_minimize(st, t, opts.polish_iters / 4);
    cmat xp = st.point(t);
    double fp = f(xp);
    if (std::isfinite(fp) && fp < f(x)) x = xp;
    out.value = f(x);
    out.x = x;
  }
  if (!out.converged) {
    cmat g = grad(out.x);
    LinearOptResult lin = linear_opt_over_set(g, set, false);
    out.gap = hs_inner(g, out.x) - lin.value;
    out.converged = out.gap <= opts.gap_tol;
  }
  return out;
}

}  // namespace qrtkit
