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

#include "qrtkit/divergence.hpp"

#include <cmath>

#include "qrtkit/optimize.hpp"

namespace qrtkit {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Mass of rho outside the support of sigma, and sigma's support data.
struct SupportSplit {
  Eigh e;
  double cut = 0.0;
  double escaped_mass = 0.0;
};

SupportSplit support_split(const cmat& rho, const cmat& sigma, double support_tol) {
  SupportSplit s;
  s.e = eigh(sigma);
  const double top = s.e.eigenvalues.cwiseAbs().maxCoeff();
  s.cut = support_tol * std::max(top, 1e-300);
  for (int j = 0; j < s.e.eigenvalues.size(); ++j) {
    if (s.e.eigenvalues[j] <= s.cut) {
      cvec v = s.e.eigenvectors.col(j);
      s.escaped_mass += std::max(0.0, (v.adjoint() * rho * v)(0, 0).real());
    }
  }
  return s;
}

bool support_violated(double escaped_mass, const cmat& rho) {
  const double scale = std::max(1.0, std::abs(rho.trace().real()));
  return escaped_mass > 1e-9 * scale;
}

}  // namespace

double entropy(const cmat& rho, double support_tol) {
  Eigh e = eigh(rho);
  const double cut = support_tol * std::max(e.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  double s = 0.0;
  for (int i = 0; i < e.eigenvalues.size(); ++i) {
    double w = e.eigenvalues[i];
    if (w > cut) s -= w * std::log2(w);
  }
  return s;
}

DivergenceValue rel_entropy(const cmat& rho, const cmat& sigma, double support_tol) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimMismatch("rel_entropy");
  SupportSplit s = support_split(rho, sigma, support_tol);
  if (support_violated(s.escaped_mass, rho)) return {std::numeric_limits<double>::infinity(), false};
  double val = -entropy(rho, support_tol);
  for (int j = 0; j < s.e.eigenvalues.size(); ++j) {
    double mu = s.e.eigenvalues[j];
    if (mu <= s.cut) continue;
    cvec v = s.e.eigenvectors.col(j);
    double w = (v.adjoint() * rho * v)(0, 0).real();
    val -= w * std::log2(mu);
  }
  return {val, true};
}

DivergenceValue dmax(const cmat& rho, const cmat& sigma, double support_tol) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimMismatch("dmax");
  SupportSplit s = support_split(rho, sigma, support_tol);
  if (support_violated(s.escaped_mass, rho)) return {std::numeric_limits<double>::infinity(), false};
  cmat isq = mpow_on_support(sigma, -0.5, support_tol);
  double t = op_norm(isq * rho * isq);
  if (t <= 0.0) return {-std::numeric_limits<double>::infinity(), true};
  return {std::log2(t), true};
}

DivergenceValue petz_renyi(double alpha, const cmat& rho, const cmat& sigma, double support_tol) {
  if (!((alpha > 0.0 && alpha < 1.0) || (alpha > 1.0 && alpha <= 2.0))) {
    throw InvalidArgument("petz_renyi: alpha must lie in (0,1) u (1,2]");
  }
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimMismatch("petz_renyi");
  if (alpha > 1.0) {
    SupportSplit s = support_split(rho, sigma, support_tol);
    if (support_violated(s.escaped_mass, rho)) {
      return {std::numeric_limits<double>::infinity(), false};
    }
  }
  cmat ra = mpow_on_support(rho, alpha, support_tol);
  cmat sb = mpow_on_support(sigma, 1.0 - alpha, support_tol);
  double q = (ra * sb).trace().real();
  if (q <= 0.0) return {std::numeric_limits<double>::infinity(), false};
  return {std::log2(q) / (alpha - 1.0), true};
}

double trace_distance(const cmat& rho, const cmat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimMismatch("trace_distance");
  return 0.5 * trace_norm(rho - sigma);
}

cmat dln_adjoint(const cmat& sigma, const cmat& rho) {
  Eigh e = eigh(sigma);
  const int d = static_cast<int>(sigma.rows());
  cmat rt = e.eigenvectors.adjoint() * rho * e.eigenvectors;
  cmat out(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double a = e.eigenvalues[i], b = e.eigenvalues[j];
      double k;
      if (std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b))) {
        k = 2.0 / (a + b);
      } else {
        k = (std::log(a) - std::log(b)) / (a - b);
      }
      out(i, j) = rt(i, j) * k;
    }
  }
  return e.eigenvectors * out * e.eigenvectors.adjoint();
}

namespace {

// Euclidean gradient of phi -> d(N(phi), M(phi)) for RelEntropy, as a matrix
// G with df = Tr[G dphi]; both maps are TP so constant multiples of I are
// irrelevant on the sphere.
cmat relent_phi_gradient(const ChoiChannel& n, const ChoiChannel& m, const cmat& phi) {
  cmat rho = qrtkit::apply(n, phi);
  cmat sig = qrtkit::apply(m, phi);
  const int d = static_cast<int>(rho.rows());
  const cmat eye = cmat::Identity(d, d);
  cmat rho_s = hermitize(rho) + 1e-12 * eye;
  cmat sig_s = hermitize(sig) + 1e-12 * eye;
  auto safe_log2 = [](double x) { return std::log2(std::max(x, 1e-18)); };
  cmat log_term = matrix_fn_on_support(rho_s, safe_log2, 0.0) -
                  matrix_fn_on_support(sig_s, safe_log2, 0.0);
  cmat g = apply_adjoint(n, log_term) - apply_adjoint(m, dln_adjoint(sig_s, rho)) / kLn2;
  return hermitize(g);
}

}  // namespace

ChannelDivergenceResult channel_divergence(const ChoiChannel& n, const ChoiChannel& m,
                                           DivKind kind, const AscentOpts& opts) {
  if (n.dim_in != m.dim_in || n.dim_out != m.dim_out) throw DimMismatch("channel_divergence");
  const int dr = n.dim_in;
  const int dim = dr * n.dim_in;

  bool hit_infinite = false;
  SphereObjective obj;
  obj.f = [&](const cvec& psi) {
    cmat phi = psi * psi.adjoint();
    cmat rho = qrtkit::apply(n, phi);
    cmat sig = qrtkit::apply(m, phi);
    switch (kind) {
      case DivKind::RelEntropy: {
        DivergenceValue v = rel_entropy(rho, sig);
        if (!v.support_ok) {
          hit_infinite = true;
          return 1e6;  // finite surrogate keeps the ascent usable
        }
        return v.value;
      }
      case DivKind::DMax: {
        DivergenceValue v = dmax(rho, sig);
        if (!v.support_ok) {
          hit_infinite = true;
          return 1e6;
        }
        return v.value;
      }
      case DivKind::TraceDistance:
        return trace_distance(rho, sig);
    }
    return 0.0;
  };
  if (kind == DivKind::RelEntropy) {
    obj.grad = [&](const cvec& psi) {
      cmat g = relent_phi_gradient(n, m, psi * psi.adjoint());
      return cvec(g * psi);
    };
  }

  SphereAscentResult r = maximize_on_sphere(dim, obj, opts);
  ChannelDivergenceResult out;
  out.value = r.value;
  out.support_ok = !hit_infinite || r.value < 1e5;
  if (hit_infinite && r.value >= 1e5) out.value = std::numeric_limits<double>::infinity();
  out.maximizer = r.argmax;
  out.converged = r.converged;
  out.iterations = r.iterations;
  return out;
}

DivergenceValue dmax_channels(const ChoiChannel& n, const ChoiChannel& m) {
  if (n.dim_in != m.dim_in || n.dim_out != m.dim_out) throw DimMismatch("dmax_channels");
  return dmax(n.choi, m.choi);
}

}  // namespace qrtkit
