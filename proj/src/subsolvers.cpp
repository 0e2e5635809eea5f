// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hris/subsolvers.hpp"

#include <algorithm>
#include <cmath>

namespace hris {

CVector mmse_receiver(const RMatrix& select, const CMatrix& omega, const CVector& h, const SystemParams& params) {
  const CMatrix q = mse_quadratic(select, omega, params);
  const CVector ah = select.cast<Complex>() * h;
  return hermitian_solve(q, std::sqrt(params.p) * ah);
}

CVector mmse_receiver(const AntennaSelection& antenna, const CMatrix& omega, const CVector& h,
                      const SystemParams& params) {
  return mmse_receiver(antenna.matrix(params.n_r), omega, h, params);
}

CMatrix build_x(const CVector& w, const RMatrix& select, double k_r) {
  CMatrix inner = w * w.adjoint();
  inner.diagonal() *= (1.0 + k_r * k_r);
  const CMatrix a = select.cast<Complex>();
  return a.adjoint() * inner * a;
}

RVector gxg_diagonal(const ChannelSet& ch, const CMatrix& x_mat) {
  return (ch.g * x_mat).cwiseProduct(ch.g.conjugate()).rowwise().sum().real();
}

namespace {

// p~ eps^2 h_r h_r^H + p~ (1 - eps^2) dtilde(h_r h_r^H)
CMatrix reflect_covariance(const ChannelSet& ch, const SystemParams& params) {
  const double eps = params.eps_b();
  CMatrix r = (params.p_tilde() * eps * eps) * (ch.h_r * ch.h_r.adjoint());
  r.diagonal() += (params.p_tilde() * (1.0 - eps * eps)) * ch.h_r.cwiseAbs2().cast<Complex>();
  return r;
}

// p~ eps conj(c) o (G X h_d) - sqrt(p) eps conj(c) o (G A^H w), with c the per-element
// coefficient multiplying the free variable (theta o h_r for k, omega o h_r for n).
CVector linear_terms(const ChannelSet& ch, const CVector& c, const CMatrix& x_mat, const CVector& w,
                     const RMatrix& select, const SystemParams& params) {
  const double eps = params.eps_b();
  const CVector gxh = ch.g * (x_mat * ch.h_d);
  const CVector gaw = ch.g * (select.transpose().cast<Complex>() * w);
  return (c.conjugate().array() * (params.p_tilde() * eps * gxh.array() - std::sqrt(params.p) * eps * gaw.array()))
      .matrix();
}

}  // namespace

KTerms build_k(const ChannelSet& ch, const CVector& theta, const CMatrix& x_mat, const CVector& w,
               const RMatrix& select, const SystemParams& params) {
  const CMatrix y = ch.g * x_mat * ch.g.adjoint();
  const CMatrix phy = theta.conjugate().asDiagonal() * y * theta.asDiagonal();
  KTerms out;
  out.k_mat = hadamard(phy, reflect_covariance(ch, params).transpose());
  const CVector c = theta.cwiseProduct(ch.h_r);
  out.k_vec = linear_terms(ch, c, x_mat, w, select, params);
  return out;
}

KTerms build_k(const ChannelSet& ch, const std::vector<int>& phase_idx, const SystemParams& params, const CVector& w,
               const AntennaSelection& antenna) {
  const RMatrix select = antenna.matrix(params.n_r);
  return build_k(ch, phases_from_indices(phase_idx, params.b_bits), build_x(w, select, params.k_r), w, select,
                 params);
}

double mu_ceiling(const RVector& gamma, const ChannelSet& ch, const SystemParams& params) {
  const double load = gamma.cwiseAbs2().dot(element_loads(ch, params));
  if (!(load > 0.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(params.p_hris / load);
}

AmpCoeffs amp_coeffs(const RVector& gamma, const KTerms& k, const RVector& gxg_diag, const ChannelSet& ch,
                     const SystemParams& params) {
  if (gamma.cwiseAbs().maxCoeff() <= 0.0) {
    throw ContractViolation("amp_coeffs: gamma must not be identically zero");
  }
  const CVector g = gamma.cast<Complex>();
  const double gkg = g.dot(k.k_mat * g).real();
  const RVector lin = (k.k_mat * CVector::Ones(gamma.size()) + k.k_vec).real();
  AmpCoeffs out;
  out.a = params.sigma_a2 * gamma.cwiseAbs2().dot(gxg_diag) + gkg;
  out.b = gamma.dot(lin) - gkg;
  out.mu_ref = mu_ceiling(gamma, ch, params);
  return out;
}

double optimal_mu(double a, double b, double mu_min, double mu_ref) {
  const double vertex = a > 0.0 ? -b / a : (b < 0.0 ? mu_ref : mu_min);
  if (vertex <= mu_min) return mu_min;
  if (vertex >= mu_ref) return mu_ref;
  return vertex;
}

double p_min(const ChannelSet& ch, const SystemParams& params) {
  const double h_min = ch.n() > 0 ? ch.h_r.cwiseAbs2().minCoeff() : 0.0;
  return params.mu_min * params.mu_min * (params.p_tilde() * h_min + params.sigma_a2);
}

std::vector<Index> active_eligible(const ChannelSet& ch, const SystemParams& params) {
  const RVector loads = element_loads(ch, params);
  std::vector<Index> out;
  for (Index i = 0; i < loads.size(); ++i) {
    if (params.mu_min * params.mu_min * loads(i) <= params.p_hris) out.push_back(i);
  }
  return out;
}

RVector aux_update(const RVector& x, const RVector& previous) {
  const RVector centered = x.array() - 0.5;
  const double norm = 2.0 * centered.norm();
  if (norm < 1e-12) return previous;
  const double d = static_cast<double>(x.size());
  return (std::sqrt(d) * centered / norm).array() + 0.5;
}

ModeQp build_mode_qp(double mu, const KTerms& k, const RVector& gxg_diag, const ChannelSet& ch,
                     const SystemParams& params) {
  ModeQp out;
  out.e1 = ((mu - 1.0) * (mu - 1.0)) * k.k_mat;
  out.e1.diagonal() += (mu * mu * params.sigma_a2) * gxg_diag.cast<Complex>();
  out.e2_diag = mu * mu * element_loads(ch, params);
  out.e = (2.0 * (mu - 1.0) * (k.k_mat * CVector::Ones(k.k_vec.size()) + k.k_vec)).real();
  return out;
}

AntennaQp build_antenna_qp(const CVector& w, const CMatrix& omega, const CVector& h, const SystemParams& params) {
  const CMatrix wwh = w * w.adjoint();
  CMatrix left = wwh.transpose();
  left.diagonal() += params.k_r * params.k_r * wwh.diagonal();
  AntennaQp out;
  out.m_mat = kron(left, omega);
  out.m_vec = std::sqrt(params.p) * vec(h * w.adjoint());
  return out;
}

PhaseQp build_phase_qp(const ChannelSet& ch, const RVector& omega, const CMatrix& x_mat, const CVector& w,
                       const RMatrix& select, const SystemParams& params) {
  const CMatrix y = ch.g * x_mat * ch.g.adjoint();
  const CMatrix lyl = omega.asDiagonal() * y * omega.asDiagonal();
  PhaseQp out;
  // The reflect covariance enters transposed, as in K; see build_k.
  out.n_mat = hadamard(lyl, reflect_covariance(ch, params).transpose());
  const CVector c = omega.cast<Complex>().cwiseProduct(ch.h_r);
  out.n_vec = linear_terms(ch, c, x_mat, w, select, params);
  const CVector ts = phase_alphabet(params.b_bits);
  out.nt_mat = kron(out.n_mat.transpose(), ts * ts.adjoint());
  out.nt_vec = vec(ts * out.n_vec.adjoint());
  return out;
}

PhaseQp build_phase_qp(const ChannelSet& ch, const HrisConfig& hris, const SystemParams& params, const CVector& w,
                       const AntennaSelection& antenna) {
  const RMatrix select = antenna.matrix(params.n_r);
  return build_phase_qp(ch, element_gains(hris.gamma, hris.mu), build_x(w, select, params.k_r), w, select, params);
}

CVector theta_from_z(const RVector& z, int b_bits) {
  const CVector ts = phase_alphabet(b_bits);
  const Index m = ts.size();
  if (z.size() % m != 0) throw ContractViolation("theta_from_z: length is not a multiple of 2^B");
  const Index n = z.size() / m;
  CVector theta(n);
  for (Index i = 0; i < n; ++i) theta(i) = (z.segment(i * m, m).cast<Complex>().array() * ts.array()).sum();
  return theta;
}

RMatrix select_from_a(const RVector& a, Index l, Index n_r) {
  if (a.size() != l * n_r) throw ContractViolation("select_from_a: length mismatch");
  RMatrix out(l, n_r);
  for (Index i = 0; i < l; ++i) out.row(i) = a.segment(i * n_r, n_r).transpose();
  return out;
}

}  // namespace hris
