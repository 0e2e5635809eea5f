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

#ifndef HRIS_SUBSOLVERS_HPP
#define HRIS_SUBSOLVERS_HPP

#include <vector>

#include "hris/channel.hpp"
#include "hris/numerics.hpp"
#include "hris/params.hpp"
#include "hris/system_model.hpp"

namespace hris {

/// Closed-form block updates and the coefficient builders behind the three
/// selection QPs. Every builder is written so that its quadratic, evaluated
/// with the other blocks held fixed, reproduces the MSE up to a constant.

/// w* = sqrt(p) Q^{-1} A h.
CVector mmse_receiver(const RMatrix& select, const CMatrix& omega, const CVector& h, const SystemParams& params);
CVector mmse_receiver(const AntennaSelection& antenna, const CMatrix& omega, const CVector& h,
                      const SystemParams& params);

/// X = A^H (w w^H + k_r^2 dtilde(w w^H)) A, N_R x N_R.
CMatrix build_x(const CVector& w, const RMatrix& select, double k_r);

/// Real diagonal of G X G^H.
RVector gxg_diagonal(const ChannelSet& ch, const CMatrix& x_mat);

struct KTerms {
  CMatrix k_mat;  // N x N, Hermitian PSD
  CVector k_vec;  // N
};

/// K = (Phi^H G X G^H Phi) o (p~ eps^2 h_r h_r^H + p~ (1 - eps^2) dtilde(h_r h_r^H))^T
/// k = p~ eps diag(Phi^H G X h_d h_r^H) - sqrt(p) eps diag(Phi^H G A^H w h_r^H)
KTerms build_k(const ChannelSet& ch, const CVector& theta, const CMatrix& x_mat, const CVector& w,
               const RMatrix& select, const SystemParams& params);
KTerms build_k(const ChannelSet& ch, const std::vector<int>& phase_idx, const SystemParams& params, const CVector& w,
               const AntennaSelection& antenna);

struct AmpCoeffs {
  double a = 0.0;
  double b = 0.0;
  double mu_ref = 0.0;
};

/// Coefficients of a mu^2 + 2 b mu and the budget-limited ceiling mu_ref.
/// Throws ContractViolation when gamma is identically zero.
AmpCoeffs amp_coeffs(const RVector& gamma, const KTerms& k, const RVector& gxg_diag, const ChannelSet& ch,
                     const SystemParams& params);

/// Largest mu with mu^2 gamma^T diag(loads) gamma <= P_HRIS.
double mu_ceiling(const RVector& gamma, const ChannelSet& ch, const SystemParams& params);

/// Minimizer of a mu^2 + 2 b mu over [mu_min, mu_ref].
double optimal_mu(double a, double b, double mu_min, double mu_ref);

/// Smallest power any single active element can draw: mu_min^2 (p~ min|h_r|^2 + sigma_a^2).
double p_min(const ChannelSet& ch, const SystemParams& params);

/// Elements that fit the budget on their own at mu_min. The rest can never be
/// active in a feasible configuration.
std::vector<Index> active_eligible(const ChannelSet& ch, const SystemParams& params);

/// argmax_{||2u-1||^2 <= d} (2x-1)^T (2u-1) = sqrt(d) (x - 1/2) / ||2x - 1|| + 1/2.
/// Returns `previous` when ||2x - 1|| < 1e-12 (every ball point is then optimal).
RVector aux_update(const RVector& x, const RVector& previous);

struct ModeQp {
  CMatrix e1;       // mu^2 sigma_a^2 dtilde(G X G^H) + (mu-1)^2 K
  RVector e2_diag;  // mu^2 (p~ |h_r|^2 + sigma_a^2)
  RVector e;        // Re{2 (mu-1) (K 1 + k)}
};

ModeQp build_mode_qp(double mu, const KTerms& k, const RVector& gxg_diag, const ChannelSet& ch,
                     const SystemParams& params);

struct AntennaQp {
  CMatrix m_mat;  // (w w^H)^T (x) Omega + k_r^2 dtilde(w w^H) (x) Omega
  CVector m_vec;  // sqrt(p) vec(h w^H)
};

AntennaQp build_antenna_qp(const CVector& w, const CMatrix& omega, const CVector& h, const SystemParams& params);

struct PhaseQp {
  CMatrix n_mat;   // N x N
  CVector n_vec;   // N
  CMatrix nt_mat;  // N^T (x) theta_s theta_s^H
  CVector nt_vec;  // vec(theta_s n^H)
};

/// `omega` holds the reflected-path gains (mu - 1) gamma + 1.
PhaseQp build_phase_qp(const ChannelSet& ch, const RVector& omega, const CMatrix& x_mat, const CVector& w,
                       const RMatrix& select, const SystemParams& params);
PhaseQp build_phase_qp(const ChannelSet& ch, const HrisConfig& hris, const SystemParams& params, const CVector& w,
                       const AntennaSelection& antenna);

/// Per-iteration coefficient bundle consumed by the optimizer.
struct SubproblemCoeffs {
  CMatrix x_mat;
  KTerms k;
  RVector gxg_diag;
  AmpCoeffs amp;
  ModeQp mode;
  AntennaQp antenna;
  PhaseQp phase;
};

/// theta = Z theta_s for z = vec(Z^T) laid out as N blocks of 2^B.
CVector theta_from_z(const RVector& z, int b_bits);
/// A with a = vec(A^T) laid out as L blocks of N_R.
RMatrix select_from_a(const RVector& a, Index l, Index n_r);

}  // namespace hris

#endif  // HRIS_SUBSOLVERS_HPP
