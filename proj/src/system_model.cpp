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

#include "hris/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hris {

Index HrisConfig::n_active() const {
  Index count = 0;
  for (Index i = 0; i < gamma.size(); ++i) count += gamma(i) > 0.5 ? 1 : 0;
  return count;
}

HrisConfig HrisConfig::passive(Index n) {
  HrisConfig out;
  out.phase_idx.assign(static_cast<std::size_t>(n), 0);
  out.gamma = RVector::Zero(n);
  out.mu = 1.0;
  return out;
}

RMatrix AntennaSelection::matrix(Index n_r) const {
  RMatrix a = RMatrix::Zero(static_cast<Index>(selected.size()), n_r);
  for (std::size_t i = 0; i < selected.size(); ++i) a(static_cast<Index>(i), selected[i]) = 1.0;
  return a;
}

bool AntennaSelection::valid(Index n_r, Index l) const {
  if (static_cast<Index>(selected.size()) != l) return false;
  std::vector<Index> sorted = selected;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  return sorted.empty() || (sorted.front() >= 0 && sorted.back() < n_r);
}

AntennaSelection AntennaSelection::first(Index l) {
  AntennaSelection out;
  for (Index i = 0; i < l; ++i) out.selected.push_back(i);
  return out;
}

CVector phase_alphabet(int b_bits) {
  const Index m = Index{1} << b_bits;
  CVector out(m);
  for (Index k = 0; k < m; ++k) {
    out(k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m));
  }
  return out;
}

CVector phases_from_indices(const std::vector<int>& idx, int b_bits) {
  const CVector alphabet = phase_alphabet(b_bits);
  CVector out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= alphabet.size()) throw ContractViolation("phase index out of range");
    out(static_cast<Index>(i)) = alphabet(idx[i]);
  }
  return out;
}

RVector element_gains(const RVector& gamma, double mu) {
  return ((mu - 1.0) * gamma.array() + 1.0).matrix();
}

DesignPoint make_design(const AntennaSelection& antenna, const HrisConfig& hris, const SystemParams& params) {
  DesignPoint x;
  x.select = antenna.matrix(params.n_r);
  x.theta = phases_from_indices(hris.phase_idx, params.b_bits);
  x.omega = element_gains(hris.gamma, hris.mu);
  x.omega_act = hris.mu * hris.gamma;
  return x;
}

namespace {

DesignPoint hris_only_design(const HrisConfig& hris, const SystemParams& params) {
  DesignPoint x;
  x.theta = phases_from_indices(hris.phase_idx, params.b_bits);
  x.omega = element_gains(hris.gamma, hris.mu);
  x.omega_act = hris.mu * hris.gamma;
  return x;
}

}  // namespace

CVector effective_channel(const ChannelSet& ch, const DesignPoint& x, const SystemParams& params) {
  const CVector reflect = (x.omega.cast<Complex>().array() * x.theta.array() * ch.h_r.array()).matrix();
  return ch.h_d + params.eps_b() * (ch.g.adjoint() * reflect);
}

CVector effective_channel(const ChannelSet& ch, const HrisConfig& hris, const SystemParams& params) {
  return effective_channel(ch, hris_only_design(hris, params), params);
}

CMatrix build_omega(const ChannelSet& ch, const DesignPoint& x, const SystemParams& params) {
  const double eps = params.eps_b();
  const CVector h = effective_channel(ch, x, params);
  // Lambda Phi dtilde(h_r h_r^H) (Phi Lambda)^H is diagonal: |omega theta h_r|^2.
  const RVector scatter = (x.omega.array().square() * x.theta.array().abs2() * ch.h_r.array().abs2()).matrix();
  const RVector amp_noise = x.omega_act.array().square().matrix();
  const CMatrix gh = ch.g.adjoint();
  CMatrix omega = params.p_tilde() * (h * h.adjoint());
  omega.noalias() += (params.p_tilde() * (1.0 - eps * eps)) * (gh * scatter.cast<Complex>().asDiagonal() * ch.g);
  omega.noalias() += params.sigma_a2 * (gh * amp_noise.cast<Complex>().asDiagonal() * ch.g);
  return omega;
}

CMatrix build_omega(const ChannelSet& ch, const HrisConfig& hris, const SystemParams& params) {
  return build_omega(ch, hris_only_design(hris, params), params);
}

CMatrix mse_quadratic(const RMatrix& select, const CMatrix& omega, const SystemParams& params) {
  const CMatrix a = select.cast<Complex>();
  const CMatrix aoa = a * omega * a.adjoint();
  CMatrix q = aoa;
  q.diagonal() += params.k_r * params.k_r * aoa.diagonal();
  q.diagonal().array() += params.sigma_b2_tilde();
  return q;
}

double mse_design(const CVector& w, const DesignPoint& x, const ChannelSet& ch, const SystemParams& params) {
  const CMatrix omega = build_omega(ch, x, params);
  const CMatrix q = mse_quadratic(x.select, omega, params);
  const CVector ah = x.select.cast<Complex>() * effective_channel(ch, x, params);
  const double quad = w.dot(q * w).real();
  return quad - 2.0 * std::sqrt(params.p) * w.dot(ah).real() + 1.0;
}

double mse_analytic(const CVector& w, const AntennaSelection& antenna, const ChannelSet& ch, const HrisConfig& hris,
                    const SystemParams& params) {
  return mse_design(w, make_design(antenna, hris, params), ch, params);
}

RVector element_loads(const ChannelSet& ch, const SystemParams& params) {
  return (params.p_tilde() * ch.h_r.array().abs2() + params.sigma_a2).matrix();
}

double hris_power(const HrisConfig& hris, const ChannelSet& ch, const SystemParams& params) {
  const RVector loads = element_loads(ch, params);
  double total = 0.0;
  for (Index i = 0; i < hris.gamma.size(); ++i) {
    if (hris.gamma(i) > 0.5) total += loads(i);
  }
  return hris.mu * hris.mu * total;
}

Solution evaluate_solution(AntennaSelection antenna, HrisConfig hris, CVector w, const ChannelSet& ch,
                           const SystemParams& params) {
  Solution s;
  s.mse = mse_analytic(w, antenna, ch, hris, params);
  s.hris_power = hris_power(hris, ch, params);
  s.antenna = std::move(antenna);
  s.hris = std::move(hris);
  s.w = std::move(w);
  return s;
}

double simulate_empirical_mse(const Solution& solution, const ChannelSet& ch, const SystemParams& params,
                              std::int64_t n_samples, const CounterRng& rng) {
  if (n_samples < 1) throw ContractViolation("simulate_empirical_mse: n_samples must be >= 1");
  const Index n = ch.n();
  const Index l = static_cast<Index>(solution.antenna.selected.size());
  const DesignPoint x = make_design(solution.antenna, solution.hris, params);
  const CMatrix a = x.select.cast<Complex>();
  const CVector& w = solution.w;

  // s_hat = w^H A h~ (sqrt(p) s + kt) + w^H A G^H B Lambda Phi~ n_a + w^H n_b + w^H kr,
  // with h~ = h_d + G^H Lambda Phi PhiBar h_r. Fold w^H A G^H into one row.
  const CVector wag = (a * ch.g.adjoint()).adjoint() * w;  // (w^H A G^H)^H
  const Complex w_hd = w.dot(a * ch.h_d);
  CVector refl(n), noise_gain(n);
  for (Index i = 0; i < n; ++i) {
    refl(i) = std::conj(wag(i)) * x.omega(i) * x.theta(i) * ch.h_r(i);
    noise_gain(i) = std::conj(wag(i)) * x.omega_act(i) * x.theta(i);
  }
  // Receive distortion variance follows the average received power per antenna.
  const CMatrix omega = build_omega(ch, x, params);
  RVector kr_var = (a * omega * a.adjoint()).diagonal().real();
  kr_var = (kr_var.array() + params.sigma_b2) * params.k_r * params.k_r;

  const double half_width = params.ideal_phase ? 0.0 : std::numbers::pi / std::ldexp(1.0, params.b_bits);
  const double sqrt_p = std::sqrt(params.p);
  const double kt_var = params.k_t * params.k_t * params.p;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  constexpr std::int64_t kBlock = 1 << 16;
  const std::int64_t n_blocks = (n_samples + kBlock - 1) / kBlock;
  double total = 0.0;
  for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
    CounterRng r = rng.substream(static_cast<std::uint64_t>(blk));
    const std::int64_t count = std::min(kBlock, n_samples - blk * kBlock);
    double block_sum = 0.0;
    for (std::int64_t t = 0; t < count; ++t) {
      const std::uint64_t bits = r();
      const Complex s((bits & 1u) ? inv_sqrt2 : -inv_sqrt2, (bits & 2u) ? inv_sqrt2 : -inv_sqrt2);
      const Complex tx = sqrt_p * s + r.complex_normal(kt_var);
      Complex gain = w_hd;
      Complex amp = 0.0;
      for (Index i = 0; i < n; ++i) {
        const Complex e = std::polar(1.0, r.uniform(-half_width, half_width));
        gain += refl(i) * e;
        amp += noise_gain(i) * e * r.complex_normal(params.sigma_a2);
      }
      Complex rx_noise = 0.0;
      for (Index j = 0; j < l; ++j) {
        rx_noise += std::conj(w(j)) * (r.complex_normal(params.sigma_b2) + r.complex_normal(kr_var(j)));
      }
      block_sum += std::norm(gain * tx + amp + rx_noise - s);
    }
    total += block_sum;
  }
  return total / static_cast<double>(n_samples);
}

ExpectationCheck phase_noise_expectation_check(const CMatrix& a, int b_bits, std::int64_t n_draws,
                                               const CounterRng& rng) {
  if (a.rows() != a.cols()) throw ContractViolation("phase_noise_expectation_check: matrix must be square");
  if (n_draws < 1) throw ContractViolation("phase_noise_expectation_check: n_draws must be >= 1");
  const Index n = a.rows();
  const double half_width = std::numbers::pi / std::ldexp(1.0, b_bits);
  CMatrix acc = CMatrix::Zero(n, n);
  CVector e(n);
  CounterRng r = rng;
  for (std::int64_t t = 0; t < n_draws; ++t) {
    for (Index i = 0; i < n; ++i) e(i) = std::polar(1.0, r.uniform(-half_width, half_width));
    acc.noalias() += e * e.adjoint();
  }
  ExpectationCheck out;
  out.empirical = a.cwiseProduct(acc / static_cast<double>(n_draws));
  const double eps = epsilon_b(b_bits);
  out.analytic = eps * eps * a + (1.0 - eps * eps) * dtilde(a);
  out.analytic.diagonal() = a.diagonal();
  return out;
}

}  // namespace hris
