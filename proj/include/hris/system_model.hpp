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

#ifndef HRIS_SYSTEM_MODEL_HPP
#define HRIS_SYSTEM_MODEL_HPP

#include <cstdint>
#include <vector>

#include "hris/channel.hpp"
#include "hris/numerics.hpp"
#include "hris/params.hpp"
#include "hris/rng.hpp"

namespace hris {

/// Binary HRIS configuration: per-element phase index, mode (1 = active) and
/// the amplification factor shared by all active elements.
struct HrisConfig {
  std::vector<int> phase_idx;
  RVector gamma;
  double mu = 1.0;

  Index n_active() const;
  static HrisConfig passive(Index n);
};

/// The L antennas wired to RF chains; entry i is the antenna feeding chain i.
struct AntennaSelection {
  std::vector<Index> selected;

  RMatrix matrix(Index n_r) const;
  bool valid(Index n_r, Index l) const;
  static AntennaSelection first(Index l);
};

struct Solution {
  AntennaSelection antenna;
  HrisConfig hris;
  CVector w;
  double mse = 1.0;
  double hris_power = 0.0;
};

/// Continuous design point. Covers binary configurations and the relaxed
/// iterates of the optimizer alike:
///   select    real L x N_R antenna selection matrix
///   theta     phase vector (unit modulus only at binary points)
///   omega     element gains on the reflected path, (mu - 1) gamma + 1
///   omega_act gains on the amplified-noise path, mu * gamma
struct DesignPoint {
  RMatrix select;
  CVector theta;
  RVector omega;
  RVector omega_act;
};

/// theta_s = [1, e^{j 2pi/2^B}, ..., e^{j 2pi (2^B - 1)/2^B}].
CVector phase_alphabet(int b_bits);
CVector phases_from_indices(const std::vector<int>& idx, int b_bits);
RVector element_gains(const RVector& gamma, double mu);

DesignPoint make_design(const AntennaSelection& antenna, const HrisConfig& hris, const SystemParams& params);

/// Mean effective channel h = h_d + eps_b G^H Lambda Phi h_r.
CVector effective_channel(const ChannelSet& ch, const HrisConfig& hris, const SystemParams& params);
CVector effective_channel(const ChannelSet& ch, const DesignPoint& x, const SystemParams& params);

/// Omega, such that E[y y^H] = A Omega A^H + sigma_b^2 I.
CMatrix build_omega(const ChannelSet& ch, const HrisConfig& hris, const SystemParams& params);
CMatrix build_omega(const ChannelSet& ch, const DesignPoint& x, const SystemParams& params);

/// Q = A Omega A^H + k_r^2 dtilde(A Omega A^H) + sigma_b~^2 I.
CMatrix mse_quadratic(const RMatrix& select, const CMatrix& omega, const SystemParams& params);

/// f = w^H Q w - 2 sqrt(p) Re{w^H A h} + 1.
double mse_analytic(const CVector& w, const AntennaSelection& antenna, const ChannelSet& ch, const HrisConfig& hris,
                    const SystemParams& params);
double mse_design(const CVector& w, const DesignPoint& x, const ChannelSet& ch, const SystemParams& params);

/// mu^2 sum_{gamma_i = 1} (p~ |h_r,i|^2 + sigma_a^2).
double hris_power(const HrisConfig& hris, const ChannelSet& ch, const SystemParams& params);

/// Per-element power load p~ |h_r,i|^2 + sigma_a^2 (per unit mu^2).
RVector element_loads(const ChannelSet& ch, const SystemParams& params);

/// Fills mse and hris_power from the configuration.
Solution evaluate_solution(AntennaSelection antenna, HrisConfig hris, CVector w, const ChannelSet& ch,
                           const SystemParams& params);

/// Signal-level simulation of the uplink: draws symbols, transmit and receive
/// distortion, amplified HRIS noise, BS noise and per-element phase error, and
/// returns the sample mean of |s_hat - s|^2. Samples are processed in blocks
/// with one substream per block so the result depends only on `rng`'s key.
double simulate_empirical_mse(const Solution& solution, const ChannelSet& ch, const SystemParams& params,
                              std::int64_t n_samples, const CounterRng& rng);

struct ExpectationCheck {
  CMatrix empirical;
  CMatrix analytic;
};

/// Monte-Carlo E[PhiBar A PhiBar^H] against eps_b^2 A + (1 - eps_b^2) dtilde(A).
ExpectationCheck phase_noise_expectation_check(const CMatrix& a, int b_bits, std::int64_t n_draws,
                                               const CounterRng& rng);

}  // namespace hris

#endif  // HRIS_SYSTEM_MODEL_HPP
