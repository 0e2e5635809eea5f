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

#ifndef HRIS_PARAMS_HPP
#define HRIS_PARAMS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "hris/numerics.hpp"

namespace hris {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Phase-noise attenuation sin(pi/2^B) / (pi/2^B).
double epsilon_b(int b_bits);

/// Scalar model constants. Powers are linear (W); conversions from dB/dBm
/// happen only when a config is read.
struct SystemParams {
  Index n_r = 32;   // BS antennas
  Index l = 8;      // RF chains
  Index n = 64;     // HRIS elements
  int b_bits = 2;   // phase quantization bits
  double p = 1e-2;  // user transmit power
  double k_t = 0.08;
  double k_r = 0.08;
  double sigma_a2 = 1e-11;  // active-element noise
  double sigma_b2 = 1e-11;  // BS noise
  double p_hris = 1e-3;     // HRIS power budget
  double mu_min = 2.0;
  // Design-model switch: phase shifters without phase error (epsilon_b = 1).
  bool ideal_phase = false;

  double p_tilde() const { return p * (1.0 + k_t * k_t); }
  double sigma_b2_tilde() const { return sigma_b2 * (1.0 + k_r * k_r); }
  double eps_b() const { return ideal_phase ? 1.0 : epsilon_b(b_bits); }
  Index n_phases() const { return Index{1} << b_bits; }

  /// Every violated invariant, empty when valid.
  std::vector<std::string> violations() const;
  /// Throws ContractViolation listing all violations.
  void validate() const;
};

}  // namespace hris

#endif  // HRIS_PARAMS_HPP
