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

#ifndef HRIS_CHANNEL_HPP
#define HRIS_CHANNEL_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hris/numerics.hpp"
#include "hris/params.hpp"
#include "hris/rng.hpp"

namespace hris {

struct Geometry {
  Eigen::Vector3d bs{0.0, 80.0, 5.0};
  Eigen::Vector3d ris{50.0, 50.0, 15.0};
  Eigen::Vector3d user{0.0, 0.0, 2.0};

  double d_rb() const { return (ris - bs).norm(); }
  double d_ur() const { return (user - ris).norm(); }
  double d_ub() const { return (user - bs).norm(); }
  void validate() const;
};

enum class RicianInterpretation { kFraction, kKFactor };

struct FadingParams {
  double beta0_db = -30.0;
  double alpha_rb = 2.2;
  double alpha_ur = 2.2;
  double alpha_ub = 3.5;
  double rician_factor = 0.75;
  RicianInterpretation interpretation = RicianInterpretation::kFraction;

  /// Power fraction carried by the deterministic component.
  double los_fraction() const;
  void validate() const;
};

/// One realization of the three links. G is N x N_R; the HRIS-to-BS link is G^H.
struct ChannelSet {
  CVector h_d;  // user -> BS, length N_R
  CVector h_r;  // user -> HRIS, length N
  CMatrix g;    // BS <-> HRIS, N x N_R
  std::uint64_t seed = 0;

  Index n_r() const { return h_d.size(); }
  Index n() const { return h_r.size(); }
};

/// 10^(beta0_db/10) * d^(-alpha). Throws ContractViolation for d <= 0.
double path_loss(double d, double alpha, double beta0_db);

CVector gen_rayleigh(Index len, double variance_scale, CounterRng& rng);
CMatrix gen_rayleigh(Index rows, Index cols, double variance_scale, CounterRng& rng);

/// sqrt(scale) * (sqrt(kappa) * los + sqrt(1 - kappa) * CN(0, 1)), kappa in [0, 1).
CVector gen_rician(const CVector& los, double kappa, double variance_scale, CounterRng& rng);
CMatrix gen_rician(const CMatrix& los, double kappa, double variance_scale, CounterRng& rng);

/// Half-wavelength ULA response exp(j pi k sin(angle)), k = 0..len-1.
CVector ula_steering(Index len, double angle);

/// h_d Rayleigh over the UB distance; h_r and G Rician with ULA line-of-sight
/// components whose angles follow the azimuths of the HRIS-user and BS-HRIS lines.
ChannelSet gen_channel_set(const Geometry& geometry, const FadingParams& fading, const SystemParams& params,
                           std::uint64_t seed);

/// Binary interchange format, little-endian:
///   char[8] "HRISCH01", u32 n_r, u32 n, u64 seed,
///   h_d (n_r), h_r (n), G row-major (n x n_r), each entry as f64 re, f64 im.
void write_channel_file(std::ostream& out, const ChannelSet& channels);
ChannelSet read_channel_file(std::istream& in);
void save_channels(const std::string& path, const ChannelSet& channels);
ChannelSet load_channels(const std::string& path);

}  // namespace hris

#endif  // HRIS_CHANNEL_HPP
