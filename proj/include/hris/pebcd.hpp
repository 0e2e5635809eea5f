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

#ifndef HRIS_PEBCD_HPP
#define HRIS_PEBCD_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hris/channel.hpp"
#include "hris/numerics.hpp"
#include "hris/params.hpp"
#include "hris/qp.hpp"
#include "hris/system_model.hpp"

namespace hris {

/// Relaxed iterate. Selection blocks live in [0, 1]:
///   gamma  N          mode (1 = active)
///   a      L * N_R    antenna rows stacked, a = vec(A^T)
///   z      2^B * N    one-hot phase blocks, theta = Z theta_s
/// u, v, q are the matching auxiliaries on the balls ||2x - 1||^2 <= dim.
struct RelaxedState {
  CVector w;
  double mu = 1.0;
  RVector gamma;
  RVector a;
  RVector z;
  RVector u;
  RVector v;
  RVector q;
  double rho = 0.0;
  int iter = 0;
};

struct PebcdOptions {
  double rho0 = 0.0;  // <= 0 selects 1e-4 * initial MSE
  double rho_growth = 5.0;
  int t_penalty = 10;
  double eps_outer = 1e-5;
  int max_outer = 500;
  double qp_tol = 1e-8;
  int qp_max_iter = 500;
  std::uint64_t seed = 0;
  // Seeded uniform noise added to the initial a and z before projection, as a
  // fraction of the block-center value. The uniform antenna start has identical
  // rows, a stationary point the block updates cannot leave.
  double init_jitter = 0.1;
  // After the mode QP, try rounding gamma at 0.5 with mu lowered to fit the
  // budget and keep it only if the Lagrangian drops.
  bool mode_snap = true;
  // Frozen blocks: the mode vector (binary) and/or the antenna selection.
  std::optional<RVector> fixed_gamma;
  std::optional<AntennaSelection> fixed_antennas;
  QpSolveFn qp_solver;  // empty selects solve_qp

  std::vector<std::string> violations() const;
  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double rho = 0.0;
  double f_mse = 0.0;
  double j_rho = 0.0;
  double lagrangian = 0.0;
  double binary_gap = 0.0;
  double mu = 1.0;
  Index n_active = 0;
};

struct PebcdResult {
  Solution solution;
  std::vector<TraceRow> trace;
  int iterations = 0;
  bool converged = false;
  double binary_gap = 0.0;
};

/// Thrown by run() when max_outer is hit with the binary gap above 1e-2.
/// Carries the recovered best-effort result.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, PebcdResult partial)
      : std::runtime_error(what), result(std::move(partial)) {}
  PebcdResult result;
};

DesignPoint design_of(const RelaxedState& state, const SystemParams& params);

RelaxedState init_state(const SystemParams& params, const ChannelSet& ch, const PebcdOptions& options);
RelaxedState init_state(const SystemParams& params, const ChannelSet& ch, std::uint64_t seed);

double relaxed_mse(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params);

/// J = rho [(N - g~'u~) + (L N_R - a~'v~) + (2^B N - z~'q~)], x~ = 2x - 1.
double penalty(const RelaxedState& state);
double lagrangian(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params);

/// max over gamma, a, z of min(x, 1 - x).
double binary_gap(const RelaxedState& state);

/// One sweep: w, mu, auxiliaries, then the gamma, a and z subproblems.
RelaxedState pebcd_iteration(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params,
                             const PebcdOptions& options);

/// Rounds the relaxed state to a feasible binary configuration and
/// re-optimizes mu and w for it.
Solution round_and_recover(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params);

/// Distinct assignment maximizing sum_i a_i[sigma(i)]: greedy, then pairwise
/// and row-to-unused-column swaps until no swap improves.
AntennaSelection assign_antennas(const RVector& a, Index l, Index n_r);

/// Alternates the closed-form mu and MMSE updates on a fixed binary
/// configuration until the MSE stops improving.
Solution polish(AntennaSelection antenna, HrisConfig hris, const ChannelSet& ch, const SystemParams& params);

PebcdResult run(const SystemParams& params, const ChannelSet& ch, const PebcdOptions& options);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace hris

#endif  // HRIS_PEBCD_HPP
