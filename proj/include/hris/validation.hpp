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

#ifndef HRIS_VALIDATION_HPP
#define HRIS_VALIDATION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hris/channel.hpp"
#include "hris/params.hpp"
#include "hris/subsolvers.hpp"

namespace hris {

/// Oracle suites that check the closed forms against independent
/// computations. Shared by `hris validate` and the acceptance tests.

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Random design point with an MMSE receiver, on channels drawn from `seed`.
/// Binary instances also carry the configuration the design came from;
/// relaxed ones perturb the receiver by about 10%.
struct OracleInstance {
  SystemParams params;
  ChannelSet ch;
  DesignPoint x;
  CVector w;
  AntennaSelection antenna;
  HrisConfig hris;
};
OracleInstance random_instance(const SystemParams& params, std::uint64_t seed, bool binary);

/// Builders the decomposition suite exercises. Defaults are the library's;
/// tests swap one out to confirm the suite catches a wrong coefficient.
struct DecompositionBuilders {
  std::function<KTerms(const ChannelSet&, const CVector&, const CMatrix&, const CVector&, const RMatrix&,
                       const SystemParams&)>
      build_k = [](const ChannelSet& ch, const CVector& theta, const CMatrix& x, const CVector& w,
                   const RMatrix& a, const SystemParams& p) { return hris::build_k(ch, theta, x, w, a, p); };
  std::function<AntennaQp(const CVector&, const CMatrix&, const CVector&, const SystemParams&)> build_antenna_qp =
      [](const CVector& w, const CMatrix& omega, const CVector& h, const SystemParams& p) {
        return hris::build_antenna_qp(w, omega, h, p);
      };
  std::function<PhaseQp(const ChannelSet&, const RVector&, const CMatrix&, const CVector&, const RMatrix&,
                        const SystemParams&)>
      build_phase_qp = [](const ChannelSet& ch, const RVector& omega, const CMatrix& x, const CVector& w,
                          const RMatrix& a, const SystemParams& p) {
        return hris::build_phase_qp(ch, omega, x, w, a, p);
      };
};

/// Analytic MSE against the signal-level simulation on random binary
/// configurations (N_R=8, L=3, N=8, B=2, k=0.08 by default).
CheckResult check_model_oracle(int n_configs, std::int64_t n_samples, std::uint64_t seed, double tol = 0.01);

/// Monte-Carlo E[PhiBar A PhiBar^H] against the closed form for B = 1, 2, 3.
CheckResult check_phase_expectation(std::int64_t n_draws, std::uint64_t seed, double tol = 0.01);

/// MMSE receiver against conjugate-gradient minimization of the MSE.
CheckResult check_mmse_optimality(int n_instances, std::uint64_t seed, double tol = 1e-6);
/// optimal_mu against a dense grid over [mu_min, mu_ref].
CheckResult check_mu_optimality(int n_instances, std::uint64_t seed, int grid_points = 100000);
/// aux_update against a direction grid on the 3-D ball.
CheckResult check_aux_optimality(int n_instances, std::uint64_t seed, double tol = 1e-3);

/// Each coefficient builder reproduces the MSE restricted to its block, up to
/// a block-independent constant. One result per builder family.
std::vector<CheckResult> check_decompositions(int n_instances, std::uint64_t seed,
                                              const DecompositionBuilders& builders = {}, double tol = 1e-9);

struct GapStats {
  int seeds = 0;
  int within = 0;      // relative gap <= 10%
  int below = 0;       // optimizer beat the exhaustive optimum by > 1e-9
  double worst = 0.0;  // largest relative gap
};

/// PEBCD against exhaustive search on N_R=4, L=2, N=3, B=1 instances.
GapStats bruteforce_gaps(int n_seeds, std::uint64_t base_seed, double p_hris_dbm);
CheckResult check_bruteforce(int n_seeds, std::uint64_t base_seed, double p_hris_dbm);

}  // namespace hris

#endif  // HRIS_VALIDATION_HPP
