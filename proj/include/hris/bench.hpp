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

#ifndef HRIS_BENCH_HPP
#define HRIS_BENCH_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hris/channel.hpp"
#include "hris/params.hpp"
#include "hris/pebcd.hpp"
#include "hris/system_model.hpp"

namespace hris {

enum class SchemeKind { kDhris, kFhris, kActiveRis, kPassiveRis, kNhris, kDhrisNoAs };
enum class Placement { kFirst, kStrongest };

struct Scheme {
  SchemeKind kind = SchemeKind::kDhris;
  Index n_active_fixed = 0;  // F-HRIS only
  Placement placement = Placement::kFirst;

  /// Stable identifier used in CSV files: dhris, fhris, active, passive, nhris, dhris_noas.
  std::string name() const;
  static Scheme parse(const std::string& name);
};

struct SchemeRun {
  Solution solution;
  SystemParams eval_params;     // model the solution is scored under
  double extra_tx_power = 0.0;  // budget moved to the user (passive RIS)
  int iterations = 0;
  bool converged = true;
};

/// Runs one benchmark scheme. Schemes whose frozen active pattern cannot meet
/// mu_min within the budget fall back to the all-passive surface.
SchemeRun run_scheme(const Scheme& scheme, const SystemParams& params, const ChannelSet& ch,
                     const PebcdOptions& options);

/// Number of discrete configurations C(N_R, L) 2^N (2^B)^N.
double brute_force_count(const SystemParams& params);

/// Exhaustive search over antenna subsets, modes and phases. For each
/// configuration mu is found by a grid over [mu_min, mu_ref] refined by golden
/// section, with w the MMSE receiver at every trial mu. Throws
/// ContractViolation above 1e7 configurations.
Solution brute_force(const SystemParams& params, const ChannelSet& ch);

struct TrialResult {
  double k_level = 0.0;
  std::string scheme;
  std::uint64_t seed = 0;
  double p_hris_dbm = 0.0;
  double p_hris = 0.0;
  double mse = 0.0;
  double empirical_mse = 0.0;
  double hris_power = 0.0;
  double extra_tx_power = 0.0;
  Index n_active = 0;
  double mu = 1.0;
  int iterations = 0;
  bool converged = true;
  std::string status = "ok";  // ok | nonconverged | error
  std::string message;
  double wall_time = 0.0;
};

/// One Monte-Carlo sweep specification.
struct SweepSpec {
  SystemParams system;
  Geometry geometry;
  FadingParams fading;
  std::vector<Scheme> schemes;
  std::vector<double> p_hris_grid_dbm;
  std::vector<double> impairment_levels;  // k_t = k_r = level; empty keeps system values
  std::vector<std::uint64_t> seeds;
  PebcdOptions pebcd;
  std::int64_t empirical_samples = 100000;
  int threads = 1;
};

/// Runs every (level, scheme, budget, seed) trial on a worker pool. The
/// returned table is ordered by that key regardless of thread count;
/// `on_result` is called under a lock as each trial completes.
std::vector<TrialResult> monte_carlo(const SweepSpec& spec,
                                     const std::function<void(const TrialResult&)>& on_result = {});

struct SummaryRow {
  double k_level = 0.0;
  std::string scheme;
  double p_hris_dbm = 0.0;
  std::size_t n = 0;
  std::size_t failures = 0;
  double mean_mse = 0.0;
  double median_mse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_empirical = 0.0;
};

/// Per (level, scheme, budget): mean, median and normal 95% interval of the
/// analytic MSE over successful trials.
std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results);

bool trial_less(const TrialResult& a, const TrialResult& b);

}  // namespace hris

#endif  // HRIS_BENCH_HPP
