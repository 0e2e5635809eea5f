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

#include "hris/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "hris/rng.hpp"
#include "hris/subsolvers.hpp"

namespace hris {

std::string Scheme::name() const {
  switch (kind) {
    case SchemeKind::kDhris: return "dhris";
    case SchemeKind::kFhris: return "fhris";
    case SchemeKind::kActiveRis: return "active";
    case SchemeKind::kPassiveRis: return "passive";
    case SchemeKind::kNhris: return "nhris";
    case SchemeKind::kDhrisNoAs: return "dhris_noas";
  }
  return "unknown";
}

Scheme Scheme::parse(const std::string& name) {
  static const std::map<std::string, SchemeKind> kinds = {
      {"dhris", SchemeKind::kDhris},        {"fhris", SchemeKind::kFhris}, {"active", SchemeKind::kActiveRis},
      {"passive", SchemeKind::kPassiveRis}, {"nhris", SchemeKind::kNhris}, {"dhris_noas", SchemeKind::kDhrisNoAs}};
  const auto it = kinds.find(name);
  if (it == kinds.end()) throw ContractViolation("unknown scheme '" + name + "'");
  Scheme s;
  s.kind = it->second;
  return s;
}

namespace {

struct Guarded {
  PebcdResult result;
  bool converged = true;
};

Guarded run_guarded(const SystemParams& params, const ChannelSet& ch, const PebcdOptions& options) {
  try {
    PebcdResult r = run(params, ch, options);
    return {std::move(r), true};
  } catch (NonConvergenceError& e) {
    return {std::move(e.result), false};
  }
}

bool pattern_feasible(const RVector& gamma, const ChannelSet& ch, const SystemParams& params) {
  return params.mu_min * params.mu_min * gamma.dot(element_loads(ch, params)) <= params.p_hris;
}

RVector fixed_pattern(const Scheme& scheme, const ChannelSet& ch, const SystemParams& params) {
  const Index n = params.n;
  if (scheme.n_active_fixed < 0 || scheme.n_active_fixed > n) {
    throw ContractViolation("fhris: n_active_fixed must lie in [0, N]");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  if (scheme.placement == Placement::kStrongest) {
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return std::abs(ch.h_r(a)) > std::abs(ch.h_r(b)); });
  }
  RVector gamma = RVector::Zero(n);
  for (Index i = 0; i < scheme.n_active_fixed; ++i) gamma(order[static_cast<std::size_t>(i)]) = 1.0;
  return gamma;
}

// Re-scores a design under the true model, trimming the amplifier to the true budget.
Solution rescore(const Solution& design, const ChannelSet& ch, const SystemParams& params) {
  HrisConfig hris = design.hris;
  const RVector loads = element_loads(ch, params);
  while (hris.n_active() > 0 && params.mu_min * params.mu_min * hris.gamma.dot(loads) > params.p_hris) {
    Index drop = -1;
    for (Index i = 0; i < hris.gamma.size(); ++i) {
      if (hris.gamma(i) > 0.5 && (drop < 0 || loads(i) > loads(drop))) drop = i;
    }
    hris.gamma(drop) = 0.0;
  }
  if (hris.n_active() == 0) {
    hris.mu = 1.0;
  } else {
    hris.mu = std::min(hris.mu, mu_ceiling(hris.gamma, ch, params));
  }
  return evaluate_solution(design.antenna, std::move(hris), design.w, ch, params);
}

}  // namespace

SchemeRun run_scheme(const Scheme& scheme, const SystemParams& params, const ChannelSet& ch,
                     const PebcdOptions& options) {
  SchemeRun out;
  out.eval_params = params;
  PebcdOptions opt = options;
  SystemParams design = params;

  switch (scheme.kind) {
    case SchemeKind::kDhris:
      break;
    case SchemeKind::kDhrisNoAs:
      opt.fixed_antennas = AntennaSelection::first(params.l);
      break;
    case SchemeKind::kFhris: {
      const RVector gamma = fixed_pattern(scheme, ch, params);
      opt.fixed_gamma = pattern_feasible(gamma, ch, params) ? gamma : RVector::Zero(params.n);
      break;
    }
    case SchemeKind::kActiveRis: {
      const RVector gamma = RVector::Ones(params.n);
      opt.fixed_gamma = pattern_feasible(gamma, ch, params) ? gamma : RVector::Zero(params.n);
      break;
    }
    case SchemeKind::kPassiveRis:
      opt.fixed_gamma = RVector::Zero(params.n);
      out.eval_params.p = params.p + params.p_hris;
      out.extra_tx_power = params.p_hris;
      design = out.eval_params;
      break;
    case SchemeKind::kNhris:
      design.k_t = 0.0;
      design.k_r = 0.0;
      design.ideal_phase = true;
      break;
  }

  Guarded g = run_guarded(design, ch, opt);
  out.iterations = g.result.iterations;
  out.converged = g.converged;
  out.solution = scheme.kind == SchemeKind::kNhris ? rescore(g.result.solution, ch, params) : g.result.solution;
  return out;
}

double brute_force_count(const SystemParams& params) {
  double comb = 1.0;
  for (Index i = 0; i < params.l; ++i) {
    comb *= static_cast<double>(params.n_r - i) / static_cast<double>(i + 1);
  }
  return std::round(comb) * std::pow(2.0, static_cast<double>(params.n)) *
         std::pow(static_cast<double>(params.n_phases()), static_cast<double>(params.n));
}

namespace {

struct Scored {
  double mse = std::numeric_limits<double>::infinity();
  double mu = 1.0;
};

double mse_at(const AntennaSelection& antenna, HrisConfig& hris, double mu, const ChannelSet& ch,
              const SystemParams& params) {
  hris.mu = mu;
  const DesignPoint x = make_design(antenna, hris, params);
  const CMatrix omega = build_omega(ch, x, params);
  const CVector h = effective_channel(ch, x, params);
  const CVector w = mmse_receiver(x.select, omega, h, params);
  return mse_design(w, x, ch, params);
}

Scored best_mu(const AntennaSelection& antenna, HrisConfig& hris, double ceiling, const ChannelSet& ch,
               const SystemParams& params) {
  const double lo = params.mu_min;
  const double hi = std::max(lo, ceiling);
  constexpr int kGrid = 33;
  std::vector<double> grid(kGrid);
  Scored best;
  Index best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
    const double f = mse_at(antenna, hris, grid[static_cast<std::size_t>(i)], ch, params);
    if (f < best.mse) {
      best = {f, grid[static_cast<std::size_t>(i)]};
      best_i = i;
    }
  }
  if (hi > lo) {
    double a = grid[static_cast<std::size_t>(std::max<Index>(best_i - 1, 0))];
    double b = grid[static_cast<std::size_t>(std::min<Index>(best_i + 1, kGrid - 1))];
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = mse_at(antenna, hris, c, ch, params);
    double fd = mse_at(antenna, hris, d, ch, params);
    for (int it = 0; it < 60 && b - a > 1e-12 * b; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - r * (b - a);
        fc = mse_at(antenna, hris, c, ch, params);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + r * (b - a);
        fd = mse_at(antenna, hris, d, ch, params);
      }
    }
    if (fc < best.mse) best = {fc, c};
    if (fd < best.mse) best = {fd, d};
  }
  return best;
}

}  // namespace

Solution brute_force(const SystemParams& params, const ChannelSet& ch) {
  params.validate();
  if (brute_force_count(params) > 1e7) throw ContractViolation("brute_force: instance exceeds 1e7 configurations");
  const Index n = params.n;
  const int m = static_cast<int>(params.n_phases());
  const RVector loads = element_loads(ch, params);

  Solution best;
  best.mse = std::numeric_limits<double>::infinity();
  AntennaSelection best_antenna;
  HrisConfig best_hris;

  std::vector<Index> comb(static_cast<std::size_t>(params.l));
  std::iota(comb.begin(), comb.end(), Index{0});
  const std::uint64_t n_masks = std::uint64_t{1} << n;
  std::uint64_t n_phase_cfg = 1;
  for (Index i = 0; i < n; ++i) n_phase_cfg *= static_cast<std::uint64_t>(m);

  while (true) {
    AntennaSelection antenna{comb};
    for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
      HrisConfig hris = HrisConfig::passive(n);
      for (Index i = 0; i < n; ++i) hris.gamma(i) = (mask >> i) & 1U ? 1.0 : 0.0;
      double ceiling = 1.0;
      if (mask != 0) {
        ceiling = std::sqrt(params.p_hris / hris.gamma.dot(loads));
        if (ceiling < params.mu_min) continue;
      }
      for (std::uint64_t code = 0; code < n_phase_cfg; ++code) {
        std::uint64_t rest = code;
        for (Index i = 0; i < n; ++i) {
          hris.phase_idx[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::uint64_t>(m));
          rest /= static_cast<std::uint64_t>(m);
        }
        Scored s;
        if (mask == 0) {
          s = {mse_at(antenna, hris, 1.0, ch, params), 1.0};
        } else {
          s = best_mu(antenna, hris, ceiling, ch, params);
        }
        if (s.mse < best.mse) {
          best.mse = s.mse;
          best_antenna = antenna;
          best_hris = hris;
          best_hris.mu = s.mu;
        }
      }
    }
    // Next combination in lexicographic order.
    Index i = params.l - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == params.n_r - params.l + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < params.l; ++j) comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return polish(best_antenna, best_hris, ch, params);
}

bool trial_less(const TrialResult& a, const TrialResult& b) {
  return std::tie(a.k_level, a.scheme, a.p_hris_dbm, a.seed) < std::tie(b.k_level, b.scheme, b.p_hris_dbm, b.seed);
}

std::vector<TrialResult> monte_carlo(const SweepSpec& spec, const std::function<void(const TrialResult&)>& on_result) {
  if (spec.schemes.empty() || spec.p_hris_grid_dbm.empty() || spec.seeds.empty()) {
    throw ContractViolation("monte_carlo: schemes, budget grid and seeds must be non-empty");
  }
  std::vector<double> levels = spec.impairment_levels;
  if (levels.empty()) levels.push_back(spec.system.k_t);
  std::sort(levels.begin(), levels.end());
  std::vector<Scheme> schemes = spec.schemes;
  std::stable_sort(schemes.begin(), schemes.end(), [](const Scheme& a, const Scheme& b) { return a.name() < b.name(); });
  std::vector<double> grid = spec.p_hris_grid_dbm;
  std::sort(grid.begin(), grid.end());
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());

  struct Item {
    double level;
    const Scheme* scheme;
    double budget_dbm;
    std::uint64_t seed;
  };
  std::vector<Item> items;
  for (double k : levels) {
    for (const auto& s : schemes) {
      for (double b : grid) {
        for (auto seed : seeds) items.push_back({k, &s, b, seed});
      }
    }
  }

  std::map<std::uint64_t, ChannelSet> channels;
  for (auto seed : seeds) channels.emplace(seed, gen_channel_set(spec.geometry, spec.fading, spec.system, seed));

  std::vector<TrialResult> results(items.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_lock;

  auto work = [&]() {
    for (std::size_t idx = next++; idx < items.size(); idx = next++) {
      const Item& it = items[idx];
      TrialResult r;
      r.k_level = it.level;
      r.scheme = it.scheme->name();
      r.seed = it.seed;
      r.p_hris_dbm = it.budget_dbm;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        SystemParams params = spec.system;
        params.k_t = it.level;
        params.k_r = it.level;
        params.p_hris = dbm_to_watt(it.budget_dbm);
        r.p_hris = params.p_hris;
        PebcdOptions options = spec.pebcd;
        options.seed = it.seed;
        const ChannelSet& ch = channels.at(it.seed);
        const SchemeRun run = run_scheme(*it.scheme, params, ch, options);
        r.mse = run.solution.mse;
        r.hris_power = run.solution.hris_power;
        r.extra_tx_power = run.extra_tx_power;
        r.n_active = run.solution.hris.n_active();
        r.mu = run.solution.hris.mu;
        r.iterations = run.iterations;
        r.converged = run.converged;
        r.status = run.converged ? "ok" : "nonconverged";
        if (spec.empirical_samples > 0) {
          const CounterRng rng = CounterRng(it.seed).substream(Stream::kSignalNoise).substream(idx);
          r.empirical_mse = simulate_empirical_mse(run.solution, ch, run.eval_params, spec.empirical_samples, rng);
        }
      } catch (const std::exception& e) {
        r.status = "error";
        r.message = e.what();
      }
      r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      results[idx] = r;
      if (on_result) {
        std::lock_guard<std::mutex> lock(report_lock);
        on_result(results[idx]);
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(spec.threads, static_cast<int>(items.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return results;
}

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results) {
  std::map<std::tuple<double, std::string, double>, std::vector<const TrialResult*>> groups;
  for (const auto& r : results) groups[{r.k_level, r.scheme, r.p_hris_dbm}].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [key, rows] : groups) {
    SummaryRow s;
    std::tie(s.k_level, s.scheme, s.p_hris_dbm) = key;
    std::vector<double> mse;
    double emp = 0.0;
    for (const TrialResult* r : rows) {
      if (r->status == "error") {
        ++s.failures;
        continue;
      }
      mse.push_back(r->mse);
      emp += r->empirical_mse;
    }
    s.n = mse.size();
    if (!mse.empty()) {
      const double n = static_cast<double>(mse.size());
      s.mean_mse = std::accumulate(mse.begin(), mse.end(), 0.0) / n;
      s.mean_empirical = emp / n;
      std::vector<double> sorted = mse;
      std::sort(sorted.begin(), sorted.end());
      const std::size_t h = sorted.size() / 2;
      s.median_mse = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
      double var = 0.0;
      for (double x : mse) var += (x - s.mean_mse) * (x - s.mean_mse);
      const double half = mse.size() > 1 ? 1.96 * std::sqrt(var / (n - 1.0) / n) : 0.0;
      s.ci_low = s.mean_mse - half;
      s.ci_high = s.mean_mse + half;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace hris
