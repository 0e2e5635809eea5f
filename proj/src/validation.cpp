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

#include "hris/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hris/bench.hpp"
#include "hris/qp.hpp"
#include "hris/rng.hpp"
#include "hris/system_model.hpp"

namespace hris {

namespace {

SystemParams oracle_params() {
  SystemParams p;
  p.n_r = 8;
  p.l = 3;
  p.n = 8;
  p.b_bits = 2;
  p.k_t = 0.08;
  p.k_r = 0.08;
  p.mu_min = 1.0;
  return p;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

CheckResult verdict(std::string name, double measured, double tol, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tol;
  r.passed = std::isfinite(measured) && measured <= tol;
  r.detail = std::move(detail);
  return r;
}

CVector mmse_for(const DesignPoint& x, const ChannelSet& ch, const SystemParams& params) {
  return mmse_receiver(x.select, build_omega(ch, x, params), effective_channel(ch, x, params), params);
}

// Largest deviation of f - q from its value at the first sample, relative to max |f|.
double constant_offset_error(const std::vector<double>& f, const std::vector<double>& q) {
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  const double c0 = f.front() - q.front();
  double worst = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) worst = std::max(worst, std::abs(f[i] - q[i] - c0));
  return worst / std::max(scale, 1e-300);
}

}  // namespace

OracleInstance random_instance(const SystemParams& params, std::uint64_t seed, bool binary) {
  OracleInstance inst;
  inst.params = params;
  inst.ch = gen_channel_set(Geometry{}, FadingParams{}, params, seed);
  CounterRng rng = CounterRng(seed).substream(Stream::kConfigDraw);
  const Index n = params.n;
  const Index m = params.n_phases();

  if (binary) {
    std::vector<Index> perm(static_cast<std::size_t>(params.n_r));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (std::size_t i = perm.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
      std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
    }
    AntennaSelection antenna;
    antenna.selected.assign(perm.begin(), perm.begin() + params.l);
    HrisConfig hris = HrisConfig::passive(n);
    for (Index i = 0; i < n; ++i) {
      hris.phase_idx[static_cast<std::size_t>(i)] = std::min<int>(static_cast<int>(rng.uniform() * m), m - 1);
      hris.gamma(i) = rng.uniform() < 0.5 ? 1.0 : 0.0;
    }
    const RVector loads = element_loads(inst.ch, params);
    while (hris.n_active() > 0 && params.mu_min * params.mu_min * hris.gamma.dot(loads) > params.p_hris) {
      for (Index i = 0; i < n; ++i) {
        if (hris.gamma(i) > 0.5) {
          hris.gamma(i) = 0.0;
          break;
        }
      }
    }
    if (hris.n_active() > 0) {
      const double ceiling = mu_ceiling(hris.gamma, inst.ch, params);
      hris.mu = params.mu_min + rng.uniform() * (ceiling - params.mu_min);
    }
    inst.x = make_design(antenna, hris, params);
    inst.w = mmse_for(inst.x, inst.ch, params);
    inst.antenna = std::move(antenna);
    inst.hris = std::move(hris);
    return inst;
  }

  RVector a(params.l * params.n_r);
  for (Index i = 0; i < a.size(); ++i) a(i) = rng.uniform();
  a = project_assignment(a, params.l, params.n_r);
  RVector z(n * m);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < m; ++k) z(i * m + k) = rng.uniform();
    z.segment(i * m, m) /= z.segment(i * m, m).sum();
  }
  RVector gamma(n);
  for (Index i = 0; i < n; ++i) gamma(i) = rng.uniform();
  const double mu = params.mu_min + 3.0 * rng.uniform();
  inst.x.select = select_from_a(a, params.l, params.n_r);
  inst.x.theta = theta_from_z(z, params.b_bits);
  inst.x.omega = element_gains(gamma, mu);
  inst.x.omega_act = mu * gamma;
  inst.w = mmse_for(inst.x, inst.ch, params);
  for (Index i = 0; i < inst.w.size(); ++i) inst.w(i) *= Complex(1.0 + 0.1 * rng.normal(), 0.1 * rng.normal());
  return inst;
}

CheckResult check_model_oracle(int n_configs, std::int64_t n_samples, std::uint64_t seed, double tol) {
  const SystemParams params = oracle_params();
  double worst = 0.0;
  for (int c = 0; c < n_configs; ++c) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(c);
    const OracleInstance inst = random_instance(params, s, true);
    Solution sol;
    sol.antenna = inst.antenna;
    sol.hris = inst.hris;
    sol.w = inst.w;
    sol.mse = mse_analytic(sol.w, sol.antenna, inst.ch, sol.hris, params);
    const double emp =
        simulate_empirical_mse(sol, inst.ch, params, n_samples, CounterRng(s).substream(Stream::kSignalNoise));
    worst = std::max(worst, std::abs(sol.mse - emp) / sol.mse);
  }
  return verdict("model_oracle", worst, tol,
                 std::to_string(n_configs) + " configurations, max relative |analytic - empirical|");
}

CheckResult check_phase_expectation(std::int64_t n_draws, std::uint64_t seed, double tol) {
  CounterRng rng = CounterRng(seed).substream(Stream::kConfigDraw);
  CMatrix a(8, 8);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = rng.complex_normal(1.0);
  }
  double worst = 0.0;
  for (int b = 1; b <= 3; ++b) {
    const ExpectationCheck e =
        phase_noise_expectation_check(a, b, n_draws, CounterRng(seed).substream(Stream::kPhaseNoise).substream(b));
    worst = std::max(worst, ((e.empirical - e.analytic).array().abs() / e.analytic.array().abs()).maxCoeff());
  }
  const double eps_err = std::abs(epsilon_b(2) - 0.900316);
  CheckResult r = verdict("phase_expectation", worst, tol, "max entrywise relative error over B = 1, 2, 3");
  if (eps_err > 1e-6) {
    r.passed = false;
    r.detail += "; eps_b(2) off by " + fmt(eps_err);
  }
  return r;
}

CheckResult check_mmse_optimality(int n_instances, std::uint64_t seed, double tol) {
  const SystemParams params = oracle_params();
  double worst = 0.0;
  for (int k = 0; k < n_instances; ++k) {
    const OracleInstance inst = random_instance(params, seed + static_cast<std::uint64_t>(k), false);
    const CMatrix q = mse_quadratic(inst.x.select, build_omega(inst.ch, inst.x, params), params);
    const CVector r = std::sqrt(params.p) * (inst.x.select.cast<Complex>() * effective_channel(inst.ch, inst.x, params));
    // Conjugate gradient on f(w) = w^H Q w - 2 Re(w^H r) + 1.
    CVector w = CVector::Zero(r.size());
    CVector res = r;
    CVector dir = res;
    double rr = res.squaredNorm();
    for (int it = 0; it < 20 * static_cast<int>(r.size()) && rr > 1e-32 * r.squaredNorm(); ++it) {
      const CVector qd = q * dir;
      const Complex alpha = rr / dir.dot(qd);
      w += alpha * dir;
      res -= alpha * qd;
      const double rr_next = res.squaredNorm();
      dir = res + (rr_next / rr) * dir;
      rr = rr_next;
    }
    auto f = [&](const CVector& v) { return v.dot(q * v).real() - 2.0 * v.dot(r).real() + 1.0; };
    const CVector w_star = mmse_receiver(inst.x.select, build_omega(inst.ch, inst.x, params),
                                         effective_channel(inst.ch, inst.x, params), params);
    worst = std::max(worst, std::abs(f(w_star) - f(w)));
  }
  return verdict("mmse_optimality", worst, tol, "max |f(w_mmse) - f(w_cg)|");
}

CheckResult check_mu_optimality(int n_instances, std::uint64_t seed, int grid_points) {
  const SystemParams params = oracle_params();
  double worst = 0.0;
  for (int k = 0; k < n_instances; ++k) {
    const OracleInstance inst = random_instance(params, seed + static_cast<std::uint64_t>(k), false);
    const RVector gamma = inst.x.omega_act / std::max(inst.x.omega_act.maxCoeff(), 1e-300) * 0.9;
    const CMatrix xm = build_x(inst.w, inst.x.select, params.k_r);
    const KTerms kt = build_k(inst.ch, inst.x.theta, xm, inst.w, inst.x.select, params);
    const AmpCoeffs c = amp_coeffs(gamma, kt, gxg_diagonal(inst.ch, xm), inst.ch, params);
    const double hi = std::max(c.mu_ref, params.mu_min);
    const double mu = optimal_mu(c.a, c.b, params.mu_min, hi);
    const double step = (hi - params.mu_min) / (grid_points - 1);
    double best = std::numeric_limits<double>::infinity();
    double best_mu = params.mu_min;
    for (int i = 0; i < grid_points; ++i) {
      const double t = params.mu_min + step * i;
      const double v = c.a * t * t + 2.0 * c.b * t;
      if (v < best) {
        best = v;
        best_mu = t;
      }
    }
    if (step > 0.0) worst = std::max(worst, std::abs(mu - best_mu) / step);
  }
  return verdict("mu_optimality", worst, 1.0, "max |mu* - mu_grid| in grid steps");
}

CheckResult check_aux_optimality(int n_instances, std::uint64_t seed, double tol) {
  CounterRng rng = CounterRng(seed).substream(Stream::kConfigDraw);
  const double radius = std::sqrt(3.0);
  constexpr int kPolar = 600;
  constexpr int kAzimuth = 1200;
  double worst = 0.0;
  for (int k = 0; k < n_instances; ++k) {
    RVector x(3);
    for (Index i = 0; i < 3; ++i) x(i) = rng.uniform();
    const RVector dir = 2.0 * x.array() - 1.0;
    const RVector u = aux_update(x, RVector::Constant(3, 0.5));
    const double closed = dir.dot((2.0 * u.array() - 1.0).matrix());
    double grid = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kPolar; ++i) {
      const double th = std::numbers::pi * i / kPolar;
      for (int j = 0; j < kAzimuth; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / kAzimuth;
        const double v = radius * (dir(0) * std::sin(th) * std::cos(ph) + dir(1) * std::sin(th) * std::sin(ph) +
                                   dir(2) * std::cos(th));
        grid = std::max(grid, v);
      }
    }
    // The closed form must not lose to any grid point and must sit within tol of the best.
    worst = std::max(worst, std::max(grid - closed, 0.0));
    worst = std::max(worst, closed - grid > tol ? closed - grid : 0.0);
  }
  return verdict("aux_optimality", worst, tol, "max objective gap to the ball grid");
}

std::vector<CheckResult> check_decompositions(int n_instances, std::uint64_t seed, const DecompositionBuilders& b,
                                              double tol) {
  const SystemParams params = oracle_params();
  double err_k = 0.0;
  double err_amp = 0.0;
  double err_mode = 0.0;
  double err_ant = 0.0;
  double err_phase = 0.0;
  constexpr int kSamples = 20;
  for (int inst_i = 0; inst_i < n_instances; ++inst_i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(inst_i);
    const OracleInstance inst = random_instance(params, s, false);
    const ChannelSet& ch = inst.ch;
    const CVector& w = inst.w;
    CounterRng rng = CounterRng(s).substream(Stream::kInit);
    const CMatrix xm = build_x(w, inst.x.select, params.k_r);
    const RVector gxg = gxg_diagonal(ch, xm);
    const KTerms kt = b.build_k(ch, inst.x.theta, xm, w, inst.x.select, params);

    {  // K, k: f as a function of the reflected-path gains omega.
      std::vector<double> f, q;
      for (int t = 0; t < kSamples; ++t) {
        DesignPoint x = inst.x;
        for (Index i = 0; i < params.n; ++i) x.omega(i) = 3.0 * rng.uniform();
        const CVector om = x.omega.cast<Complex>();
        f.push_back(mse_design(w, x, ch, params));
        q.push_back(om.dot(kt.k_mat * om).real() + 2.0 * (om.transpose() * kt.k_vec).value().real());
      }
      err_k = std::max(err_k, constant_offset_error(f, q));
    }

    RVector g = RVector::Zero(params.n);
    for (Index i = 0; i < params.n; ++i) g(i) = rng.uniform();

    {  // a, b: f as a function of mu for fixed gamma.
      const AmpCoeffs c = amp_coeffs(g, kt, gxg, ch, params);
      std::vector<double> f, q;
      for (int t = 0; t < kSamples; ++t) {
        const double mu = 1.0 + 5.0 * rng.uniform();
        DesignPoint x = inst.x;
        x.omega = element_gains(g, mu);
        x.omega_act = mu * g;
        f.push_back(mse_design(w, x, ch, params));
        q.push_back(c.a * mu * mu + 2.0 * c.b * mu);
      }
      err_amp = std::max(err_amp, constant_offset_error(f, q));
    }

    {  // E1, e: f as a function of gamma for fixed mu.
      const double mu = 1.0 + 5.0 * rng.uniform();
      const ModeQp mode = build_mode_qp(mu, kt, gxg, ch, params);
      std::vector<double> f, q;
      for (int t = 0; t < kSamples; ++t) {
        RVector gg(params.n);
        for (Index i = 0; i < params.n; ++i) gg(i) = rng.uniform();
        DesignPoint x = inst.x;
        x.omega = element_gains(gg, mu);
        x.omega_act = mu * gg;
        f.push_back(mse_design(w, x, ch, params));
        q.push_back(gg.dot(mode.e1.real() * gg) + mode.e.dot(gg));
      }
      err_mode = std::max(err_mode, constant_offset_error(f, q));
    }

    {  // M, m: f as a function of the antenna matrix, exact up to sigma_b~^2 |w|^2 + 1.
      const CMatrix omega = build_omega(ch, inst.x, params);
      const CVector h = effective_channel(ch, inst.x, params);
      const AntennaQp ant = b.build_antenna_qp(w, omega, h, params);
      for (int t = 0; t < kSamples; ++t) {
        RVector a(params.l * params.n_r);
        for (Index i = 0; i < a.size(); ++i) a(i) = rng.uniform();
        DesignPoint x = inst.x;
        x.select = select_from_a(a, params.l, params.n_r);
        const double f = mse_design(w, x, ch, params);
        const CVector ac = a.cast<Complex>();
        const double q = ac.dot(ant.m_mat * ac).real() - 2.0 * (ac.transpose() * ant.m_vec).value().real() +
                         params.sigma_b2_tilde() * w.squaredNorm() + 1.0;
        err_ant = std::max(err_ant, std::abs(f - q) / std::max(std::abs(f), 1.0));
      }
    }

    {  // N~, n~: f as a function of the one-hot phase blocks.
      const PhaseQp ph = b.build_phase_qp(ch, inst.x.omega, xm, w, inst.x.select, params);
      const Index m = params.n_phases();
      std::vector<double> f, q;
      for (int t = 0; t < kSamples; ++t) {
        RVector z = RVector::Zero(params.n * m);
        for (Index i = 0; i < params.n; ++i) z(i * m + std::min<Index>(static_cast<Index>(rng.uniform() * m), m - 1)) = 1.0;
        DesignPoint x = inst.x;
        x.theta = theta_from_z(z, params.b_bits);
        f.push_back(mse_design(w, x, ch, params));
        const CVector zc = z.cast<Complex>();
        q.push_back(zc.dot(ph.nt_mat * zc).real() + 2.0 * (zc.transpose() * ph.nt_vec).value().real());
      }
      err_phase = std::max(err_phase, constant_offset_error(f, q));
    }
  }
  const std::string d = std::to_string(n_instances) + " instances x " + std::to_string(kSamples) + " samples";
  return {verdict("decomposition_K_k", err_k, tol, d), verdict("decomposition_a_b", err_amp, tol, d),
          verdict("decomposition_E1_E2_e", err_mode, tol, d), verdict("decomposition_M_m", err_ant, tol, d),
          verdict("decomposition_N_n", err_phase, tol, d)};
}

GapStats bruteforce_gaps(int n_seeds, std::uint64_t base_seed, double p_hris_dbm) {
  SystemParams params;
  params.n_r = 4;
  params.l = 2;
  params.n = 3;
  params.b_bits = 1;
  params.p_hris = dbm_to_watt(p_hris_dbm);
  GapStats g;
  for (int i = 0; i < n_seeds; ++i) {
    const std::uint64_t s = base_seed + static_cast<std::uint64_t>(i);
    const ChannelSet ch = gen_channel_set(Geometry{}, FadingParams{}, params, s);
    PebcdOptions options;
    options.seed = s;
    const double pe = run_scheme(Scheme{}, params, ch, options).solution.mse;
    const double bf = brute_force(params, ch).mse;
    const double gap = (pe - bf) / bf;
    ++g.seeds;
    if (gap <= 0.1) ++g.within;
    if (pe < bf - 1e-9) ++g.below;
    g.worst = std::max(g.worst, gap);
  }
  return g;
}

CheckResult check_bruteforce(int n_seeds, std::uint64_t base_seed, double p_hris_dbm) {
  const GapStats g = bruteforce_gaps(n_seeds, base_seed, p_hris_dbm);
  CheckResult r;
  r.name = "bruteforce_gap";
  r.measured = static_cast<double>(g.within) / std::max(g.seeds, 1);
  r.tolerance = 0.8;
  r.passed = r.measured >= 0.8 && g.below == 0;
  r.detail = std::to_string(g.within) + "/" + std::to_string(g.seeds) + " seeds within 10%, " +
             std::to_string(g.below) + " below optimum, worst gap " + fmt(g.worst);
  return r;
}

}  // namespace hris
