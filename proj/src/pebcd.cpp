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

#include "hris/pebcd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "hris/rng.hpp"
#include "hris/subsolvers.hpp"

namespace hris {

std::vector<std::string> PebcdOptions::violations() const {
  std::vector<std::string> out;
  if (!(rho_growth > 1.0)) out.emplace_back("pebcd.rho_growth must be > 1");
  if (t_penalty < 1) out.emplace_back("pebcd.t_penalty must be >= 1");
  if (!(eps_outer > 0.0)) out.emplace_back("pebcd.eps_outer must be > 0");
  if (max_outer < 1) out.emplace_back("pebcd.max_outer must be >= 1");
  if (!(qp_tol > 0.0)) out.emplace_back("pebcd.qp_tol must be > 0");
  if (qp_max_iter < 1) out.emplace_back("pebcd.qp_max_iter must be >= 1");
  if (init_jitter < 0.0 || init_jitter > 1.0) out.emplace_back("pebcd.init_jitter must be in [0, 1]");
  return out;
}

void PebcdOptions::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid pebcd options:";
  for (const auto& s : v) msg += "\n  " + s;
  throw ContractViolation(msg);
}

namespace {

RVector antenna_vector(const AntennaSelection& antenna, Index n_r) {
  RVector a = RVector::Zero(static_cast<Index>(antenna.selected.size()) * n_r);
  for (std::size_t i = 0; i < antenna.selected.size(); ++i) a(static_cast<Index>(i) * n_r + antenna.selected[i]) = 1.0;
  return a;
}

bool gamma_frozen(const ChannelSet& ch, const SystemParams& params, const PebcdOptions& options) {
  return options.fixed_gamma.has_value() || params.p_hris < p_min(ch, params);
}

RVector alignment(const RVector& x, const RVector& aux) {
  return (2.0 * x.array() - 1.0) * (2.0 * aux.array() - 1.0);
}

}  // namespace

DesignPoint design_of(const RelaxedState& state, const SystemParams& params) {
  DesignPoint x;
  x.select = select_from_a(state.a, params.l, params.n_r);
  x.theta = theta_from_z(state.z, params.b_bits);
  x.omega = element_gains(state.gamma, state.mu);
  x.omega_act = state.mu * state.gamma;
  return x;
}

RelaxedState init_state(const SystemParams& params, const ChannelSet& ch, const PebcdOptions& options) {
  params.validate();
  options.validate();
  const Index n = params.n;
  const Index m = params.n_phases();
  CounterRng rng = CounterRng(options.seed).substream(Stream::kInit);

  RelaxedState s;
  s.mu = params.mu_min;
  if (options.fixed_gamma) {
    if (options.fixed_gamma->size() != n) throw ContractViolation("init_state: fixed_gamma has wrong length");
    s.gamma = *options.fixed_gamma;
  } else if (params.p_hris < p_min(ch, params)) {
    s.gamma = RVector::Zero(n);
  } else {
    s.gamma = RVector::Zero(n);
    for (Index i : active_eligible(ch, params)) s.gamma(i) = 0.5;
    const double load = params.mu_min * params.mu_min * s.gamma.cwiseAbs2().dot(element_loads(ch, params));
    if (load > params.p_hris) s.gamma *= std::sqrt(params.p_hris / load);
  }

  if (options.fixed_antennas) {
    if (!options.fixed_antennas->valid(params.n_r, params.l)) throw ContractViolation("init_state: invalid antennas");
    s.a = antenna_vector(*options.fixed_antennas, params.n_r);
  } else {
    s.a = RVector::Constant(params.l * params.n_r, 1.0 / static_cast<double>(params.n_r));
    if (options.init_jitter > 0.0) {
      const double scale = options.init_jitter / static_cast<double>(params.n_r);
      for (Index i = 0; i < s.a.size(); ++i) s.a(i) += scale * rng.uniform(-1.0, 1.0);
      s.a = project_assignment(s.a, params.l, params.n_r);
    }
  }

  s.z = RVector::Constant(n * m, 1.0 / static_cast<double>(m));
  if (options.init_jitter > 0.0) {
    const double scale = options.init_jitter / static_cast<double>(m);
    for (Index i = 0; i < s.z.size(); ++i) s.z(i) += scale * rng.uniform(-1.0, 1.0);
    s.z = project_block_simplex(s.z, n, m);
  }

  s.u = gamma_frozen(ch, params, options) ? s.gamma : RVector::Constant(n, 0.5);
  s.v = options.fixed_antennas ? s.a : RVector::Constant(s.a.size(), 0.5);
  s.q = RVector::Constant(s.z.size(), 0.5);

  const DesignPoint x = design_of(s, params);
  s.w = mmse_receiver(x.select, build_omega(ch, x, params), effective_channel(ch, x, params), params);
  s.rho = options.rho0 > 0.0 ? options.rho0 : 1e-4 * mse_design(s.w, x, ch, params);
  return s;
}

RelaxedState init_state(const SystemParams& params, const ChannelSet& ch, std::uint64_t seed) {
  PebcdOptions options;
  options.seed = seed;
  return init_state(params, ch, options);
}

double relaxed_mse(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params) {
  return mse_design(state.w, design_of(state, params), ch, params);
}

double penalty(const RelaxedState& state) {
  const double dims = static_cast<double>(state.gamma.size() + state.a.size() + state.z.size());
  const double aligned =
      alignment(state.gamma, state.u).sum() + alignment(state.a, state.v).sum() + alignment(state.z, state.q).sum();
  return state.rho * (dims - aligned);
}

double lagrangian(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params) {
  return relaxed_mse(state, ch, params) + penalty(state);
}

double binary_gap(const RelaxedState& state) {
  double gap = 0.0;
  for (const RVector* x : {&state.gamma, &state.a, &state.z}) {
    if (x->size() == 0) continue;
    gap = std::max(gap, x->array().min(1.0 - x->array()).maxCoeff());
  }
  return std::max(gap, 0.0);
}

namespace {

// Joint move on (gamma, mu, u): gamma rounded at 0.5, mu lowered to the
// rounded pattern's ceiling, u matched. Kept only on a strict Lagrangian drop.
RelaxedState snap_mode(const RelaxedState& s, const ChannelSet& ch, const SystemParams& params) {
  RelaxedState cand = s;
  cand.gamma = (s.gamma.array() >= 0.5).cast<double>();
  if (cand.gamma == s.gamma) return s;
  // Same drop rule as the final recovery: weakest relaxed entries go first
  // until the pattern fits at mu_min.
  while (cand.gamma.sum() > 0.0 && mu_ceiling(cand.gamma, ch, params) < params.mu_min) {
    Index drop = -1;
    for (Index i = 0; i < cand.gamma.size(); ++i) {
      if (cand.gamma(i) > 0.0 && (drop < 0 || s.gamma(i) < s.gamma(drop))) drop = i;
    }
    cand.gamma(drop) = 0.0;
  }
  if (cand.gamma.sum() > 0.0) cand.mu = std::min(s.mu, mu_ceiling(cand.gamma, ch, params));
  cand.u = cand.gamma;
  return lagrangian(cand, ch, params) < lagrangian(s, ch, params) ? cand : s;
}

}  // namespace

RelaxedState pebcd_iteration(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params,
                             const PebcdOptions& options) {
  const QpSolveFn solver = options.qp_solver ? options.qp_solver : QpSolveFn(solve_qp);
  const bool freeze_gamma = gamma_frozen(ch, params, options);
  const bool freeze_a = options.fixed_antennas.has_value();
  RelaxedState s = state;
  ++s.iter;

  DesignPoint x = design_of(s, params);
  s.w = mmse_receiver(x.select, build_omega(ch, x, params), effective_channel(ch, x, params), params);

  CMatrix x_mat = build_x(s.w, x.select, params.k_r);
  const RVector gxg = gxg_diagonal(ch, x_mat);
  const KTerms k = build_k(ch, x.theta, x_mat, s.w, x.select, params);
  if (s.gamma.size() > 0 && s.gamma.maxCoeff() > 0.0) {
    const AmpCoeffs c = amp_coeffs(s.gamma, k, gxg, ch, params);
    s.mu = optimal_mu(c.a, c.b, params.mu_min, std::max(c.mu_ref, params.mu_min));
  }

  if (!freeze_gamma) s.u = aux_update(s.gamma, s.u);
  if (!freeze_a) s.v = aux_update(s.a, s.v);
  s.q = aux_update(s.z, s.q);

  if (!freeze_gamma) {
    // Ineligible elements stay at zero; the QP runs over the others only.
    const std::vector<Index> idx = active_eligible(ch, params);
    const ModeQp mode = build_mode_qp(s.mu, k, gxg, ch, params);
    const RVector lin = mode.e - 2.0 * s.rho * (2.0 * s.u.array() - 1.0).matrix();
    QpProblem prob{mode.e1.real()(idx, idx), lin(idx), BoxBall{mode.e2_diag(idx), params.p_hris}};
    const RVector sub = solver(prob, s.gamma(idx), options.qp_tol, options.qp_max_iter).x;
    s.gamma.setZero();
    s.gamma(idx) = sub;
    if (options.mode_snap) s = snap_mode(s, ch, params);
  }

  if (!freeze_a) {
    x = design_of(s, params);
    const AntennaQp ant = build_antenna_qp(s.w, build_omega(ch, x, params), effective_channel(ch, x, params), params);
    QpProblem prob{ant.m_mat.real(), -2.0 * ant.m_vec.real() - 2.0 * s.rho * (2.0 * s.v.array() - 1.0).matrix(),
                   AssignmentPolytope{params.l, params.n_r}};
    s.a = solver(prob, s.a, options.qp_tol, options.qp_max_iter).x;
  }

  x = design_of(s, params);
  x_mat = build_x(s.w, x.select, params.k_r);
  const PhaseQp ph = build_phase_qp(ch, x.omega, x_mat, s.w, x.select, params);
  QpProblem prob{ph.nt_mat.real(), 2.0 * ph.nt_vec.real() - 2.0 * s.rho * (2.0 * s.q.array() - 1.0).matrix(),
                 BlockSimplex{params.n, params.n_phases()}};
  s.z = solver(prob, s.z, options.qp_tol, options.qp_max_iter).x;
  return s;
}

AntennaSelection assign_antennas(const RVector& a, Index l, Index n_r) {
  const RMatrix score = select_from_a(a, l, n_r);
  AntennaSelection out;
  out.selected.assign(static_cast<std::size_t>(l), -1);
  std::vector<bool> row_done(static_cast<std::size_t>(l), false);
  std::vector<bool> used(static_cast<std::size_t>(n_r), false);
  for (Index step = 0; step < l; ++step) {
    double best = -std::numeric_limits<double>::infinity();
    Index bi = -1;
    Index bj = -1;
    for (Index i = 0; i < l; ++i) {
      if (row_done[static_cast<std::size_t>(i)]) continue;
      for (Index j = 0; j < n_r; ++j) {
        if (!used[static_cast<std::size_t>(j)] && score(i, j) > best) {
          best = score(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    row_done[static_cast<std::size_t>(bi)] = true;
    used[static_cast<std::size_t>(bj)] = true;
    out.selected[static_cast<std::size_t>(bi)] = bj;
  }

  auto& sel = out.selected;
  for (bool improved = true; improved;) {
    improved = false;
    for (Index i = 0; i < l; ++i) {
      const auto si = static_cast<std::size_t>(i);
      for (Index j = i + 1; j < l; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const double gain = score(i, sel[sj]) + score(j, sel[si]) - score(i, sel[si]) - score(j, sel[sj]);
        if (gain > 1e-12) {
          std::swap(sel[si], sel[sj]);
          improved = true;
        }
      }
      for (Index c = 0; c < n_r; ++c) {
        if (used[static_cast<std::size_t>(c)]) continue;
        if (score(i, c) - score(i, sel[si]) > 1e-12) {
          used[static_cast<std::size_t>(sel[si])] = false;
          used[static_cast<std::size_t>(c)] = true;
          sel[si] = c;
          improved = true;
        }
      }
    }
  }
  return out;
}

Solution polish(AntennaSelection antenna, HrisConfig hris, const ChannelSet& ch, const SystemParams& params) {
  const bool active = hris.n_active() > 0;
  if (!active) hris.mu = 1.0;
  const RMatrix select = antenna.matrix(params.n_r);
  double previous = std::numeric_limits<double>::infinity();
  CVector w;
  for (int round = 0; round < 50; ++round) {
    const DesignPoint x = make_design(antenna, hris, params);
    w = mmse_receiver(select, build_omega(ch, x, params), effective_channel(ch, x, params), params);
    const double f = mse_design(w, x, ch, params);
    if (!active || previous - f <= 1e-12 * std::abs(f)) break;
    previous = f;
    const CMatrix x_mat = build_x(w, select, params.k_r);
    const KTerms k = build_k(ch, x.theta, x_mat, w, select, params);
    const AmpCoeffs c = amp_coeffs(hris.gamma, k, gxg_diagonal(ch, x_mat), ch, params);
    hris.mu = optimal_mu(c.a, c.b, params.mu_min, std::max(c.mu_ref, params.mu_min));
  }
  const DesignPoint x = make_design(antenna, hris, params);
  w = mmse_receiver(select, build_omega(ch, x, params), effective_channel(ch, x, params), params);
  return evaluate_solution(std::move(antenna), std::move(hris), std::move(w), ch, params);
}

Solution round_and_recover(const RelaxedState& state, const ChannelSet& ch, const SystemParams& params) {
  const Index n = params.n;
  const Index m = params.n_phases();
  HrisConfig hris;
  hris.phase_idx.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    state.z.segment(i * m, m).maxCoeff(&best);
    hris.phase_idx[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  hris.gamma = (state.gamma.array() >= 0.5).cast<double>();

  // Drop the weakest active elements until mu_min fits the budget.
  const RVector loads = element_loads(ch, params);
  while (hris.n_active() > 0 &&
         params.mu_min * params.mu_min * hris.gamma.dot(loads) > params.p_hris) {
    Index drop = -1;
    for (Index i = 0; i < n; ++i) {
      if (hris.gamma(i) > 0.5 && (drop < 0 || state.gamma(i) < state.gamma(drop))) drop = i;
    }
    hris.gamma(drop) = 0.0;
  }
  if (hris.n_active() > 0) {
    hris.mu = std::clamp(state.mu, params.mu_min, std::max(params.mu_min, mu_ceiling(hris.gamma, ch, params)));
  } else {
    hris.mu = 1.0;
  }
  return polish(assign_antennas(state.a, params.l, params.n_r), std::move(hris), ch, params);
}

PebcdResult run(const SystemParams& params, const ChannelSet& ch, const PebcdOptions& options) {
  RelaxedState state = init_state(params, ch, options);
  PebcdResult out;
  auto record = [&](const RelaxedState& s) {
    TraceRow row;
    row.iter = s.iter;
    row.rho = s.rho;
    row.f_mse = relaxed_mse(s, ch, params);
    row.j_rho = penalty(s);
    row.lagrangian = row.f_mse + row.j_rho;
    row.binary_gap = binary_gap(s);
    row.mu = s.mu;
    row.n_active = (s.gamma.array() >= 0.5).count();
    out.trace.push_back(row);
    return row;
  };

  double previous = record(state).lagrangian;
  for (int t = 1; t <= options.max_outer; ++t) {
    if (t > 1 && (t - 1) % options.t_penalty == 0) state.rho *= options.rho_growth;
    state = pebcd_iteration(state, ch, params, options);
    const TraceRow row = record(state);
    out.iterations = t;
    out.binary_gap = row.binary_gap;
    if (std::abs(row.lagrangian - previous) <= options.eps_outer * std::max(1.0, std::abs(row.lagrangian)) &&
        row.binary_gap <= 1e-4) {
      out.converged = true;
      break;
    }
    previous = row.lagrangian;
  }
  out.solution = round_and_recover(state, ch, params);
  if (!out.converged && out.binary_gap > 1e-2) {
    throw NonConvergenceError("pebcd: iteration cap reached with binary gap " + std::to_string(out.binary_gap),
                              std::move(out));
  }
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,rho,f_mse,j_rho,lagrangian,binary_gap,mu,n_active\n";
  const auto old = out.precision(17);
  for (const auto& r : trace) {
    out << r.iter << ',' << r.rho << ',' << r.f_mse << ',' << r.j_rho << ',' << r.lagrangian << ',' << r.binary_gap
        << ',' << r.mu << ',' << r.n_active << '\n';
  }
  out.precision(old);
}

}  // namespace hris
