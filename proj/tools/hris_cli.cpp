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

// hris: command-line front end for sweeps, oracle suites, plot data and
// exhaustive search on tiny instances.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hris/bench.hpp"
#include "hris/config.hpp"
#include "hris/io.hpp"
#include "hris/validation.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  int threads = 0;
  std::string out;
};

hris::RunConfig load(const CommonArgs& args) {
  hris::RunConfig cfg =
      args.config.empty() ? hris::parse_config_text("", args.overrides) : hris::parse_config_file(args.config, args.overrides);
  if (args.threads > 0) cfg.sweep.threads = args.threads;
  if (!args.out.empty()) cfg.output_dir = args.out;
  return cfg;
}

// Writes to a temporary name and renames, so a crash never leaves a truncated file.
template <typename Fn>
void write_file(const fs::path& path, Fn&& body) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    body(out);
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_sweep(const CommonArgs& args) {
  const hris::RunConfig cfg = load(args);
  const std::string hash = hris::manifest_hash(cfg);
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  write_file(dir / "manifest.yaml", [&](std::ostream& o) {
    o << "# manifest_hash=" << hash << '\n' << hris::canonical_config(cfg);
  });

  const std::size_t levels = std::max<std::size_t>(1, cfg.sweep.impairment_levels.size());
  const std::size_t total =
      levels * cfg.sweep.schemes.size() * cfg.sweep.p_hris_grid_dbm.size() * cfg.sweep.seeds.size();

  const fs::path partial = dir / "results.partial.csv";
  std::ofstream part(partial, std::ios::binary);
  part << "# manifest_hash=" << hash << '\n' << hris::results_header() << '\n' << std::flush;

  std::size_t done = 0;
  std::size_t errors = 0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = hris::monte_carlo(cfg.sweep, [&](const hris::TrialResult& r) {
    part << hris::results_row(r) << '\n' << std::flush;
    ++done;
    if (r.status == "error") ++errors;
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "[%zu/%zu %.0fs] k=%g %s %g dBm seed %llu: mse %.6g %s\n", done, total, el, r.k_level,
                 r.scheme.c_str(), r.p_hris_dbm, static_cast<unsigned long long>(r.seed), r.mse, r.status.c_str());
  });
  part.close();

  write_file(dir / "results.csv", [&](std::ostream& o) { hris::write_results_csv(o, hash, results); });
  write_file(dir / "summary.csv", [&](std::ostream& o) { hris::write_summary_csv(o, hash, hris::summarize(results)); });
  write_file(dir / "timings.csv", [&](std::ostream& o) { hris::write_timings_csv(o, hash, results); });
  fs::remove(partial);

  std::printf("%zu trials, %zu errors, results in %s\n", results.size(), errors, dir.string().c_str());
  return errors == 0 ? 0 : 3;
}

void print_check(const hris::CheckResult& c) {
  std::printf("%-4s %-28s measured %.6g  tolerance %.6g  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured,
              c.tolerance, c.detail.c_str());
}

int cmd_validate(const std::vector<std::string>& suites, std::uint64_t seed) {
  static const std::vector<std::string> kAll = {"model", "expectation", "closed_form", "decomposition", "bruteforce"};
  std::set<std::string> want;
  for (const auto& s : suites) {
    if (s == "all") {
      want.insert(kAll.begin(), kAll.end());
    } else if (std::find(kAll.begin(), kAll.end(), s) != kAll.end()) {
      want.insert(s);
    } else {
      throw CLI::ValidationError("--suite", "unknown suite '" + s + "'");
    }
  }
  if (want.empty()) want.insert(kAll.begin(), kAll.end());

  std::vector<hris::CheckResult> all;
  auto run = [&](const std::string& suite, auto&& fn) {
    if (!want.count(suite)) return;
    std::printf("== %s\n", suite.c_str());
    std::fflush(stdout);
    for (const auto& c : fn()) {
      print_check(c);
      all.push_back(c);
    }
    std::fflush(stdout);
  };
  using Checks = std::vector<hris::CheckResult>;
  run("model", [&] { return Checks{hris::check_model_oracle(20, 1000000, seed)}; });
  run("expectation", [&] { return Checks{hris::check_phase_expectation(1000000, seed)}; });
  run("closed_form", [&] {
    return Checks{hris::check_mmse_optimality(20, seed), hris::check_mu_optimality(20, seed),
                  hris::check_aux_optimality(20, seed)};
  });
  run("decomposition", [&] { return hris::check_decompositions(20, seed); });
  run("bruteforce", [&] { return Checks{hris::check_bruteforce(50, seed, -30.0)}; });

  const auto failed = std::count_if(all.begin(), all.end(), [](const auto& c) { return !c.passed; });
  std::printf("%zu checks, %ld failed\n", all.size(), static_cast<long>(failed));
  return failed == 0 ? 0 : 1;
}

int cmd_plotdata(const std::string& results_path, const std::string& out_dir) {
  std::ifstream in(results_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + results_path);
  const hris::ResultsFile file = hris::read_results_csv(in);
  if (file.rows.empty()) throw std::runtime_error("results file has no trials");
  for (std::size_t i = 1; i < file.rows.size(); ++i) {
    if (hris::trial_less(file.rows[i], file.rows[i - 1])) {
      throw std::runtime_error("results file is not sorted (row " + std::to_string(i + 1) + ")");
    }
  }
  const auto summary = hris::summarize(file.rows);
  std::set<double> levels;
  for (const auto& r : file.rows) levels.insert(r.k_level);

  const fs::path dir = out_dir.empty() ? fs::path(results_path).parent_path() : fs::path(out_dir);
  if (!dir.empty()) fs::create_directories(dir);
  for (double k : levels) {
    char name[64];
    std::snprintf(name, sizeof name, "plot_k%g.csv", k);
    const auto rows = hris::plot_rows(summary, k);
    write_file(dir / name, [&](std::ostream& o) { hris::write_plot_csv(o, file.hash, rows); });
    std::printf("%s: %zu rows\n", (dir / name).string().c_str(), rows.size());
  }
  return 0;
}

int cmd_bruteforce(const CommonArgs& args) {
  const hris::RunConfig cfg = load(args);
  const auto& sw = cfg.sweep;
  const double count = hris::brute_force_count(sw.system);
  std::printf("%.0f configurations per instance\n", count);

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  const std::string hash = hris::manifest_hash(cfg);
  std::ostringstream csv;
  csv << "# manifest_hash=" << hash << '\n' << "p_hris_dbm,seed,optimum_mse,pebcd_mse,relative_gap\n";

  const hris::Scheme dhris{};
  bool any_below = false;
  for (double dbm : sw.p_hris_grid_dbm) {
    for (std::uint64_t seed : sw.seeds) {
      hris::SystemParams p = sw.system;
      p.p_hris = hris::dbm_to_watt(dbm);
      const auto ch = hris::gen_channel_set(sw.geometry, sw.fading, p, seed);
      const auto opt = hris::brute_force(p, ch);
      hris::PebcdOptions o = sw.pebcd;
      o.seed = seed;
      const auto run = hris::run_scheme(dhris, p, ch, o);
      const double gap = (run.solution.mse - opt.mse) / opt.mse;
      any_below = any_below || run.solution.mse < opt.mse - 1e-9;
      std::printf("%g dBm seed %llu: optimum %.9g pebcd %.9g gap %.3g%%\n", dbm,
                  static_cast<unsigned long long>(seed), opt.mse, run.solution.mse, 100.0 * gap);
      char line[160];
      std::snprintf(line, sizeof line, "%.17g,%llu,%.17g,%.17g,%.17g\n", dbm, static_cast<unsigned long long>(seed),
                    opt.mse, run.solution.mse, gap);
      csv << line;
    }
  }
  write_file(dir / "bruteforce.csv", [&](std::ostream& o) { o << csv.str(); });
  if (any_below) std::printf("optimizer beat the exhaustive optimum: search is inconsistent\n");
  return any_below ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid active-passive RIS uplink: optimizer, benchmarks and oracle suites"};
  app.require_subcommand(1);

  CommonArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over schemes, budgets and seeds");
  sweep->add_option("--config", sweep_args.config, "YAML config file")->check(CLI::ExistingFile);
  sweep->add_option("--override", sweep_args.overrides, "key.path=value, repeatable");
  sweep->add_option("--threads", sweep_args.threads, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--out", sweep_args.out, "output directory");

  std::vector<std::string> suites;
  std::uint64_t validate_seed = 1;
  auto* validate = app.add_subcommand("validate", "Run the oracle suites");
  validate->add_option("--suite", suites, "model, expectation, closed_form, decomposition, bruteforce or all")
      ->delimiter(',');
  validate->add_option("--seed", validate_seed, "base seed");

  std::string results_path;
  std::string plot_out;
  auto* plot = app.add_subcommand("plotdata", "Emit per-figure plot series from a results file");
  plot->add_option("results", results_path, "results.csv from a sweep")->required();
  plot->add_option("--out", plot_out, "output directory (defaults to the results directory)");

  CommonArgs bf_args;
  auto* bf = app.add_subcommand("bruteforce", "Exhaustive search against the optimizer on small instances");
  bf->add_option("--config", bf_args.config, "YAML config file")->check(CLI::ExistingFile);
  bf->add_option("--override", bf_args.overrides, "key.path=value, repeatable");
  bf->add_option("--out", bf_args.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return cmd_sweep(sweep_args);
    if (*validate) return cmd_validate(suites, validate_seed);
    if (*plot) return cmd_plotdata(results_path, plot_out);
    if (*bf) return cmd_bruteforce(bf_args);
  } catch (const hris::ConfigError& e) {
    std::fprintf(stderr, "config error:\n%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
