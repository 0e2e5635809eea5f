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

#include "hris/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hris {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string results_header() {
  return "k_level,scheme,p_hris_dbm,seed,status,mse,empirical_mse,hris_power,extra_tx_power,n_active,mu,iterations,"
         "converged,message";
}

std::string results_row(const TrialResult& r) {
  std::ostringstream s;
  s << num(r.k_level) << ',' << r.scheme << ',' << num(r.p_hris_dbm) << ',' << r.seed << ',' << r.status << ','
    << num(r.mse) << ',' << num(r.empirical_mse) << ',' << num(r.hris_power) << ',' << num(r.extra_tx_power) << ','
    << r.n_active << ',' << num(r.mu) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
    << clean(r.message);
  return s.str();
}

void write_results_csv(std::ostream& out, const std::string& hash, const std::vector<TrialResult>& rows) {
  out << "# manifest_hash=" << hash << '\n' << results_header() << '\n';
  for (const auto& r : rows) out << results_row(r) << '\n';
}

void write_timings_csv(std::ostream& out, const std::string& hash, const std::vector<TrialResult>& rows) {
  out << "# manifest_hash=" << hash << '\n' << "k_level,scheme,p_hris_dbm,seed,wall_time\n";
  for (const auto& r : rows) {
    out << num(r.k_level) << ',' << r.scheme << ',' << num(r.p_hris_dbm) << ',' << r.seed << ',' << num(r.wall_time)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::string& hash, const std::vector<SummaryRow>& rows) {
  out << "# manifest_hash=" << hash << '\n'
      << "k_level,scheme,p_hris_dbm,n,failures,mean_mse,median_mse,ci_low,ci_high,mean_empirical_mse\n";
  for (const auto& r : rows) {
    out << num(r.k_level) << ',' << r.scheme << ',' << num(r.p_hris_dbm) << ',' << r.n << ',' << r.failures << ','
        << num(r.mean_mse) << ',' << num(r.median_mse) << ',' << num(r.ci_low) << ',' << num(r.ci_high) << ','
        << num(r.mean_empirical) << '\n';
  }
}

ResultsFile read_results_csv(std::istream& in) {
  ResultsFile f;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# manifest_hash=", 0) != 0) {
    throw std::runtime_error("results file: missing manifest hash line");
  }
  f.hash = line.substr(16);
  if (!std::getline(in, line) || line != results_header()) throw std::runtime_error("results file: unexpected header");
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 14) throw std::runtime_error("results file: wrong column count on line " + std::to_string(line_no));
    try {
      TrialResult r;
      r.k_level = std::stod(c[0]);
      r.scheme = c[1];
      r.p_hris_dbm = std::stod(c[2]);
      r.seed = std::stoull(c[3]);
      r.status = c[4];
      r.mse = std::stod(c[5]);
      r.empirical_mse = std::stod(c[6]);
      r.hris_power = std::stod(c[7]);
      r.extra_tx_power = std::stod(c[8]);
      r.n_active = std::stoll(c[9]);
      r.mu = std::stod(c[10]);
      r.iterations = std::stoi(c[11]);
      r.converged = c[12] == "1";
      r.message = c[13];
      f.rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("results file: unparsable value on line " + std::to_string(line_no));
    }
  }
  return f;
}

std::vector<PlotRow> plot_rows(const std::vector<SummaryRow>& summary, double k_level) {
  std::vector<PlotRow> out;
  for (const auto& s : summary) {
    if (s.k_level != k_level || s.n == 0) continue;
    out.push_back({s.p_hris_dbm, s.scheme, s.mean_mse, s.ci_low, s.ci_high});
  }
  std::sort(out.begin(), out.end(), [](const PlotRow& a, const PlotRow& b) {
    return std::tie(a.scheme, a.budget_dbm) < std::tie(b.scheme, b.budget_dbm);
  });
  return out;
}

void write_plot_csv(std::ostream& out, const std::string& hash, const std::vector<PlotRow>& rows) {
  out << "# manifest_hash=" << hash << '\n' << "budget_dbm,scheme,mean_mse,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << num(r.budget_dbm) << ',' << r.scheme << ',' << num(r.mean_mse) << ',' << num(r.ci_low) << ','
        << num(r.ci_high) << '\n';
  }
}

}  // namespace hris
