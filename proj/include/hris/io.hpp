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

#ifndef HRIS_IO_HPP
#define HRIS_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hris/bench.hpp"

namespace hris {

/// CSV layouts. Every file starts with a `# manifest_hash=<hex>` line.
/// Doubles are written with 17 significant digits so files round-trip.

std::string results_header();
std::string results_row(const TrialResult& r);
void write_results_csv(std::ostream& out, const std::string& hash, const std::vector<TrialResult>& rows);
void write_timings_csv(std::ostream& out, const std::string& hash, const std::vector<TrialResult>& rows);
void write_summary_csv(std::ostream& out, const std::string& hash, const std::vector<SummaryRow>& rows);

struct ResultsFile {
  std::string hash;
  std::vector<TrialResult> rows;
};

/// Throws std::runtime_error on malformed input.
ResultsFile read_results_csv(std::istream& in);

struct PlotRow {
  double budget_dbm = 0.0;
  std::string scheme;
  double mean_mse = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Plot series for one impairment level, sorted by (scheme, budget).
std::vector<PlotRow> plot_rows(const std::vector<SummaryRow>& summary, double k_level);
void write_plot_csv(std::ostream& out, const std::string& hash, const std::vector<PlotRow>& rows);

}  // namespace hris

#endif  // HRIS_IO_HPP
