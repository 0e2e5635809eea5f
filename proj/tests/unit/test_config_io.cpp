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

#include <gtest/gtest.h>

#include <sstream>

#include "hris/config.hpp"
#include "hris/io.hpp"

namespace hris {
namespace {

TEST(Config, EmptyTextGivesPaperPreset) {
  const RunConfig c = parse_config_text("");
  const SystemParams& s = c.sweep.system;
  EXPECT_EQ(c.preset, "paper");
  EXPECT_EQ(s.n_r, 32);
  EXPECT_EQ(s.l, 8);
  EXPECT_EQ(s.n, 64);
  EXPECT_EQ(s.b_bits, 2);
  EXPECT_DOUBLE_EQ(s.k_t, 0.08);
  EXPECT_DOUBLE_EQ(s.k_r, 0.08);
  EXPECT_NEAR(s.p, 0.01, 1e-17);
  EXPECT_NEAR(s.sigma_b2, 1e-11, 1e-25);
  EXPECT_NEAR(s.sigma_a2, 1e-11, 1e-25);
  const FadingParams& f = c.sweep.fading;
  EXPECT_DOUBLE_EQ(f.beta0_db, -30.0);
  EXPECT_DOUBLE_EQ(f.alpha_rb, 2.2);
  EXPECT_DOUBLE_EQ(f.alpha_ur, 2.2);
  EXPECT_DOUBLE_EQ(f.alpha_ub, 3.5);
  EXPECT_DOUBLE_EQ(f.rician_factor, 0.75);
  EXPECT_EQ(c.sweep.geometry.bs, Eigen::Vector3d(0, 80, 5));
  EXPECT_EQ(c.sweep.geometry.ris, Eigen::Vector3d(50, 50, 15));
  EXPECT_EQ(c.sweep.geometry.user, Eigen::Vector3d(0, 0, 2));
  EXPECT_EQ(c.sweep.seeds.size(), 50u);
  EXPECT_EQ(c.sweep.schemes.size(), 6u);
}

TEST(Config, PresetsAndOverrides) {
  const RunConfig d = parse_config_text("preset: desk\n");
  EXPECT_EQ(d.sweep.system.n_r, 16);
  EXPECT_EQ(d.sweep.system.l, 4);
  EXPECT_EQ(d.sweep.system.n, 32);
  const RunConfig o = parse_config_text("preset: desk\n", {"system.p_dbm=20", "seeds={base: 10, count: 3}"});
  EXPECT_NEAR(o.sweep.system.p, 0.1, 1e-16);
  EXPECT_EQ(o.sweep.seeds, (std::vector<std::uint64_t>{10, 11, 12}));
}

TEST(Config, TooManyChainsRejected) {
  EXPECT_THROW(parse_config_text("", {"system.l=40", "system.n_r=32"}), ConfigError);
}

TEST(Config, UnknownKeyReportsLine) {
  try {
    parse_config_text("preset: desk\nsystem:\n  n_r: 16\n  antennas: 4\n");
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("antennas"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
  }
}

TEST(Config, ViolationsListedTogether) {
  try {
    parse_config_text("p_hris_grid_dbm: []\nseeds: []\nsystem:\n  k_t: -1\n");
    FAIL() << "invalid config accepted";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("grid"), std::string::npos) << msg;
    EXPECT_NE(msg.find("seeds"), std::string::npos) << msg;
    EXPECT_NE(msg.find("k_t"), std::string::npos) << msg;
  }
}

TEST(Config, MalformedYamlReportsLine) {
  try {
    parse_config_text("system:\n  n_r: [1, 2\n");
    FAIL() << "malformed text accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(Config, CanonicalFormRoundTripsAndHashTracksResults) {
  const RunConfig a = parse_config_text("preset: tiny\n");
  const RunConfig b = parse_config_text(canonical_config(a));
  EXPECT_EQ(canonical_config(a), canonical_config(b));
  EXPECT_EQ(manifest_hash(a), manifest_hash(b));
  EXPECT_EQ(manifest_hash(a).size(), 16u);
  EXPECT_EQ(manifest_hash(a), manifest_hash(parse_config_text("preset: tiny\nthreads: 4\noutput_dir: elsewhere\n")));
  EXPECT_NE(manifest_hash(a), manifest_hash(parse_config_text("preset: tiny\n", {"seeds=[0, 1, 5]"})));
}

TrialResult trial(const std::string& scheme, double dbm, std::uint64_t seed, double mse) {
  TrialResult r;
  r.scheme = scheme;
  r.p_hris_dbm = dbm;
  r.p_hris = dbm_to_watt(dbm);
  r.seed = seed;
  r.mse = mse;
  r.empirical_mse = mse * 1.01;
  r.mu = 1.0 / 3.0;
  r.message = "a, b";
  return r;
}

TEST(ResultsCsv, RoundTripIsExact) {
  const std::vector<TrialResult> rows = {trial("dhris", -30.0, 1, 0.123456789012345678),
                                         trial("passive", -15.0, 2, 0.1 + 0.2)};
  std::stringstream buf;
  write_results_csv(buf, "00ff00ff00ff00ff", rows);
  const ResultsFile f = read_results_csv(buf);
  EXPECT_EQ(f.hash, "00ff00ff00ff00ff");
  ASSERT_EQ(f.rows.size(), 2u);
  EXPECT_EQ(f.rows[0].mse, rows[0].mse);
  EXPECT_EQ(f.rows[1].mse, rows[1].mse);
  EXPECT_EQ(f.rows[0].mu, rows[0].mu);
  EXPECT_EQ(f.rows[0].message, "a; b");

  std::stringstream bad("# manifest_hash=1\n" + results_header() + "\n0.08,dhris,oops\n");
  EXPECT_THROW(read_results_csv(bad), std::runtime_error);
  std::stringstream headless("k_level\n");
  EXPECT_THROW(read_results_csv(headless), std::runtime_error);
}

TEST(PlotRows, TwoSchemesThreeBudgets) {
  std::vector<TrialResult> rows;
  for (const char* s : {"passive", "dhris"})
    for (double b : {0.0, -30.0, -15.0})
      for (std::uint64_t seed : {0u, 1u}) rows.push_back(trial(s, b, seed, 0.5 + 0.01 * double(seed)));
  const auto plot = plot_rows(summarize(rows), 0.0);
  ASSERT_EQ(plot.size(), 6u);
  for (std::size_t i = 1; i < plot.size(); ++i) {
    EXPECT_TRUE(std::tie(plot[i - 1].scheme, plot[i - 1].budget_dbm) < std::tie(plot[i].scheme, plot[i].budget_dbm));
  }
  EXPECT_EQ(plot.front().scheme, "dhris");
  EXPECT_EQ(plot.front().budget_dbm, -30.0);
  EXPECT_NEAR(plot.front().mean_mse, 0.505, 1e-15);
  EXPECT_LT(plot.front().ci_low, plot.front().mean_mse);
}

}  // namespace
}  // namespace hris
