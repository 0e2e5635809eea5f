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

#include <cmath>
#include <numbers>
#include <sstream>

#include "hris/params.hpp"

namespace hris {

double epsilon_b(int b_bits) {
  if (b_bits < 1) {
    throw ContractViolation("epsilon_b: b_bits must be >= 1");
  }
  const double x = std::numbers::pi / std::ldexp(1.0, b_bits);
  return std::sin(x) / x;
}

std::vector<std::string> SystemParams::violations() const {
  std::vector<std::string> out;
  auto require = [&](bool ok, const char* msg) {
    if (!ok) out.emplace_back(msg);
  };
  require(n_r >= 1, "n_r must be >= 1");
  require(l >= 1, "l must be >= 1");
  require(l < n_r, "l must be smaller than n_r");
  require(n >= 0, "n must be >= 0");
  require(b_bits >= 1, "b_bits must be >= 1");
  require(b_bits <= 16, "b_bits must be <= 16 (phase alphabet is enumerated)");
  require(k_t >= 0.0, "k_t must be >= 0");
  require(k_r >= 0.0, "k_r must be >= 0");
  require(mu_min >= 1.0, "mu_min must be >= 1");
  require(p > 0.0, "p must be > 0");
  require(sigma_a2 > 0.0, "sigma_a2 must be > 0");
  require(sigma_b2 > 0.0, "sigma_b2 must be > 0");
  require(p_hris > 0.0, "p_hris must be > 0");
  return out;
}

void SystemParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::ostringstream msg;
  msg << "invalid system parameters:";
  for (const auto& s : v) msg << "\n  - " << s;
  throw ContractViolation(msg.str());
}

}  // namespace hris
