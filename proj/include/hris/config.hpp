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

#ifndef HRIS_CONFIG_HPP
#define HRIS_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hris/bench.hpp"

namespace hris {

/// Resolved experiment configuration. Powers in `sweep.system` are linear;
/// the YAML surface speaks dBm.
struct RunConfig {
  std::string preset = "paper";
  SweepSpec sweep;
  Index fhris_active = 16;
  Placement fhris_placement = Placement::kFirst;
  std::string output_dir = "out";

  std::vector<std::string> violations() const;
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Built-in presets: paper (N_R=32, L=8, N=64), desk (16/4/32) and tiny (4/2/3, B=1).
RunConfig preset_config(const std::string& name);

/// Parses YAML text, applies `key.path=value` overrides on top, fills the rest
/// from the selected preset and validates. Unknown keys and invariant
/// violations raise ConfigError listing every problem found.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

/// Canonical YAML rendering of everything that influences results
/// (thread count and output directory excluded).
std::string canonical_config(const RunConfig& config);

/// FNV-1a 64 of canonical_config, as 16 hex digits.
std::string manifest_hash(const RunConfig& config);

}  // namespace hris

#endif  // HRIS_CONFIG_HPP
