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

#include "hris/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace hris {

namespace {

SweepSpec base_sweep() {
  SweepSpec s;
  for (const char* name : {"active", "dhris", "dhris_noas", "fhris", "nhris", "passive"}) {
    s.schemes.push_back(Scheme::parse(name));
  }
  s.p_hris_grid_dbm = {-60.0, -45.0, -30.0, -15.0, 0.0};
  for (std::uint64_t i = 0; i < 50; ++i) s.seeds.push_back(i);
  return s;
}

}  // namespace

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  c.preset = name;
  c.sweep = base_sweep();
  SystemParams& sys = c.sweep.system;
  if (name == "paper") {
    sys.n_r = 32;
    sys.l = 8;
    sys.n = 64;
  } else if (name == "desk") {
    sys.n_r = 16;
    sys.l = 4;
    sys.n = 32;
  } else if (name == "tiny") {
    sys.n_r = 4;
    sys.l = 2;
    sys.n = 3;
    sys.b_bits = 1;
    c.sweep.p_hris_grid_dbm = {-50.0, -30.0};
    c.sweep.seeds = {0, 1, 2};
    c.sweep.empirical_samples = 10000;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected paper, desk or tiny)");
  }
  c.fhris_active = std::max<Index>(1, sys.n / 4);
  return c;
}

std::vector<std::string> RunConfig::violations() const {
  std::vector<std::string> out;
  for (auto& v : sweep.system.violations()) out.push_back("system: " + v);
  try {
    sweep.geometry.validate();
  } catch (const std::exception& e) {
    out.push_back(std::string("geometry: ") + e.what());
  }
  try {
    sweep.fading.validate();
  } catch (const std::exception& e) {
    out.push_back(std::string("fading: ") + e.what());
  }
  for (auto& v : sweep.pebcd.violations()) out.push_back(v);
  if (sweep.schemes.empty()) out.emplace_back("schemes must not be empty");
  if (sweep.p_hris_grid_dbm.empty()) out.emplace_back("p_hris_grid_dbm must not be empty");
  if (sweep.seeds.empty()) out.emplace_back("seeds must not be empty");
  for (double k : sweep.impairment_levels) {
    if (k < 0.0) out.emplace_back("impairment_levels entries must be >= 0");
  }
  if (fhris_active < 0 || fhris_active > sweep.system.n) out.emplace_back("fhris.n_active must lie in [0, system.n]");
  if (sweep.empirical_samples < 0) out.emplace_back("empirical_samples must be >= 0");
  if (sweep.threads < 1) out.emplace_back("threads must be >= 1");
  if (output_dir.empty()) out.emplace_back("output_dir must not be empty");
  return out;
}

void RunConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& s : v) msg += "\n  " + s;
  throw ConfigError(msg);
}

namespace {

class Decoder {
 public:
  std::vector<std::string> errors;

  void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
    if (!node.IsMap()) {
      errors.push_back(where + ": expected a mapping" + line_of(node));
      return;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        errors.push_back("unknown key '" + (where.empty() ? key : where + "." + key) + "'" + line_of(kv.first));
      }
    }
  }

  template <typename T>
  void get(const YAML::Node& node, const std::string& key, const std::string& where, T& dst) {
    const YAML::Node v = node[key];
    if (!v.IsDefined() || v.IsNull()) return;
    try {
      dst = v.as<T>();
    } catch (const YAML::Exception&) {
      errors.push_back(where + "." + key + ": cannot convert value" + line_of(v));
    }
  }

  static std::string line_of(const YAML::Node& n) {
    const auto mark = n.Mark();
    if (mark.line < 0) return "";
    return " (line " + std::to_string(mark.line + 1) + ")";
  }
};

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t idx, const YAML::Node& value) {
  if (idx + 1 == parts.size()) {
    node[parts[idx]] = value;
    return;
  }
  if (!node[parts[idx]].IsMap()) node[parts[idx]] = YAML::Node(YAML::NodeType::Map);
  set_path(node[parts[idx]], parts, idx + 1, value);
}

void apply_override(YAML::Node& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + spec + "' is not key=value");
  std::vector<std::string> parts;
  std::stringstream key(spec.substr(0, eq));
  for (std::string part; std::getline(key, part, '.');) {
    if (part.empty()) throw ConfigError("override '" + spec + "' has an empty key segment");
    parts.push_back(part);
  }
  YAML::Node value;
  try {
    value = YAML::Load(spec.substr(eq + 1));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("override '" + spec + "': " + e.msg);
  }
  set_path(root, parts, 0, value);
}

void decode_vec3(Decoder& d, const YAML::Node& node, const std::string& where, Eigen::Vector3d& dst) {
  if (!node.IsDefined() || node.IsNull()) return;
  try {
    const auto v = node.as<std::vector<double>>();
    if (v.size() != 3) throw YAML::Exception(node.Mark(), "need three coordinates");
    dst = Eigen::Vector3d(v[0], v[1], v[2]);
  } catch (const YAML::Exception&) {
    d.errors.push_back(where + ": expected [x, y, z]" + Decoder::line_of(node));
  }
}

RunConfig decode(const YAML::Node& root) {
  Decoder d;
  std::string preset = "paper";
  if (root["preset"]) d.get(root, "preset", "", preset);
  RunConfig c = preset_config(preset);
  d.check_keys(root, "",
               {"preset", "output_dir", "threads", "system", "geometry", "fading", "schemes", "fhris",
                "p_hris_grid_dbm", "impairment_levels", "seeds", "pebcd", "empirical_samples"});
  d.get(root, "output_dir", "", c.output_dir);
  d.get(root, "threads", "", c.sweep.threads);
  d.get(root, "empirical_samples", "", c.sweep.empirical_samples);

  SystemParams& sys = c.sweep.system;
  if (const YAML::Node s = root["system"]; s.IsDefined() && !s.IsNull()) {
    d.check_keys(s, "system",
                 {"n_r", "l", "n", "b_bits", "p_dbm", "k_t", "k_r", "sigma_a2_dbm", "sigma_b2_dbm", "mu_min",
                  "ideal_phase"});
    if (s.IsMap()) {
      d.get(s, "n_r", "system", sys.n_r);
      d.get(s, "l", "system", sys.l);
      d.get(s, "n", "system", sys.n);
      d.get(s, "b_bits", "system", sys.b_bits);
      d.get(s, "k_t", "system", sys.k_t);
      d.get(s, "k_r", "system", sys.k_r);
      d.get(s, "mu_min", "system", sys.mu_min);
      d.get(s, "ideal_phase", "system", sys.ideal_phase);
      double dbm = watt_to_dbm(sys.p);
      d.get(s, "p_dbm", "system", dbm);
      sys.p = dbm_to_watt(dbm);
      dbm = watt_to_dbm(sys.sigma_a2);
      d.get(s, "sigma_a2_dbm", "system", dbm);
      sys.sigma_a2 = dbm_to_watt(dbm);
      dbm = watt_to_dbm(sys.sigma_b2);
      d.get(s, "sigma_b2_dbm", "system", dbm);
      sys.sigma_b2 = dbm_to_watt(dbm);
    }
  }
  // An explicit N without an explicit F-HRIS size keeps the N/4 default.
  if (!root["fhris"] || !root["fhris"]["n_active"]) c.fhris_active = std::max<Index>(1, sys.n / 4);

  if (const YAML::Node g = root["geometry"]; g.IsDefined() && !g.IsNull()) {
    d.check_keys(g, "geometry", {"bs", "ris", "user"});
    if (g.IsMap()) {
      decode_vec3(d, g["bs"], "geometry.bs", c.sweep.geometry.bs);
      decode_vec3(d, g["ris"], "geometry.ris", c.sweep.geometry.ris);
      decode_vec3(d, g["user"], "geometry.user", c.sweep.geometry.user);
    }
  }

  if (const YAML::Node f = root["fading"]; f.IsDefined() && !f.IsNull()) {
    d.check_keys(f, "fading",
                 {"beta0_db", "alpha_rb", "alpha_ur", "alpha_ub", "rician_factor", "rician_interpretation"});
    if (f.IsMap()) {
      FadingParams& fp = c.sweep.fading;
      d.get(f, "beta0_db", "fading", fp.beta0_db);
      d.get(f, "alpha_rb", "fading", fp.alpha_rb);
      d.get(f, "alpha_ur", "fading", fp.alpha_ur);
      d.get(f, "alpha_ub", "fading", fp.alpha_ub);
      d.get(f, "rician_factor", "fading", fp.rician_factor);
      std::string interp;
      d.get(f, "rician_interpretation", "fading", interp);
      if (interp == "fraction") {
        fp.interpretation = RicianInterpretation::kFraction;
      } else if (interp == "kfactor") {
        fp.interpretation = RicianInterpretation::kKFactor;
      } else if (!interp.empty()) {
        d.errors.push_back("fading.rician_interpretation must be fraction or kfactor");
      }
    }
  }

  if (const YAML::Node f = root["fhris"]; f.IsDefined() && !f.IsNull()) {
    d.check_keys(f, "fhris", {"n_active", "placement"});
    if (f.IsMap()) {
      d.get(f, "n_active", "fhris", c.fhris_active);
      std::string placement;
      d.get(f, "placement", "fhris", placement);
      if (placement == "first") {
        c.fhris_placement = Placement::kFirst;
      } else if (placement == "strongest") {
        c.fhris_placement = Placement::kStrongest;
      } else if (!placement.empty()) {
        d.errors.push_back("fhris.placement must be first or strongest");
      }
    }
  }

  if (root["schemes"]) {
    std::vector<std::string> names;
    d.get(root, "schemes", "", names);
    c.sweep.schemes.clear();
    for (const auto& n : names) {
      try {
        c.sweep.schemes.push_back(Scheme::parse(n));
      } catch (const std::exception& e) {
        d.errors.push_back(std::string("schemes: ") + e.what());
      }
    }
  }
  d.get(root, "p_hris_grid_dbm", "", c.sweep.p_hris_grid_dbm);
  d.get(root, "impairment_levels", "", c.sweep.impairment_levels);

  if (const YAML::Node s = root["seeds"]; s.IsDefined() && !s.IsNull()) {
    if (s.IsSequence()) {
      d.get(root, "seeds", "", c.sweep.seeds);
    } else {
      d.check_keys(s, "seeds", {"base", "count"});
      std::uint64_t base = 0;
      std::uint64_t count = c.sweep.seeds.size();
      if (s.IsMap()) {
        d.get(s, "base", "seeds", base);
        d.get(s, "count", "seeds", count);
      }
      c.sweep.seeds.clear();
      for (std::uint64_t i = 0; i < count; ++i) c.sweep.seeds.push_back(base + i);
    }
  }

  if (const YAML::Node p = root["pebcd"]; p.IsDefined() && !p.IsNull()) {
    d.check_keys(p, "pebcd",
                 {"rho0", "rho_growth", "t_penalty", "eps_outer", "max_outer", "qp_tol", "qp_max_iter",
                  "init_jitter", "mode_snap"});
    if (p.IsMap()) {
      PebcdOptions& o = c.sweep.pebcd;
      d.get(p, "rho0", "pebcd", o.rho0);
      d.get(p, "rho_growth", "pebcd", o.rho_growth);
      d.get(p, "t_penalty", "pebcd", o.t_penalty);
      d.get(p, "eps_outer", "pebcd", o.eps_outer);
      d.get(p, "max_outer", "pebcd", o.max_outer);
      d.get(p, "qp_tol", "pebcd", o.qp_tol);
      d.get(p, "qp_max_iter", "pebcd", o.qp_max_iter);
      d.get(p, "init_jitter", "pebcd", o.init_jitter);
      d.get(p, "mode_snap", "pebcd", o.mode_snap);
    }
  }

  for (auto& s : c.sweep.schemes) {
    if (s.kind == SchemeKind::kFhris) {
      s.n_active_fixed = c.fhris_active;
      s.placement = c.fhris_placement;
    }
  }
  for (auto& v : c.violations()) d.errors.push_back(v);
  if (!d.errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : d.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (root.IsNull() || !root.IsDefined()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("configuration root must be a mapping");
  for (const auto& o : overrides) apply_override(root, o);
  return decode(root);
}

RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), overrides);
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

template <typename T>
std::string list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      s += num(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s + "]";
}

std::string vec3(const Eigen::Vector3d& v) { return "[" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + "]"; }

}  // namespace

std::string canonical_config(const RunConfig& c) {
  const SweepSpec& s = c.sweep;
  const SystemParams& p = s.system;
  const PebcdOptions& o = s.pebcd;
  std::ostringstream out;
  out << "preset: " << c.preset << "\n";
  out << "system:\n"
      << "  n_r: " << p.n_r << "\n  l: " << p.l << "\n  n: " << p.n << "\n  b_bits: " << p.b_bits
      << "\n  p_dbm: " << num(watt_to_dbm(p.p)) << "\n  k_t: " << num(p.k_t) << "\n  k_r: " << num(p.k_r)
      << "\n  sigma_a2_dbm: " << num(watt_to_dbm(p.sigma_a2)) << "\n  sigma_b2_dbm: " << num(watt_to_dbm(p.sigma_b2))
      << "\n  mu_min: " << num(p.mu_min) << "\n  ideal_phase: " << (p.ideal_phase ? "true" : "false") << "\n";
  out << "geometry:\n  bs: " << vec3(s.geometry.bs) << "\n  ris: " << vec3(s.geometry.ris)
      << "\n  user: " << vec3(s.geometry.user) << "\n";
  out << "fading:\n  beta0_db: " << num(s.fading.beta0_db) << "\n  alpha_rb: " << num(s.fading.alpha_rb)
      << "\n  alpha_ur: " << num(s.fading.alpha_ur) << "\n  alpha_ub: " << num(s.fading.alpha_ub)
      << "\n  rician_factor: " << num(s.fading.rician_factor) << "\n  rician_interpretation: "
      << (s.fading.interpretation == RicianInterpretation::kFraction ? "fraction" : "kfactor") << "\n";
  std::vector<std::string> names;
  for (const auto& sc : s.schemes) names.push_back(sc.name());
  out << "schemes: [";
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << names[i];
  out << "]\n";
  out << "fhris:\n  n_active: " << c.fhris_active
      << "\n  placement: " << (c.fhris_placement == Placement::kFirst ? "first" : "strongest") << "\n";
  out << "p_hris_grid_dbm: " << list(s.p_hris_grid_dbm) << "\n";
  out << "impairment_levels: " << list(s.impairment_levels) << "\n";
  out << "seeds: " << list(s.seeds) << "\n";
  out << "pebcd:\n  rho0: " << num(o.rho0) << "\n  rho_growth: " << num(o.rho_growth)
      << "\n  t_penalty: " << o.t_penalty << "\n  eps_outer: " << num(o.eps_outer)
      << "\n  max_outer: " << o.max_outer << "\n  qp_tol: " << num(o.qp_tol) << "\n  qp_max_iter: " << o.qp_max_iter
      << "\n  init_jitter: " << num(o.init_jitter) << "\n  mode_snap: " << (o.mode_snap ? "true" : "false") << "\n";
  out << "empirical_samples: " << s.empirical_samples << "\n";
  return out.str();
}

std::string manifest_hash(const RunConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hris
