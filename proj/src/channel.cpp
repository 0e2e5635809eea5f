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

#include "hris/channel.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace hris {

void Geometry::validate() const {
  if (!(d_rb() > 0.0) || !(d_ur() > 0.0) || !(d_ub() > 0.0)) {
    throw ContractViolation("geometry: nodes must be at distinct positions");
  }
}

double FadingParams::los_fraction() const {
  if (interpretation == RicianInterpretation::kKFactor) {
    return rician_factor / (1.0 + rician_factor);
  }
  return rician_factor;
}

void FadingParams::validate() const {
  if (!(alpha_rb > 0.0 && alpha_ur > 0.0 && alpha_ub > 0.0)) {
    throw ContractViolation("fading: path-loss exponents must be > 0");
  }
  if (!std::isfinite(beta0_db)) {
    throw ContractViolation("fading: beta0_db must be finite");
  }
  const double k = los_fraction();
  if (!(k >= 0.0 && k < 1.0)) {
    throw ContractViolation("fading: line-of-sight fraction must lie in [0, 1)");
  }
}

double path_loss(double d, double alpha, double beta0_db) {
  if (!(d > 0.0)) {
    throw ContractViolation("path_loss: distance must be > 0");
  }
  return db_to_linear(beta0_db) * std::pow(d, -alpha);
}

CVector gen_rayleigh(Index len, double variance_scale, CounterRng& rng) {
  if (variance_scale < 0.0) throw ContractViolation("gen_rayleigh: negative variance");
  CVector out(len);
  for (Index i = 0; i < len; ++i) out(i) = rng.complex_normal(variance_scale);
  return out;
}

CMatrix gen_rayleigh(Index rows, Index cols, double variance_scale, CounterRng& rng) {
  if (variance_scale < 0.0) throw ContractViolation("gen_rayleigh: negative variance");
  CMatrix out(rows, cols);
  // Row-major draw order keeps the file layout and the draw sequence aligned.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = rng.complex_normal(variance_scale);
  return out;
}

namespace {

void check_kappa(double kappa, double variance_scale) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw ContractViolation("gen_rician: kappa must lie in [0, 1)");
  if (variance_scale < 0.0) throw ContractViolation("gen_rician: negative variance");
}

}  // namespace

CVector gen_rician(const CVector& los, double kappa, double variance_scale, CounterRng& rng) {
  check_kappa(kappa, variance_scale);
  const CVector nlos = gen_rayleigh(los.size(), 1.0, rng);
  return std::sqrt(variance_scale) * (std::sqrt(kappa) * los + std::sqrt(1.0 - kappa) * nlos);
}

CMatrix gen_rician(const CMatrix& los, double kappa, double variance_scale, CounterRng& rng) {
  check_kappa(kappa, variance_scale);
  const CMatrix nlos = gen_rayleigh(los.rows(), los.cols(), 1.0, rng);
  return std::sqrt(variance_scale) * (std::sqrt(kappa) * los + std::sqrt(1.0 - kappa) * nlos);
}

CVector ula_steering(Index len, double angle) {
  CVector out(len);
  const double s = std::sin(angle);
  for (Index k = 0; k < len; ++k) out(k) = std::polar(1.0, std::numbers::pi * static_cast<double>(k) * s);
  return out;
}

namespace {

double azimuth(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
  const Eigen::Vector3d d = to - from;
  return std::atan2(d.y(), d.x());
}

}  // namespace

ChannelSet gen_channel_set(const Geometry& geometry, const FadingParams& fading, const SystemParams& params,
                           std::uint64_t seed) {
  geometry.validate();
  fading.validate();
  const CounterRng root(seed);
  CounterRng rng_d = root.substream(Stream::kDirectChannel);
  CounterRng rng_r = root.substream(Stream::kReflectChannel);
  CounterRng rng_g = root.substream(Stream::kBsRisChannel);

  const double kappa = fading.los_fraction();
  const double pl_ub = path_loss(geometry.d_ub(), fading.alpha_ub, fading.beta0_db);
  const double pl_ur = path_loss(geometry.d_ur(), fading.alpha_ur, fading.beta0_db);
  const double pl_rb = path_loss(geometry.d_rb(), fading.alpha_rb, fading.beta0_db);

  ChannelSet out;
  out.seed = seed;
  out.h_d = gen_rayleigh(params.n_r, pl_ub, rng_d);

  const CVector los_r = ula_steering(params.n, azimuth(geometry.ris, geometry.user));
  out.h_r = gen_rician(los_r, kappa, pl_ur, rng_r);

  const CVector a_ris = ula_steering(params.n, azimuth(geometry.ris, geometry.bs));
  const CVector a_bs = ula_steering(params.n_r, azimuth(geometry.bs, geometry.ris));
  const CMatrix los_g = a_ris * a_bs.adjoint();
  out.g = gen_rician(los_g, kappa, pl_rb, rng_g);
  return out;
}

namespace {

constexpr std::array<char, 8> kMagic{'H', 'R', 'I', 'S', 'C', 'H', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_f64(std::ostream& out, double x) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &x, sizeof bits);
  put_u64(out, bits);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) throw std::runtime_error("channel file: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw std::runtime_error("channel file: truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double x = 0.0;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

void put_c(std::ostream& out, const Complex& z) {
  put_f64(out, z.real());
  put_f64(out, z.imag());
}

Complex get_c(std::istream& in) {
  const double re = get_f64(in);
  const double im = get_f64(in);
  return {re, im};
}

}  // namespace

void write_channel_file(std::ostream& out, const ChannelSet& channels) {
  if (channels.g.rows() != channels.n() || channels.g.cols() != channels.n_r()) {
    throw ContractViolation("write_channel_file: inconsistent channel dimensions");
  }
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(channels.n_r()));
  put_u32(out, static_cast<std::uint32_t>(channels.n()));
  put_u64(out, channels.seed);
  for (Index i = 0; i < channels.n_r(); ++i) put_c(out, channels.h_d(i));
  for (Index i = 0; i < channels.n(); ++i) put_c(out, channels.h_r(i));
  for (Index i = 0; i < channels.g.rows(); ++i)
    for (Index j = 0; j < channels.g.cols(); ++j) put_c(out, channels.g(i, j));
  if (!out) throw std::runtime_error("channel file: write failed");
}

ChannelSet read_channel_file(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("channel file: bad magic");
  }
  const Index n_r = get_u32(in);
  const Index n = get_u32(in);
  ChannelSet out;
  out.seed = get_u64(in);
  out.h_d.resize(n_r);
  out.h_r.resize(n);
  out.g.resize(n, n_r);
  for (Index i = 0; i < n_r; ++i) out.h_d(i) = get_c(in);
  for (Index i = 0; i < n; ++i) out.h_r(i) = get_c(in);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n_r; ++j) out.g(i, j) = get_c(in);
  return out;
}

void save_channels(const std::string& path, const ChannelSet& channels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  write_channel_file(out, channels);
}

ChannelSet load_channels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_channel_file(in);
}

}  // namespace hris
