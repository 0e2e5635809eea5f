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

#ifndef HRIS_RNG_HPP
#define HRIS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace hris {

/// Substream identifiers. Each trial seed fans out into independent streams so
/// that, e.g., adding a channel draw never shifts the phase-noise sequence.
enum class Stream : std::uint64_t {
  kDirectChannel = 1,
  kReflectChannel = 2,
  kBsRisChannel = 3,
  kPhaseNoise = 4,
  kSignalNoise = 5,
  kInit = 6,
  kConfigDraw = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based 64-bit generator: output n is mix64(key + (n+1) * golden).
///
/// Stateless apart from the counter, so streams are cheap to fork and jump.
/// Normals are drawn with Box-Muller here rather than std::normal_distribution
/// so that sequences are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Independent generator keyed by (this key, id).
  CounterRng substream(std::uint64_t id) const {
    CounterRng out(0);
    out.key_ = mix64(key_ ^ mix64(id + 0x3c6ef372fe94f82bULL));
    return out;
  }
  CounterRng substream(Stream s) const { return substream(static_cast<std::uint64_t>(s)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0) {
    const double s = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hris

#endif  // HRIS_RNG_HPP
