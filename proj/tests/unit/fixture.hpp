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

#ifndef HRIS_TESTS_FIXTURE_HPP
#define HRIS_TESTS_FIXTURE_HPP

#include <gtest/gtest.h>

#include "hris/channel.hpp"
#include "hris/system_model.hpp"

namespace hris::test {

using namespace std::complex_literals;

// Hand-written instance: N_R = 3, N = 2, L = 2, B = 2. The frozen numbers in
// the tests below come from a separate numpy evaluation of the same model.
inline ChannelSet hand_channels() {
  ChannelSet ch;
  ch.h_d = CVector(3);
  ch.h_d << 0.3 + 0.1i, -0.2 + 0.4i, 0.5 - 0.3i;
  ch.h_r = CVector(2);
  ch.h_r << 0.7 - 0.2i, -0.1 + 0.6i;
  ch.g = CMatrix(2, 3);
  ch.g << 0.2 + 0.3i, -0.4 + 0.1i, 0.1 - 0.5i, 0.6 - 0.1i, 0.3 + 0.2i, -0.2 - 0.2i;
  return ch;
}

inline SystemParams hand_params() {
  SystemParams p;
  p.n_r = 3;
  p.l = 2;
  p.n = 2;
  p.b_bits = 2;
  p.p = 1.0;
  p.k_t = 0.1;
  p.k_r = 0.05;
  p.sigma_a2 = 0.01;
  p.sigma_b2 = 0.02;
  p.p_hris = 10.0;
  p.mu_min = 2.0;
  return p;
}

inline HrisConfig hand_hris() {
  HrisConfig c;
  c.phase_idx = {1, 3};
  c.gamma = RVector(2);
  c.gamma << 1.0, 0.0;
  c.mu = 1.5;
  return c;
}

inline AntennaSelection hand_antennas() { return AntennaSelection{{2, 0}}; }

inline CVector hand_w() {
  CVector w(2);
  w << 0.4 - 0.1i, -0.3 + 0.2i;
  return w;
}

inline SystemParams small_params(Index n_r, Index l, Index n, int b_bits) {
  SystemParams p;
  p.n_r = n_r;
  p.l = l;
  p.n = n;
  p.b_bits = b_bits;
  return p;
}

inline CMatrix random_complex(Index rows, Index cols, std::uint64_t seed) {
  CounterRng rng(seed);
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace hris::test

#endif  // HRIS_TESTS_FIXTURE_HPP
