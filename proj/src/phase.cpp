// Copyright 2026 The QEP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qep/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qep/eigensolver.hpp"

namespace qep {

std::string_view to_string(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Cluster: return "cluster";
    case PhaseLabel::Ferromagnetic: return "ferromagnetic";
    case PhaseLabel::Paramagnetic: return "paramagnetic";
  }
  return "?";
}

PhasePoint sample_phase_point(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng);
  double b = u(rng);
  if (a > b) std::swap(a, b);
  return PhasePoint{4.0 * a, 4.0 * (b - a), 4.0 - 4.0 * a - 4.0 * (b - a)};
}

PhasePoint sample_restricted_phase_point(Rng& rng, double radius) {
  if (!(radius > 0.0) || radius > 1.0) {
    throw std::invalid_argument("restricted radius must lie in (0, 1]");
  }
  const double threshold = 4.0 * (1.0 - radius);
  for (;;) {
    const PhasePoint p = sample_phase_point(rng);
    if (std::max({p.g_zxz, p.g_zz, p.g_x}) >= threshold) return p;
  }
}

OrderParameters order_parameters(const PhasePoint& p, int n, Boundary boundary) {
  if (n < 4) throw std::invalid_argument("order parameters need n >= 4");
  const auto chain = build_cluster_ising(p.g_zxz, p.g_zz, p.g_x, n, boundary);
  const auto gs = ground_state(assemble(chain));
  using L = PauliLetter;

  PauliSum x_total(n);
  for (int j = 0; j < n; ++j) x_total.add(1.0, PauliString::on_sites(n, {{j, L::X}}));
  const PauliSum zz(1.0, PauliString::on_sites(n, {{0, L::Z}, {n / 2, L::Z}}));
  std::vector<PauliLetter> letters(static_cast<std::size_t>(n), L::X);
  letters.front() = L::Z;
  letters.back() = L::Z;
  letters[1] = L::Y;
  letters[static_cast<std::size_t>(n - 2)] = L::Y;
  const PauliSum string_op(1.0, PauliString(letters));

  return OrderParameters{std::abs(gs.expectation(x_total)) / n, std::abs(gs.expectation(zz)),
                         std::abs(gs.expectation(string_op))};
}

PhaseLabel phase_label(const PhasePoint& p, int n_label, Boundary boundary) {
  const auto o = order_parameters(p, n_label, boundary);
  if (o.string >= o.ferro && o.string >= o.transverse) return PhaseLabel::Cluster;
  if (o.ferro >= o.transverse) return PhaseLabel::Ferromagnetic;
  return PhaseLabel::Paramagnetic;
}

void LabelMap::validate() const {
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      if (combo[a] == combo[b]) throw std::invalid_argument("label combos must be distinct");
    }
  }
}

}  // namespace qep
