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

#include "qep/unsupervised.hpp"

#include <cmath>
#include <string>

#include "qep/adam.hpp"

namespace qep {

ParameterizedHamiltonian build_correlator_chain(const CorrelatorSetup& setup, double g_zz,
                                                double g_x) {
  const int n = setup.chain_length;
  auto h = build_cluster_ising(setup.g_zxz, g_zz, g_x, n, setup.boundary,
                               {ParameterRole::Input, ParameterRole::Trainable,
                                ParameterRole::Trainable});
  const auto [a, b] = setup.observable_sites;
  h.add_output("xx", PauliSum(1.0, PauliString::on_sites(
                                       n, {{a, PauliLetter::X}, {b, PauliLetter::X}})));
  return h;
}

namespace {

ShotModel shot_model(const CorrelatorSetup& s, std::uint64_t seed) {
  return s.shots ? ShotModel::finite(*s.shots, seed) : ShotModel::infinite(seed);
}

std::uint64_t step_seed(std::uint64_t master, int step, std::uint64_t point) {
  Rng r = make_stream(master, {stream::kShots, static_cast<std::uint64_t>(step), point});
  return r();
}

// Trainable order in build_correlator_chain is (g_zz, g_x).
constexpr std::size_t kZZ = 0;
constexpr std::size_t kX = 1;

struct FreePoint {
  ParameterizedHamiltonian h{1};
  GroundStateResult gs;
  ShotModel shots = ShotModel::infinite();
  double y = 0.0;
};

FreePoint solve_free(const CorrelatorSetup& setup, double g_zz, double g_x, std::uint64_t seed,
                     const GroundStateResult* warm) {
  FreePoint p{build_correlator_chain(setup, g_zz, g_x), {}, shot_model(setup, seed), 0.0};
  LanczosOptions opts = setup.lanczos;
  if (warm && warm->state.dim() == p.h.dim()) opts.warm_start = warm;
  p.gs = ground_state(assemble(p.h), opts);
  Rng out_rng = make_stream(seed, {stream::kShots, 3});
  const PauliSum& xx = p.h.outputs().front().op;
  p.y = noisy_expectation(p.gs.expectation(xx),
                          p.shots.is_infinite() ? 0.0 : p.gs.second_moment(xx), p.shots,
                          out_rng);
  return p;
}

// eps * dy/d(g_zz, g_x).
std::array<double, 2> nudged_response(const CorrelatorSetup& setup, const FreePoint& p,
                                      double eps) {
  if (eps == 0.0) return {0.0, 0.0};
  const auto g = qep_gradient(p.h, p.gs, ErrorSignal{{eps}},
                              NudgeScheme(setup.scheme, setup.beta), p.shots, setup.lanczos);
  return {g.values[kZZ], g.values[kX]};
}

void validate(const CorrelatorSetup& s) {
  static_cast<void>(NudgeScheme(s.scheme, s.beta));
  if (!(s.learning_rate >= 0.0)) throw std::invalid_argument("lr >= 0 required");
  if (s.steps < 0) throw std::invalid_argument("steps >= 0 required");
  if (s.shots && *s.shots < 1) throw std::invalid_argument("shots >= 1 required");
  const auto [a, b] = s.observable_sites;
  if (a == b || a < 0 || b < 0 || a >= s.chain_length || b >= s.chain_length) {
    throw std::invalid_argument("observable sites must be distinct chain sites");
  }
}

double sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

Trajectory explore_phase(const ExploreConfig& config) {
  const auto& s = config.setup;
  validate(s);
  const NudgeScheme scheme(s.scheme, s.beta);
  const std::uint64_t solves_before = equilibration_count();
  Trajectory traj;
  traj.experiment = "explore-phase";
  traj.seed = s.seed;
  traj.param_labels = {"g_x", "g_zz"};
  traj.output_labels = {"xx"};

  std::vector<double> params{config.g_x, config.g_zz};
  AdamState adam = AdamState::create(2, s.learning_rate);
  GroundStateResult warm;
  try {
    for (int step = 0; step <= s.steps; ++step) {
      const auto h = build_correlator_chain(s, params[1], params[0]);
      LanczosOptions opts = s.lanczos;
      if (step > 0) opts.warm_start = &warm;
      GroundStateResult free_phase = ground_state(assemble(h), opts);
      const ShotModel shots = shot_model(s, step_seed(s.seed, step, 0));
      const double y = free_phase.expectation(h.outputs().front().op);
      const auto g = qep_gradient(h, free_phase, ErrorSignal{{-1.0}}, scheme, shots, s.lanczos);
      const std::vector<double> grad{g.values[kX], g.values[kZZ]};

      TrajectoryRecord rec;
      rec.step = step;
      rec.loss = -y;
      rec.grad_norm = std::hypot(grad[0], grad[1]);
      rec.outputs = {y};
      rec.params = params;
      traj.append(std::move(rec));
      warm = std::move(free_phase);
      if (step == s.steps) break;
      auto [next, updated] = adam_step(adam, grad, params);
      adam = std::move(next);
      params = std::move(updated);
    }
  } catch (const std::exception& e) {
    traj.complete = false;
    traj.failure = e.what();
  }
  traj.equilibrations = equilibration_count() - solves_before;
  return traj;
}

SensitivityGradient sensitivity_gradient(const CorrelatorSetup& setup,
                                         const SensitivityState& state, std::uint64_t shot_seed,
                                         std::array<GroundStateResult, 2>* warm) {
  const double dg = state.g_x_1 - state.g_x_2;
  if (std::abs(dg) < 1e-6) {
    throw DegenerateQuotientError("probe fields coincide: |g_x_1 - g_x_2| < 1e-6");
  }
  Rng seeder = make_stream(shot_seed, {stream::kShots});
  const std::uint64_t seed1 = seeder();
  const std::uint64_t seed2 = seeder();
  const auto p1 = solve_free(setup, state.g_zz, state.g_x_1, seed1, warm ? &(*warm)[0] : nullptr);
  const auto p2 = solve_free(setup, state.g_zz, state.g_x_2, seed2, warm ? &(*warm)[1] : nullptr);
  const double s = sign(p1.y - p2.y);

  SensitivityGradient out;
  out.y1 = p1.y;
  out.y2 = p2.y;
  out.loss = -std::abs((p1.y - p2.y) / dg);
  const double inv = 1.0 / std::abs(dg);
  const auto r1 = nudged_response(setup, p1, -s);
  const auto r2 = nudged_response(setup, p2, s);
  out.grad[0] = r1[kX] * inv - sign(dg) * out.loss * inv;
  out.grad[1] = r2[kX] * inv + sign(dg) * out.loss * inv;
  out.grad[2] = (r1[kZZ] + r2[kZZ]) * inv;
  if (warm) {
    (*warm)[0] = p1.gs;
    (*warm)[1] = p2.gs;
  }
  return out;
}

double sensitivity_loss(const CorrelatorSetup& setup, const SensitivityState& state) {
  auto y = [&](double g_x) {
    const auto h = build_correlator_chain(setup, state.g_zz, g_x);
    LanczosOptions opts = setup.lanczos;
    opts.tol = std::min(opts.tol, 1e-12);
    return ground_state(assemble(h), opts).expectation(h.outputs().front().op);
  };
  return -std::abs((y(state.g_x_1) - y(state.g_x_2)) / (state.g_x_1 - state.g_x_2));
}

Trajectory optimize_sensitivity(const SensitivityConfig& config) {
  const auto& s = config.setup;
  validate(s);
  const std::uint64_t solves_before = equilibration_count();
  Trajectory traj;
  traj.experiment = "optimize-sensitivity";
  traj.seed = s.seed;
  traj.param_labels = {"g_x_1", "g_x_2", "g_zz"};
  traj.output_labels = {"y1", "y2"};

  std::vector<double> params{config.start.g_x_1, config.start.g_x_2, config.start.g_zz};
  AdamState adam = AdamState::create(3, s.learning_rate);
  std::array<GroundStateResult, 2> warm;
  try {
    for (int step = 0; step <= s.steps; ++step) {
      const SensitivityState state{params[0], params[1], params[2]};
      const auto g = sensitivity_gradient(s, state, step_seed(s.seed, step, 0), &warm);
      TrajectoryRecord rec;
      rec.step = step;
      rec.loss = g.loss;
      rec.grad_norm = std::sqrt(g.grad[0] * g.grad[0] + g.grad[1] * g.grad[1] +
                                g.grad[2] * g.grad[2]);
      rec.outputs = {g.y1, g.y2};
      rec.params = params;
      traj.append(std::move(rec));
      if (step == s.steps) break;
      auto [next, updated] = adam_step(adam, g.grad, params);
      adam = std::move(next);
      params = std::move(updated);
    }
  } catch (const std::exception& e) {
    traj.complete = false;
    traj.failure = e.what();
  }
  traj.equilibrations = equilibration_count() - solves_before;
  return traj;
}

}  // namespace qep
