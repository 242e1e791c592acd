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

#include "qep/sweep.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qep/parallel.hpp"

namespace qep {

const SweepCell& NudgeSweepResult::cell(std::optional<int> shots, double beta) const {
  for (const auto& c : cells) {
    if (c.shots == shots && c.beta == beta) return c;
  }
  throw std::out_of_range("no sweep cell for the requested (shots, beta)");
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

std::vector<double> true_gradient(const ParameterizedHamiltonian& h, const SparseOperator& hm,
                                  const GroundStateResult& gs, const ErrorSignal& eps,
                                  const LanczosOptions& lanczos) {
  try {
    return exact_loss_gradient(h, hm, gs, eps);
  } catch (const DegenerateGroundStateError&) {
    const auto jac = parameter_shift_jacobian(h, 1e-4, lanczos);
    std::vector<double> g(jac.front().size(), 0.0);
    for (std::size_t l = 0; l < jac.size(); ++l) {
      for (std::size_t j = 0; j < g.size(); ++j) g[j] += eps.values[l] * jac[l][j];
    }
    return g;
  }
}

std::vector<double> sweep_couplings(const NudgeSweepConfig& config) {
  const std::size_t n = config.setup.parameter_count();
  if (config.couplings) {
    if (config.couplings->size() != n) {
      throw std::invalid_argument("sweep couplings need " + std::to_string(n) + " entries");
    }
    return *config.couplings;
  }
  if (config.warmup_batches < 0) throw std::invalid_argument("warmup_batches must be >= 0");
  if (config.warmup_batches == 0) return initial_couplings(n, config.init_scale, config.seed);
  SupervisedConfig train;
  train.setup = config.setup;
  train.label_chain_length = config.label_chain_length;
  train.batches = config.warmup_batches;
  train.init_scale = config.init_scale;
  train.eval_interval = config.warmup_batches;
  train.patience = 0;
  train.seed = config.seed;
  train.lanczos = config.lanczos;
  const auto run = train_supervised(train);
  if (!run.complete) throw std::runtime_error("sweep warmup training failed: " + run.failure);
  return run.records.back().params;
}

}  // namespace

NudgeSweepResult nudge_sweep(const NudgeSweepConfig& config) {
  if (config.betas.empty() || config.shots.empty()) {
    throw std::invalid_argument("nudge sweep needs at least one beta and one shot count");
  }
  for (double b : config.betas) static_cast<void>(NudgeScheme(config.scheme, b));
  if (config.batches < 1 || config.batch_size < 1) {
    throw std::invalid_argument("batches and batch_size must be >= 1");
  }
  const std::uint64_t solves_before = equilibration_count();
  const auto& setup = config.setup;
  NudgeSweepResult result;
  result.couplings = sweep_couplings(config);
  const auto& theta = result.couplings;
  const std::size_t n_beta = config.betas.size();
  const std::size_t n_shots = config.shots.size();
  for (const auto& m : config.shots) {
    for (double b : config.betas) result.cells.push_back({b, m, {}, 0.0});
  }

  const auto n = static_cast<std::size_t>(config.batch_size);
  for (int batch = 0; batch < config.batches; ++batch) {
    std::vector<PhasePoint> points(n);
    Rng rng = make_stream(config.seed, {stream::kSweep, static_cast<std::uint64_t>(batch)});
    for (auto& p : points) p = sample_phase_point(rng);

    // [sample][cell] gradient estimates and [sample] true gradients.
    std::vector<std::vector<std::vector<double>>> estimates(n);
    std::vector<std::vector<double>> truth(n);
    parallel_for(n, [&](std::size_t i) {
      const auto label = phase_label(points[i], config.label_chain_length, setup.boundary);
      std::vector<double> target(3, 0.0);
      target[static_cast<std::size_t>(label)] = 1.0;
      const auto h = build_classifier(setup, points[i], theta);
      const auto hm = assemble(h);
      const auto free_phase = ground_state(hm, config.lanczos);
      std::vector<double> y;
      for (const auto& o : h.outputs()) y.push_back(free_phase.expectation(o.op));
      truth[i] = true_gradient(h, hm, free_phase, mse_error_signal(y, target), config.lanczos);

      for (std::size_t m = 0; m < n_shots; ++m) {
        Rng seeder = make_stream(config.seed, {stream::kSweep, static_cast<std::uint64_t>(batch),
                                               i, m});
        const std::uint64_t sample_seed = seeder();
        const ShotModel base = config.shots[m] ? ShotModel::finite(*config.shots[m], sample_seed)
                                               : ShotModel::infinite(sample_seed);
        Rng out_rng = make_stream(sample_seed, {stream::kShots, 3});
        std::vector<double> measured;
        for (const auto& o : h.outputs()) {
          const double mean = free_phase.expectation(o.op);
          const double second = base.is_infinite() ? 0.0 : free_phase.second_moment(o.op);
          measured.push_back(noisy_expectation(mean, second, base, out_rng));
        }
        const auto eps = mse_error_signal(measured, target);
        for (std::size_t k = 0; k < n_beta; ++k) {
          const ShotModel shots = base.with_seed(seeder());
          estimates[i].push_back(qep_gradient(h, free_phase, eps,
                                              NudgeScheme(config.scheme, config.betas[k]), shots,
                                              config.lanczos)
                                     .values);
        }
      }
    });

    const std::size_t dim = theta.size();
    std::vector<double> mean_truth(dim, 0.0);
    for (const auto& t : truth) {
      for (std::size_t j = 0; j < dim; ++j) mean_truth[j] += t[j] / static_cast<double>(n);
    }
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
      std::vector<double> mean_est(dim, 0.0);
      for (const auto& e : estimates) {
        for (std::size_t j = 0; j < dim; ++j) mean_est[j] += e[c][j] / static_cast<double>(n);
      }
      result.cells[c].overlaps.push_back(gradient_overlap(mean_est, mean_truth));
    }
  }
  for (auto& c : result.cells) c.median = median(c.overlaps);
  result.equilibrations = equilibration_count() - solves_before;
  return result;
}

}  // namespace qep
