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

#include "qep/supervised.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qep/adam.hpp"
#include "qep/parallel.hpp"

namespace qep {

std::string_view to_string(CouplingSet c) {
  switch (c) {
    case CouplingSet::Full: return "full";
    case CouplingSet::XZ: return "xz";
    case CouplingSet::Z: return "z";
  }
  return "?";
}

CouplingSet coupling_set_from_string(std::string_view text) {
  if (text == "full") return CouplingSet::Full;
  if (text == "xz") return CouplingSet::XZ;
  if (text == "z") return CouplingSet::Z;
  throw std::invalid_argument("unknown coupling set '" + std::string(text) +
                              "' (expected full, xz or z)");
}

std::vector<PauliLetter> chain_letters(CouplingSet c) {
  switch (c) {
    case CouplingSet::Full: return {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
    case CouplingSet::XZ: return {PauliLetter::X, PauliLetter::Z};
    case CouplingSet::Z: return {PauliLetter::Z};
  }
  return {};
}

SensorArchitecture ClassifierSetup::architecture() const {
  return SensorArchitecture{attach_sites, chain_letters(couplings)};
}

std::vector<std::string> classifier_output_labels() {
  return {"p_cluster", "p_ferromagnetic", "p_paramagnetic"};
}

ParameterizedHamiltonian build_classifier(const ClassifierSetup& setup, const PhasePoint& p,
                                          std::span<const double> theta) {
  const auto chain =
      build_cluster_ising(p.g_zxz, p.g_zz, p.g_x, setup.chain_length, setup.boundary);
  auto h = build_sensor_system(chain, setup.architecture(), theta);
  const auto labels = classifier_output_labels();
  for (int k = 0; k < 3; ++k) {
    h.add_output(labels[static_cast<std::size_t>(k)],
                 outcome_projector_sum(setup.labels[static_cast<PhaseLabel>(k)],
                                       setup.sensor_sites(), h.n_sites()));
  }
  return h;
}

std::vector<LabeledPoint> make_test_set(int size, int label_chain_length, Boundary boundary,
                                        std::uint64_t seed) {
  Rng rng = make_stream(seed, {stream::kTestSet});
  std::vector<LabeledPoint> test(static_cast<std::size_t>(size));
  for (auto& t : test) t.point = sample_phase_point(rng);
  parallel_for(test.size(), [&](std::size_t i) {
    test[i].label = phase_label(test[i].point, label_chain_length, boundary);
  });
  return test;
}

std::vector<double> initial_couplings(std::size_t n, double scale, std::uint64_t seed) {
  Rng rng = make_stream(seed, {stream::kInit});
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> theta(n);
  for (auto& t : theta) t = scale > 0.0 ? u(rng) : 0.0;
  return theta;
}

namespace {

std::array<double, 3> label_probabilities(const ClassifierSetup& setup,
                                          const std::array<double, 4>& born) {
  std::array<double, 3> p{};
  for (int k = 0; k < 3; ++k) p[k] = born[setup.labels[static_cast<PhaseLabel>(k)].index()];
  return p;
}

}  // namespace

ClassifierEvaluation evaluate_classifier(const ClassifierSetup& setup,
                                         std::span<const double> theta,
                                         std::span<const LabeledPoint> test, Rng& single_shot_rng,
                                         int votes, const LanczosOptions& lanczos,
                                         std::vector<GroundStateResult>* cache) {
  if (cache && cache->size() != test.size()) cache->resize(test.size());
  std::vector<std::array<double, 4>> born(test.size());
  parallel_for(test.size(), [&](std::size_t i) {
    const auto h = build_classifier(setup, test[i].point, theta);
    LanczosOptions opts = lanczos;
    const bool warm = cache && (*cache)[i].state.dim() == h.dim();
    if (warm) opts.warm_start = &(*cache)[i];
    auto gs = ground_state(assemble(h), opts);
    born[i] = born_probabilities(gs, setup.sensor_sites());
    if (cache) (*cache)[i] = std::move(gs);
  });
  ClassifierEvaluation eval;
  std::vector<int> labels;
  std::vector<OutcomeCombo> combos;
  for (std::size_t i = 0; i < test.size(); ++i) {
    eval.probabilities.push_back(label_probabilities(setup, born[i]));
    labels.push_back(static_cast<int>(test[i].label));
    combos.push_back(setup.labels[test[i].label]);
  }
  eval.many_queries_accuracy = many_queries_accuracy(eval.probabilities, labels);
  eval.single_shot_accuracy = single_shot_accuracy(born, combos, single_shot_rng, votes);
  return eval;
}

std::vector<std::array<double, 6>> probability_grid(const ClassifierSetup& setup,
                                                    std::span<const double> theta,
                                                    int resolution,
                                                    const LanczosOptions& lanczos) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  std::vector<PhasePoint> points;
  for (int a = 0; a <= resolution; ++a) {
    for (int b = 0; a + b <= resolution; ++b) {
      const double s = 4.0 / resolution;
      points.push_back({s * a, s * b, 4.0 - s * a - s * b});
    }
  }
  std::vector<std::array<double, 6>> rows(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const auto h = build_classifier(setup, points[i], theta);
    const auto gs = ground_state(assemble(h), lanczos);
    const auto p = label_probabilities(setup, born_probabilities(gs, setup.sensor_sites()));
    rows[i] = {points[i].g_zxz, points[i].g_zz, points[i].g_x, p[0], p[1], p[2]};
  });
  return rows;
}

namespace {

struct SampleResult {
  bool ok = false;
  std::string error;
  std::vector<double> gradient;
  std::vector<double> outputs;
  double loss = 0.0;
};

std::vector<double> one_hot(PhaseLabel label) {
  std::vector<double> t(3, 0.0);
  t[static_cast<std::size_t>(label)] = 1.0;
  return t;
}

void validate(const SupervisedConfig& c) {
  if (c.batch_size < 1) throw std::invalid_argument("batch_size >= 1 required");
  if (c.batches < 0) throw std::invalid_argument("batches >= 0 required");
  if (c.test_size < 1) throw std::invalid_argument("test_size >= 1 required");
  if (c.eval_interval < 1) throw std::invalid_argument("eval_interval >= 1 required");
  if (c.patience < 0) throw std::invalid_argument("patience >= 0 required");
  if (c.shots && *c.shots < 1) throw std::invalid_argument("shots >= 1 required");
  if (c.single_shot_votes < 1) throw std::invalid_argument("single_shot_votes >= 1 required");
  if (!(c.learning_rate >= 0.0)) throw std::invalid_argument("lr >= 0 required");
  if (!(c.init_scale >= 0.0)) throw std::invalid_argument("init_scale >= 0 required");
  if (c.restricted_radius && !(*c.restricted_radius > 0.0 && *c.restricted_radius <= 1.0)) {
    throw std::invalid_argument("restricted radius must lie in (0, 1]");
  }
  c.setup.labels.validate();
}

}  // namespace

Trajectory train_supervised(const SupervisedConfig& config) {
  validate(config);
  const NudgeScheme scheme(config.scheme, config.beta);
  const ClassifierSetup& setup = config.setup;
  const std::uint64_t solves_before = equilibration_count();

  Trajectory traj;
  traj.experiment = "train-phase-classifier";
  traj.seed = config.seed;
  traj.records_accuracy = true;
  traj.output_labels = classifier_output_labels();
  std::vector<double> theta =
      initial_couplings(setup.parameter_count(), config.init_scale, config.seed);
  traj.param_labels =
      build_classifier(setup, PhasePoint{4.0, 0.0, 0.0}, theta).labels(ParameterRole::Trainable);

  const auto test = make_test_set(config.test_size, config.label_chain_length, setup.boundary,
                                  config.seed);
  std::vector<GroundStateResult> test_cache;
  int evaluation = 0;
  auto evaluate = [&](TrajectoryRecord& r) {
    Rng rng = make_stream(config.seed, {stream::kSingleShot, static_cast<std::uint64_t>(evaluation++)});
    const auto e = evaluate_classifier(setup, theta, test, rng, config.single_shot_votes,
                                       config.lanczos, &test_cache);
    r.many_queries_accuracy = e.many_queries_accuracy;
    r.single_shot_accuracy = e.single_shot_accuracy;
  };

  TrajectoryRecord initial;
  initial.step = 0;
  initial.params = theta;
  evaluate(initial);
  double best = *initial.many_queries_accuracy;
  int stale = 0;
  traj.append(std::move(initial));

  AdamState adam = AdamState::create(theta.size(), config.learning_rate);
  const auto n = static_cast<std::size_t>(config.batch_size);
  for (int b = 1; b <= config.batches; ++b) {
    std::vector<LabeledPoint> batch(n);
    {
      Rng rng = make_stream(config.seed, {stream::kBatch, static_cast<std::uint64_t>(b)});
      for (auto& s : batch) {
        s.point = config.restricted_radius
                      ? sample_restricted_phase_point(rng, *config.restricted_radius)
                      : sample_phase_point(rng);
      }
    }
    std::vector<SampleResult> results(n);
    parallel_for(n, [&](std::size_t i) {
      SampleResult& r = results[i];
      try {
        batch[i].label = phase_label(batch[i].point, config.label_chain_length, setup.boundary);
        const auto h = build_classifier(setup, batch[i].point, theta);
        const auto free_phase = ground_state(assemble(h), config.lanczos);
        Rng seeder = make_stream(config.seed, {stream::kShots, static_cast<std::uint64_t>(b), i});
        const std::uint64_t sample_seed = seeder();
        const ShotModel shots = config.shots ? ShotModel::finite(*config.shots, sample_seed)
                                             : ShotModel::infinite(sample_seed);
        Rng output_rng = make_stream(sample_seed, {stream::kShots, 3});
        const auto target = one_hot(batch[i].label);
        std::vector<double> measured;
        for (const auto& o : h.outputs()) {
          const double mean = free_phase.expectation(o.op);
          r.outputs.push_back(mean);
          const double second = shots.is_infinite() ? 0.0 : free_phase.second_moment(o.op);
          measured.push_back(noisy_expectation(mean, second, shots, output_rng));
        }
        for (std::size_t k = 0; k < 3; ++k) {
          r.loss += (r.outputs[k] - target[k]) * (r.outputs[k] - target[k]);
        }
        const auto eps = mse_error_signal(measured, target);
        r.gradient = qep_gradient(h, free_phase, eps, scheme, shots, config.lanczos).values;
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    });

    TrajectoryRecord rec;
    rec.step = b;
    std::vector<double> grad(theta.size(), 0.0);
    std::vector<double> outputs(3, 0.0);
    double loss = 0.0;
    int ok = 0;
    std::string first_error;
    for (const auto& r : results) {
      if (!r.ok) {
        ++rec.failed_samples;
        if (first_error.empty()) first_error = r.error;
        continue;
      }
      ++ok;
      for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += r.gradient[j];
      for (std::size_t k = 0; k < 3; ++k) outputs[k] += r.outputs[k];
      loss += r.loss;
    }
    if (2 * ok < config.batch_size) {
      traj.complete = false;
      traj.failure = "batch " + std::to_string(b) + ": " + std::to_string(rec.failed_samples) +
                     " of " + std::to_string(config.batch_size) +
                     " samples failed; first error: " + first_error;
      break;
    }
    double norm2 = 0.0;
    for (auto& g : grad) {
      g /= ok;
      norm2 += g * g;
    }
    for (auto& o : outputs) o /= ok;
    rec.loss = loss / ok;
    rec.grad_norm = std::sqrt(norm2);
    rec.outputs = outputs;

    auto [next, updated] = adam_step(adam, grad, theta);
    adam = std::move(next);
    theta = std::move(updated);
    rec.params = theta;

    const bool last = b == config.batches;
    bool stop = false;
    if (b % config.eval_interval == 0 || last) {
      evaluate(rec);
      if (*rec.many_queries_accuracy > best) {
        best = *rec.many_queries_accuracy;
        stale = 0;
      } else if (config.patience > 0 && ++stale >= config.patience) {
        stop = true;
      }
    }
    traj.append(std::move(rec));
    if (stop) break;
  }
  if (!traj.last().many_queries_accuracy) {
    // The final record always carries the accuracy of the final couplings.
    evaluate(traj.records.back());
  }
  traj.equilibrations = equilibration_count() - solves_before;
  return traj;
}

}  // namespace qep
