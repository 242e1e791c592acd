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

#include "qep/qep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qep {

ErrorSignal mse_error_signal(std::span<const double> y, std::span<const double> target) {
  if (y.size() != target.size()) {
    throw std::invalid_argument("output and target lengths differ");
  }
  ErrorSignal eps;
  eps.values.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) eps.values[i] = 2.0 * (y[i] - target[i]);
  return eps;
}

std::string_view to_string(NudgeKind kind) {
  return kind == NudgeKind::OneSided ? "one_sided" : "symmetric";
}

NudgeKind nudge_kind_from_string(std::string_view text) {
  if (text == "one_sided") return NudgeKind::OneSided;
  if (text == "symmetric") return NudgeKind::Symmetric;
  throw std::invalid_argument("unknown nudge scheme '" + std::string(text) +
                              "' (expected one_sided or symmetric)");
}

NudgeScheme::NudgeScheme(NudgeKind kind, double beta) : kind_(kind), beta_(beta) {
  if (!std::isfinite(beta) || beta <= 0.0) throw std::invalid_argument("beta > 0 required");
}

PhaseConvergenceError::PhaseConvergenceError(std::string phase, const ConvergenceError& cause)
    : ConvergenceError(phase + " phase: " + cause.what(), cause.best_residual()),
      phase_(std::move(phase)) {}

namespace {

std::vector<double> measured_expectations(const ParameterizedHamiltonian& h,
                                          const std::vector<std::size_t>& trainable,
                                          const GroundStateResult& gs, const ShotModel& shots,
                                          std::uint64_t phase_tag) {
  std::vector<double> out;
  out.reserve(trainable.size());
  Rng rng = make_stream(shots.rng_seed(), {stream::kShots, phase_tag});
  for (auto idx : trainable) {
    const PauliSum& a = h.terms()[idx].op;
    const double mean = gs.expectation(a);
    const double second = shots.is_infinite() ? 0.0 : gs.second_moment(a);
    out.push_back(noisy_expectation(mean, second, shots, rng));
  }
  return out;
}

GroundStateResult solve_phase(const ParameterizedHamiltonian& h, std::span<const double> nu,
                              const GroundStateResult& warm, const LanczosOptions& options,
                              const char* name) {
  LanczosOptions opts = options;
  opts.warm_start = &warm;
  try {
    return ground_state(assemble(with_nudge(h, nu)), opts);
  } catch (const ConvergenceError& e) {
    throw PhaseConvergenceError(name, e);
  }
}

void check_gradient_inputs(const ParameterizedHamiltonian& h, const ErrorSignal& eps) {
  if (h.indices(ParameterRole::Trainable).empty()) {
    throw std::invalid_argument("Hamiltonian has no trainable parameters");
  }
  if (h.outputs().empty()) throw std::invalid_argument("Hamiltonian has no output observables");
  if (eps.values.size() != h.outputs().size()) {
    throw std::invalid_argument("error signal length must equal the number of outputs");
  }
  for (double v : eps.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("error signal must be finite");
  }
}

}  // namespace

GradientEstimate qep_gradient(const ParameterizedHamiltonian& h, const ErrorSignal& eps,
                              const NudgeScheme& scheme, const ShotModel& shots,
                              const LanczosOptions& options) {
  check_gradient_inputs(h, eps);
  GroundStateResult free_phase;
  try {
    free_phase = ground_state(assemble(h), options);
  } catch (const ConvergenceError& e) {
    throw PhaseConvergenceError("free", e);
  }
  return qep_gradient(h, free_phase, eps, scheme, shots, options);
}

GradientEstimate qep_gradient(const ParameterizedHamiltonian& h,
                              const GroundStateResult& free_phase, const ErrorSignal& eps,
                              const NudgeScheme& scheme, const ShotModel& shots,
                              const LanczosOptions& options) {
  check_gradient_inputs(h, eps);
  const auto trainable = h.indices(ParameterRole::Trainable);
  const double beta = scheme.beta();
  std::vector<double> nu_plus(eps.values.size());
  std::vector<double> nu_minus(eps.values.size());
  for (std::size_t l = 0; l < eps.values.size(); ++l) {
    nu_plus[l] = beta * eps.values[l];
    nu_minus[l] = -beta * eps.values[l];
  }

  GradientEstimate est{{}, scheme, shots,
                       measured_expectations(h, trainable, free_phase, shots, phase::kFree)};
  const GroundStateResult plus = solve_phase(h, nu_plus, free_phase, options, "+beta");
  const auto a_plus = measured_expectations(h, trainable, plus, shots, phase::kPlus);
  est.values.resize(trainable.size());
  if (scheme.kind() == NudgeKind::OneSided) {
    for (std::size_t j = 0; j < trainable.size(); ++j) {
      est.values[j] = (a_plus[j] - est.free_expectations[j]) / beta;
    }
  } else {
    const GroundStateResult minus = solve_phase(h, nu_minus, free_phase, options, "-beta");
    const auto a_minus = measured_expectations(h, trainable, minus, shots, phase::kMinus);
    for (std::size_t j = 0; j < trainable.size(); ++j) {
      est.values[j] = (a_plus[j] - a_minus[j]) / (2.0 * beta);
    }
  }
  return est;
}

namespace {

std::vector<double> output_values(const GroundStateResult& gs,
                                  const std::vector<const PauliSum*>& ops) {
  std::vector<double> v;
  v.reserve(ops.size());
  for (const auto* op : ops) v.push_back(gs.expectation(*op));
  return v;
}

// Rows: observables; columns: trainable parameters.
std::vector<std::vector<double>> shifted_differences(const ParameterizedHamiltonian& h,
                                                     const std::vector<const PauliSum*>& ops,
                                                     double delta,
                                                     const LanczosOptions& options) {
  if (!(delta > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  const auto trainable = h.indices(ParameterRole::Trainable);
  const GroundStateResult base = ground_state(assemble(h), options);
  LanczosOptions warm = options;
  warm.warm_start = &base;
  std::vector<std::vector<double>> jac(ops.size(), std::vector<double>(trainable.size()));
  for (std::size_t j = 0; j < trainable.size(); ++j) {
    const auto& term = h.terms()[trainable[j]];
    const auto up = ground_state(
        assemble(h.with_coefficient(term.label, term.coefficient + delta)), warm);
    const auto down = ground_state(
        assemble(h.with_coefficient(term.label, term.coefficient - delta)), warm);
    const auto yu = output_values(up, ops);
    const auto yd = output_values(down, ops);
    for (std::size_t l = 0; l < ops.size(); ++l) jac[l][j] = (yu[l] - yd[l]) / (2.0 * delta);
  }
  return jac;
}

}  // namespace

std::vector<double> parameter_shift_oracle(const ParameterizedHamiltonian& h,
                                           std::string_view output_label, double delta,
                                           const LanczosOptions& options) {
  return shifted_differences(h, {&h.observable(output_label)}, delta, options).front();
}

std::vector<std::vector<double>> parameter_shift_jacobian(const ParameterizedHamiltonian& h,
                                                          double delta,
                                                          const LanczosOptions& options) {
  std::vector<const PauliSum*> ops;
  for (const auto& o : h.outputs()) ops.push_back(&o.op);
  return shifted_differences(h, ops, delta, options);
}

double finite_difference_susceptibility(const ParameterizedHamiltonian& h, std::string_view j,
                                        std::string_view l, double delta,
                                        const LanczosOptions& options) {
  if (!(delta > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  ParameterizedHamiltonian probe = h;
  std::string j_label(j);
  if (!h.find_term(j)) {
    j_label = "probe:" + j_label;
    probe.add_term(j_label, ParameterRole::Input, 0.0, h.observable(j));
  }
  const double lambda = probe.term(j_label).coefficient;
  const PauliSum& a_l = h.observable(l);
  LanczosOptions tight = options;
  tight.tol = std::min(options.tol, 1e-12);
  const auto up = ground_state(assemble(probe.with_coefficient(j_label, lambda + delta)), tight);
  const auto down =
      ground_state(assemble(probe.with_coefficient(j_label, lambda - delta)), tight);
  return (up.expectation(a_l) - down.expectation(a_l)) / (2.0 * delta);
}

double onsager_audit(const ParameterizedHamiltonian& h,
                     std::span<const std::pair<std::string, std::string>> pairs, double delta,
                     const LanczosOptions& options) {
  const auto base = ground_state(assemble(h), options);
  if (base.degeneracy() > 1 || base.gap <= options.deg_tol) {
    throw DegenerateGroundStateError("Onsager audit point has a degenerate ground state");
  }
  double worst = 0.0;
  for (const auto& [j, l] : pairs) {
    const double chi_lj = finite_difference_susceptibility(h, j, l, delta, options);
    const double chi_jl = finite_difference_susceptibility(h, l, j, delta, options);
    worst = std::max(worst, std::abs(chi_lj - chi_jl));
  }
  return worst;
}

std::vector<double> exact_loss_gradient(const ParameterizedHamiltonian& h,
                                        const SparseOperator& assembled,
                                        const GroundStateResult& free_phase,
                                        const ErrorSignal& eps, double tol) {
  check_gradient_inputs(h, eps);
  if (free_phase.degeneracy() > 1) {
    throw DegenerateGroundStateError("exact gradient needs a non-degenerate free phase");
  }
  PauliSum loss_force(h.n_sites());
  for (std::size_t l = 0; l < eps.values.size(); ++l) {
    loss_force += h.outputs()[l].op * eps.values[l];
  }
  std::vector<const PauliSum*> ops;
  for (auto idx : h.indices(ParameterRole::Trainable)) ops.push_back(&h.terms()[idx].op);
  return linear_response(assembled, free_phase, loss_force, ops, tol);
}

double gradient_overlap(std::span<const double> estimate, std::span<const double> reference) {
  if (estimate.size() != reference.size()) {
    throw std::invalid_argument("overlap needs vectors of equal length");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    dot += estimate[i] * reference[i];
    na += estimate[i] * estimate[i];
    nb += reference[i] * reference[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

ParameterizedHamiltonian random_hamiltonian(int n_sites, int n_params, Rng& rng) {
  if (n_sites < 1 || n_params < 1) throw std::invalid_argument("need sites and parameters");
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> letter(1, 3);
  std::uniform_int_distribution<int> weight(1, std::min(3, n_sites));
  ParameterizedHamiltonian h(n_sites);
  for (int p = 0; p < n_params; ++p) {
    std::vector<int> sites(static_cast<std::size_t>(n_sites));
    for (int s = 0; s < n_sites; ++s) sites[static_cast<std::size_t>(s)] = s;
    std::shuffle(sites.begin(), sites.end(), rng);
    const int w = weight(rng);
    std::vector<std::pair<int, PauliLetter>> ops;
    for (int k = 0; k < w; ++k) {
      ops.emplace_back(sites[static_cast<std::size_t>(k)], static_cast<PauliLetter>(letter(rng)));
    }
    h.add_term("lambda" + std::to_string(p), ParameterRole::Input, coeff(rng),
               PauliSum(1.0, PauliString::on_sites(n_sites, ops)));
  }
  return h;
}

}  // namespace qep
