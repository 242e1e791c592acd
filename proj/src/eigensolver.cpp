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

#include "qep/eigensolver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

namespace qep {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;

std::atomic<std::uint64_t> g_equilibrations{0};

void fix_phase(Amplitudes& v) {
  Index imax = 0;
  v.cwiseAbs2().maxCoeff(&imax);
  const cplx a = v[imax];
  if (std::abs(a) > 0.0) v *= std::conj(a) / std::abs(a);
}

Amplitudes random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Amplitudes v(n);
  for (Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = cplx(re, im);
  }
  return v;
}

Amplitudes mixed_start(const Amplitudes& warm, Index n, std::mt19937_64& rng) {
  Amplitudes noise = random_vector(n, rng);
  return warm / warm.norm() + 1e-3 * noise / noise.norm();
}

struct KrylovRun {
  double theta = 0.0;
  Amplitudes vec;
  double residual = 0.0;
  int matvecs = 0;
};

// Lowest eigenvalue of a symmetric tridiagonal matrix and the last
// component of its normalised eigenvector (shifted inverse iteration).
std::pair<double, double> lowest_tridiagonal(const std::vector<double>& alpha,
                                             const std::vector<double>& beta) {
  const auto m = static_cast<Index>(alpha.size());
  if (m == 1) return {alpha[0], 1.0};
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const double theta = es.eigenvalues()[0];
  const double norm = diag.cwiseAbs().maxCoeff() + 2.0 * sub.cwiseAbs().maxCoeff() + 1.0;
  const double shift = theta - 1e-11 * norm;

  // T - shift is positive definite, so LDL^T without pivoting is stable.
  Eigen::VectorXd d(m), l(m - 1);
  d[0] = diag[0] - shift;
  for (Index i = 0; i + 1 < m; ++i) {
    l[i] = sub[i] / d[i];
    d[i + 1] = diag[i + 1] - shift - sub[i] * l[i];
  }
  Eigen::VectorXd y = Eigen::VectorXd::Ones(m);
  for (int it = 0; it < 3; ++it) {
    for (Index i = 1; i < m; ++i) y[i] -= l[i - 1] * y[i - 1];
    y.array() /= d.array();
    for (Index i = m - 2; i >= 0; --i) y[i] -= l[i] * y[i + 1];
    y.normalize();
  }
  return {theta, std::abs(y[m - 1])};
}

// Lowest eigenpair of H on the orthogonal complement of locked[:, :n_locked].
// A Ritz pair is accepted at residual <= tol, or at <= gap_residual once it
// sits clearly above e_ref + deg_tol (then only its energy matters).
KrylovRun lowest_in_complement(const SparseOperator::Matrix& H, const MatrixXcd& locked,
                               Index n_locked, Amplitudes start, double e_ref,
                               const LanczosOptions& opt, std::mt19937_64& rng) {
  const Index n = H.rows();
  const Index available = n - n_locked;
  auto orthogonalise = [&](Amplitudes& v, const MatrixXcd& basis, Index m) {
    for (int pass = 0; pass < 2; ++pass) {
      const double before = v.norm();
      if (n_locked > 0) v -= locked.leftCols(n_locked) * (locked.leftCols(n_locked).adjoint() * v);
      if (m > 0) v -= basis.leftCols(m) * (basis.leftCols(m).adjoint() * v);
      if (v.norm() > 0.7 * before) break;
    }
  };

  Index capacity = std::min<Index>(available, 64);
  MatrixXcd basis(n, capacity);
  orthogonalise(start, basis, 0);
  for (int attempt = 0; start.norm() < 1e-8 && attempt < 8; ++attempt) {
    start = random_vector(n, rng);
    orthogonalise(start, basis, 0);
  }
  basis.col(0) = start.normalized();
  Index m = 1;

  std::vector<double> alpha, beta;
  KrylovRun run;
  double best = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  Amplitudes w(n);
  for (int step = 0;; ++step) {
    w.noalias() = H * basis.col(m - 1);
    ++run.matvecs;
    const double a = basis.col(m - 1).dot(w).real();
    alpha.push_back(a);
    w -= a * basis.col(m - 1);
    if (m > 1) w -= beta[m - 2] * basis.col(m - 2);
    orthogonalise(w, basis, m);
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});

    const bool exhausted = m >= available || b <= 1e-12 * scale;
    auto [theta, last] = lowest_tridiagonal(alpha, beta);
    const double estimate = exhausted ? 0.0 : b * last;
    best = std::min(best, estimate);
    const bool loose = estimate <= opt.gap_residual && theta - estimate > e_ref + opt.deg_tol;
    if (exhausted || estimate <= opt.tol || loose) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      Amplitudes v = basis.leftCols(m) * es.eigenvectors().col(0).cast<cplx>();
      v.normalize();
      run.theta = es.eigenvalues()[0];
      Amplitudes hv = H * v;
      ++run.matvecs;
      run.residual = (hv - run.theta * v).norm();
      const bool ok = run.residual <= opt.tol ||
                      (run.residual <= opt.gap_residual &&
                       run.theta - run.residual > e_ref + opt.deg_tol);
      if (ok || exhausted) {
        run.vec = std::move(v);
        return run;
      }
    }
    if (step >= opt.max_iter) {
      throw ConvergenceError("Lanczos did not converge in " + std::to_string(opt.max_iter) +
                                 " steps (best residual " + std::to_string(best) + ")",
                             best);
    }
    if (m >= capacity) {
      capacity = std::min<Index>(available, 2 * capacity);
      basis.conservativeResize(Eigen::NoChange, capacity);
    }
    beta.push_back(b);
    basis.col(m) = w / b;
    ++m;
  }
}

}  // namespace

double GroundStateResult::expectation(const PauliSum& a) const {
  if (degenerate_states.empty()) return a.expectation(state);
  double acc = 0.0;
  for (const auto& s : degenerate_states) acc += a.expectation(s);
  return acc / static_cast<double>(degenerate_states.size());
}

double GroundStateResult::expectation(const SparseOperator& a) const {
  if (degenerate_states.empty()) return qep::expectation(a, state);
  double acc = 0.0;
  for (const auto& s : degenerate_states) acc += qep::expectation(a, s);
  return acc / static_cast<double>(degenerate_states.size());
}

double GroundStateResult::second_moment(const PauliSum& a) const {
  if (degenerate_states.empty()) return a.second_moment(state.amplitudes());
  double acc = 0.0;
  for (const auto& s : degenerate_states) acc += a.second_moment(s.amplitudes());
  return acc / static_cast<double>(degenerate_states.size());
}

GroundStateResult ground_state(const SparseOperator& h, const LanczosOptions& options) {
  const auto n = static_cast<Index>(h.dim());
  if (n < 2) throw std::invalid_argument("ground_state needs dimension >= 2");
  const GroundStateResult* warm = options.warm_start;
  if (warm && static_cast<Index>(warm->state.dim()) != n) {
    throw std::invalid_argument("warm start has the wrong dimension");
  }
  g_equilibrations.fetch_add(1, std::memory_order_relaxed);
  const auto& H = h.matrix();
  std::mt19937_64 rng(options.seed);

  MatrixXcd locked(n, 0);
  std::vector<double> energies;
  std::vector<double> residuals;
  int matvecs = 0;
  auto lock = [&](KrylovRun&& run) {
    locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
    locked.col(locked.cols() - 1) = run.vec;
    energies.push_back(run.theta);
    residuals.push_back(run.residual);
  };

  Amplitudes start = warm ? mixed_start(warm->state.amplitudes(), n, rng) : random_vector(n, rng);
  KrylovRun first = lowest_in_complement(H, locked, 0, std::move(start),
                                         std::numeric_limits<double>::infinity(), options, rng);
  matvecs += first.matvecs;
  lock(std::move(first));

  std::optional<KrylovRun> above;
  bool used_warm_excited = false;
  while (locked.cols() < n) {
    const double e_min = *std::min_element(energies.begin(), energies.end());
    Amplitudes seed_vec;
    if (warm && warm->excited_state && !used_warm_excited) {
      seed_vec = mixed_start(warm->excited_state->amplitudes(), n, rng);
      used_warm_excited = true;
    } else {
      seed_vec = random_vector(n, rng);
    }
    KrylovRun run = lowest_in_complement(H, locked, locked.cols(), std::move(seed_vec), e_min,
                                         options, rng);
    matvecs += run.matvecs;
    if (run.theta <= e_min + options.deg_tol) {
      lock(std::move(run));
      continue;
    }
    above = std::move(run);
    break;
  }

  std::vector<Index> order(energies.size());
  for (Index i = 0; i < static_cast<Index>(order.size()); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return energies[a] < energies[b]; });
  const double e0 = energies[order[0]];

  GroundStateResult res;
  res.energy = e0;
  res.matvecs = matvecs;
  std::vector<Index> ground;
  std::optional<Index> excited_locked;
  for (Index i : order) {
    if (energies[i] <= e0 + options.deg_tol) {
      ground.push_back(i);
    } else if (!excited_locked) {
      excited_locked = i;
    }
  }
  auto state_of = [&](Index i) {
    Amplitudes v = locked.col(i);
    fix_phase(v);
    return StateVector::normalized(std::move(v));
  };
  res.state = state_of(ground.front());
  res.residual = residuals[ground.front()];
  if (ground.size() > 1) {
    for (Index i : ground) {
      res.degenerate_states.push_back(state_of(i));
      res.residual = std::max(res.residual, residuals[i]);
    }
    res.gap = energies[ground[1]] - e0;
  }

  // The first level above the ground space: a locked run that turned out
  // not to be the ground state, or the final deflated run.
  double e1 = std::numeric_limits<double>::infinity();
  if (excited_locked) {
    e1 = energies[*excited_locked];
    res.excited_state = state_of(*excited_locked);
  }
  if (above && above->theta < e1) {
    e1 = above->theta;
    fix_phase(above->vec);
    res.excited_state = StateVector::normalized(std::move(above->vec));
  }
  if (ground.size() == 1) res.gap = std::isfinite(e1) ? e1 - e0 : 0.0;
  return res;
}

std::uint64_t equilibration_count() {
  return g_equilibrations.load(std::memory_order_relaxed);
}

double ground_expectation(const SparseOperator& h, const SparseOperator& a, double deg_tol,
                          const LanczosOptions& options) {
  if (a.dim() != h.dim()) throw std::invalid_argument("operator dimension mismatch");
  LanczosOptions opt = options;
  opt.deg_tol = deg_tol;
  return ground_state(h, opt).expectation(a);
}

Amplitudes resolvent_apply(const SparseOperator& h, const GroundStateResult& gs,
                           const Amplitudes& source, double tol, int max_iter) {
  if (gs.degeneracy() > 1) {
    throw DegenerateGroundStateError(
        "ground space is degenerate; use finite differences with ground-space averaging");
  }
  const Amplitudes& psi = gs.state.amplitudes();
  if (source.size() != psi.size() || static_cast<std::size_t>(psi.size()) != h.dim()) {
    throw std::invalid_argument("resolvent dimension mismatch");
  }
  const auto& H = h.matrix();
  const double e0 = gs.energy;
  auto project = [&](Amplitudes& v) { v -= psi * psi.dot(v); };

  // CG on (H - E0), positive definite on the complement of psi.
  Amplitudes rhs = -source;
  project(rhs);
  const double rhs_norm = rhs.norm();
  Amplitudes x = Amplitudes::Zero(psi.size());
  // A source parallel to psi (psi an eigenvector of the perturbation) leaves
  // only round-off on the complement.
  if (rhs_norm <= 1e-13 * source.norm()) return x;
  Amplitudes res = rhs;
  Amplitudes p = res;
  double rs = res.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    Amplitudes ap = H * p - e0 * p;
    project(ap);
    const double pap = p.dot(ap).real();
    if (!(pap > 0.0)) {
      throw DegenerateGroundStateError("resolvent is singular on the complement");
    }
    const double alpha = rs / pap;
    x += alpha * p;
    res -= alpha * ap;
    const double rs_new = res.squaredNorm();
    if (std::sqrt(rs_new) <= tol * rhs_norm) {
      project(x);
      return x;
    }
    p = res + (rs_new / rs) * p;
    rs = rs_new;
  }
  throw ConvergenceError("resolvent solve did not converge", std::sqrt(rs) / rhs_norm);
}

std::vector<double> linear_response(const SparseOperator& h, const GroundStateResult& gs,
                                    const PauliSum& perturbation,
                                    const std::vector<const PauliSum*>& observables,
                                    double tol) {
  const Amplitudes& psi = gs.state.amplitudes();
  const Amplitudes x = resolvent_apply(h, gs, perturbation.apply(psi), tol);
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto* a : observables) {
    out.push_back(2.0 * a->apply(psi).dot(x).real());
  }
  return out;
}

double exact_susceptibility(const ParameterizedHamiltonian& h, std::string_view j,
                            std::string_view l, const LanczosOptions& options) {
  const PauliSum& a_j = h.term(j).op;
  const PauliSum& a_l = h.observable(l);
  const SparseOperator hm = assemble(h);
  const GroundStateResult gs = ground_state(hm, options);
  if (gs.degeneracy() > 1 || gs.gap <= options.deg_tol) {
    throw DegenerateGroundStateError(
        "exact susceptibility needs a non-degenerate ground state; use finite "
        "differences with ground-space averaging instead");
  }
  return linear_response(hm, gs, a_j, {&a_l}, std::min(options.tol, 1e-10)).front();
}

}  // namespace qep
