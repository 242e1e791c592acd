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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "qep/measurement.hpp"
#include "qep/qep.hpp"
#include "qep/supervised.hpp"
#include "qep/sweep.hpp"
#include "qep/unsupervised.hpp"
#include "runner.hpp"

using namespace qep;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Least-squares slope of log(error) against log(beta).
double empirical_order(const std::vector<double>& betas, const std::vector<double>& errors) {
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    mx += std::log(betas[i]) / n;
    my += std::log(errors[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    sxy += (std::log(betas[i]) - mx) * (std::log(errors[i]) - my);
    sxx += (std::log(betas[i]) - mx) * (std::log(betas[i]) - mx);
  }
  return sxy / sxx;
}

// Means over full trailing windows of 10 records.
std::vector<double> moving_average(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 9; i < v.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = i - 9; k <= i; ++k) s += v[k];
    out.push_back(s / 10.0);
  }
  return out;
}

// Largest rise of a sequence that should not increase.
double largest_rise(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) worst = std::max(worst, v[i] - v[i - 1]);
  return worst;
}

constexpr double kMonotoneSlack = 1e-9;

cli::AuditConfig audit_ensemble() {
  cli::AuditConfig a;
  a.n_sites = 4;
  a.instances = 10;
  a.params_per_instance = 8;
  a.pairs = 5;
  a.delta = 1e-4;
  a.seed = 2024;
  a.lanczos.tol = 1e-12;
  return a;
}

Outcome criterion1() {
  const auto a = cli::onsager_reciprocity_audit(audit_ensemble());
  return {a.max_asymmetry < 1e-6,
          fmt("max |chi_jl - chi_lj| = %.3g over %zu pairs (< 1e-6)", a.max_asymmetry,
              a.entries.size())};
}

Outcome criterion2() {
  const auto a = cli::onsager_reciprocity_audit(audit_ensemble());
  ParameterizedHamiltonian h(1);
  h.add_term("theta", ParameterRole::Input, 1.0, PauliSum(1.0, PauliString::parse("Z")));
  h.add_term("nu", ParameterRole::Input, 0.5, PauliSum(1.0, PauliString::parse("X")));
  const double two_level = exact_susceptibility(h, "theta", "nu", LanczosOptions{.tol = 1e-12});
  const double analytic = 0.357771;
  const bool pass = a.max_exact_error < 1e-6 && std::abs(two_level - analytic) < 1e-6;
  return {pass, fmt("max |exact - FD| = %.3g (< 1e-6); two-level chi = %.7f vs 0.357771",
                    a.max_exact_error, two_level)};
}

Outcome criterion3() {
  ClassifierSetup setup;
  const auto theta = initial_couplings(setup.parameter_count(), 1.0, 3);
  const PhasePoint point{1.3, 1.5, 1.2};
  const auto h = build_classifier(setup, point, theta);
  const LanczosOptions tight{.tol = 1e-12};
  const auto free_phase = ground_state(assemble(h), tight);
  std::vector<double> y;
  for (const auto& o : h.outputs()) y.push_back(free_phase.expectation(o.op));
  std::vector<double> target(3, 0.0);
  target[static_cast<std::size_t>(phase_label(point))] = 1.0;
  const auto eps = mse_error_signal(y, target);

  const auto jac = parameter_shift_jacobian(h, 1e-3, tight);
  std::vector<double> reference(theta.size(), 0.0);
  for (std::size_t l = 0; l < jac.size(); ++l) {
    for (std::size_t j = 0; j < reference.size(); ++j) reference[j] += eps.values[l] * jac[l][j];
  }
  const std::vector<double> betas{0.2, 0.1, 0.05};
  std::vector<double> sym, one;
  std::set<std::uint64_t> solves;
  for (double b : betas) {
    for (auto kind : {NudgeKind::Symmetric, NudgeKind::OneSided}) {
      const auto before = equilibration_count();
      const auto g = qep_gradient(h, eps, NudgeScheme(kind, b), ShotModel::infinite(), tight);
      const auto used = equilibration_count() - before;
      if (kind == NudgeKind::Symmetric) solves.insert(used);
      (kind == NudgeKind::Symmetric ? sym : one).push_back(max_abs_diff(g.values, reference));
    }
  }
  const double sym_order = empirical_order(betas, sym);
  const double one_order = empirical_order(betas, one);
  const bool three = solves.size() == 1 && *solves.begin() == 3;
  return {sym_order >= 1.8 && one_order >= 0.9 && three,
          fmt("%zu params; symmetric order %.3f (>= 1.8), one-sided order %.3f (>= 0.9), "
              "symmetric errors %.2e/%.2e/%.2e, solves per gradient %llu (3)",
              theta.size(), sym_order, one_order, sym[0], sym[1], sym[2],
              static_cast<unsigned long long>(solves.size() == 1 ? *solves.begin() : 0))};
}

const NudgeSweepResult& sweep() {
  static const NudgeSweepResult result = [] {
    NudgeSweepConfig c;
    c.seed = 11;
    return nudge_sweep(c);
  }();
  return result;
}

Outcome criterion4() {
  const auto& r = sweep();
  const std::vector<double> betas{0.05, 0.1, 0.2, 0.4, 0.8};
  std::vector<double> medians;
  std::string list;
  for (double b : betas) {
    medians.push_back(r.cell(std::nullopt, b).median);
    list += fmt("%s%.4f", list.empty() ? "" : " ", medians.back());
  }
  bool monotone = true;
  for (std::size_t i = 1; i < medians.size(); ++i) monotone &= medians[i] <= medians[i - 1];
  const std::size_t batches = r.cell(std::nullopt, 0.05).overlaps.size();
  return {medians[0] >= 0.99 && monotone && batches >= 30,
          fmt("noiseless medians by beta: %s; %zu batches (>= 0.99 at 0.05, non-increasing)",
              list.c_str(), batches)};
}

Outcome criterion5() {
  const auto& r = sweep();
  const std::vector<double> betas{0.05, 0.1, 0.2, 0.4, 0.8};
  std::vector<double> medians;
  std::string list;
  for (double b : betas) {
    medians.push_back(r.cell(10, b).median);
    list += fmt("%s%.4f", list.empty() ? "" : " ", medians.back());
  }
  int best = -1;
  for (std::size_t i = 1; i + 1 < medians.size(); ++i) {
    if (medians[i] >= medians.front() && medians[i] >= medians.back() &&
        (best < 0 || medians[i] > medians[static_cast<std::size_t>(best)])) {
      best = static_cast<int>(i);
    }
  }
  return {best >= 0, fmt("M=10 medians by beta: %s; interior sweet spot %s", list.c_str(),
                         best >= 0 ? fmt("at beta = %.2f", betas[static_cast<std::size_t>(best)]).c_str()
                                   : "none")};
}

struct TrainingRun {
  double initial = 0.0;
  double final_accuracy = 0.0;
  double best = 0.0;
  bool complete = false;
  bool single_shot_bounded = true;
};

const std::vector<TrainingRun>& training_runs(CouplingSet couplings) {
  static std::map<CouplingSet, std::vector<TrainingRun>> cache;
  auto& runs = cache[couplings];
  if (!runs.empty()) return runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SupervisedConfig c;
    c.setup.couplings = couplings;
    c.seed = seed;
    const auto t = train_supervised(c);
    TrainingRun r;
    r.complete = t.complete;
    bool first = true;
    std::string violations;
    for (const auto& rec : t.records) {
      if (!rec.many_queries_accuracy) continue;
      const double mq = *rec.many_queries_accuracy;
      const double ss = *rec.single_shot_accuracy;
      const double sigma = std::sqrt(ss * (1.0 - ss) / c.test_size);
      if (ss > mq + 3.0 * sigma) {
        r.single_shot_bounded = false;
        violations += fmt(" step %d (ss %.3f > mq %.3f + 3*%.3f)", rec.step, ss, mq, sigma);
      }
      if (first) r.initial = mq;
      first = false;
      r.final_accuracy = mq;
      r.best = std::max(r.best, mq);
    }
    std::fprintf(stderr, "  %s seed %llu: accuracy %.3f -> %.3f (best %.3f), %zu records%s%s\n",
                 std::string(to_string(couplings)).c_str(), static_cast<unsigned long long>(seed),
                 r.initial, r.final_accuracy, r.best, t.records.size(),
                 violations.empty() ? "" : "; single-shot above bound at", violations.c_str());
    runs.push_back(r);
  }
  return runs;
}

Outcome criterion6() {
  const auto& runs = training_runs(CouplingSet::Full);
  int reached = 0;
  bool bounded = true;
  std::string list;
  for (const auto& r : runs) {
    // Chance level: the untrained sensor must not already classify well.
    reached += r.complete && r.initial <= 0.5 && r.best >= 0.7;
    bounded &= r.single_shot_bounded;
    list += fmt("%s%.3f->%.3f", list.empty() ? "" : " ", r.initial, r.best);
  }
  return {reached >= 4 && bounded,
          fmt("%d/5 seeds reach >= 0.7 from chance (%s); single-shot <= many-queries + 3 sigma: %s",
              reached, list.c_str(), bounded ? "yes" : "no")};
}

double median_final(const std::vector<TrainingRun>& runs) {
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(r.final_accuracy);
  return median(v);
}

Outcome criterion7() {
  const double full = median_final(training_runs(CouplingSet::Full));
  const double xz = median_final(training_runs(CouplingSet::XZ));
  const double z = median_final(training_runs(CouplingSet::Z));
  return {full >= xz && xz >= z && z <= full - 0.1,
          fmt("median final accuracy full %.3f >= XZ %.3f >= Z %.3f, Z at least 0.1 below full",
              full, xz, z)};
}

Outcome criterion8() {
  std::string detail;
  bool pass = true;
  int run_index = 0;
  for (auto [g_x, g_zz] : {std::pair{-0.1, 0.4}, std::pair{0.9, 0.9}}) {
    ++run_index;
    ExploreConfig c;
    c.g_x = g_x;
    c.g_zz = g_zz;
    const auto t = explore_phase(c);
    std::vector<double> loss;
    double min_abs_zz = std::abs(t.records.front().params[1]);
    for (const auto& r : t.records) {
      loss.push_back(*r.loss);
      min_abs_zz = std::min(min_abs_zz, std::abs(r.params[1]));
    }
    const double rise = largest_rise(moving_average(loss));
    const bool monotone = rise <= kMonotoneSlack;
    bool ok = t.complete && monotone;
    if (run_index == 1) ok &= min_abs_zz < 0.1;
    pass &= ok;
    detail += fmt("%srun %d from (%.1f, %.1f): min |g_zz| %.4f, final (%.4f, %.4f), largest "
                  "10-step-average loss rise %.2e",
                  detail.empty() ? "" : "; ", run_index, g_x, g_zz, min_abs_zz,
                  t.last().params[0], t.last().params[1], rise);
  }
  return {pass, detail};
}

Outcome criterion9() {
  CorrelatorSetup small;
  small.chain_length = 4;
  small.observable_sites = {0, 2};
  small.beta = 1e-4;
  small.lanczos.tol = 1e-12;
  double worst = 0.0;
  Rng rng(909);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    SensitivityState s{u(rng), u(rng), u(rng)};
    if (std::abs(s.g_x_1 - s.g_x_2) < 0.1) continue;
    const auto g = sensitivity_gradient(small, s);
    for (int k = 0; k < 3; ++k) {
      auto up = s, down = s;
      double* pu = k == 0 ? &up.g_x_1 : k == 1 ? &up.g_x_2 : &up.g_zz;
      double* pd = k == 0 ? &down.g_x_1 : k == 1 ? &down.g_x_2 : &down.g_zz;
      *pu += 1e-5;
      *pd -= 1e-5;
      const double fd = (sensitivity_loss(small, up) - sensitivity_loss(small, down)) / 2e-5;
      worst = std::max(worst, std::abs(fd - g.grad[static_cast<std::size_t>(k)]));
    }
  }
  bool pass = worst < 1e-4;
  std::string detail = fmt("n=4 gradient vs FD max error %.2e (< 1e-4)", worst);
  int run_index = 0;
  for (SensitivityState start : {SensitivityState{-0.2, -1.5, -1.5}, SensitivityState{-0.5, 0.3, 1.0}}) {
    ++run_index;
    SensitivityConfig c;
    c.start = start;
    const auto t = optimize_sensitivity(c);
    std::vector<double> neg_magnitude;
    for (const auto& r : t.records) neg_magnitude.push_back(-std::abs(*r.loss));
    const double drop = largest_rise(moving_average(neg_magnitude));
    const double sep0 = std::abs(t.records.front().params[0] - t.records.front().params[1]);
    const double sep1 = std::abs(t.last().params[0] - t.last().params[1]);
    const bool ok = t.complete && drop <= kMonotoneSlack && sep1 <= 0.5 * sep0;
    pass &= ok;
    detail += fmt("; run %d: |L| %.3f -> %.3f, largest 10-step-average |L| drop %.2e, separation "
                  "%.3f -> %.3f%s",
                  run_index, std::abs(*t.records.front().loss), std::abs(*t.last().loss), drop,
                  sep0, sep1, t.complete ? "" : (" (incomplete: " + t.failure + ")").c_str());
  }
  return {pass, detail};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion10() {
  bool identical = true;
  const auto root = std::filesystem::temp_directory_path() / "qep_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::vector<nlohmann::json> docs{
      {{"experiment", "train-phase-classifier"}, {"batches", 4}, {"batch_size", 4},
       {"test_size", 20}, {"eval_interval", 2}, {"grid_resolution", 2}, {"seed", 77}},
      {{"experiment", "explore-phase"}, {"steps", 10}, {"shots", 10}, {"seed", 77}}};
  std::ostringstream log;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto config = cli::parse_config(docs[i]);
    const auto a = root / fmt("%zu_a", i), b = root / fmt("%zu_b", i);
    identical &= cli::run(config, a, log) == 0 && cli::run(config, b, log) == 0;
    const auto csv = read_file(a / "trajectory.csv");
    identical &= !csv.empty() && csv == read_file(b / "trajectory.csv");
  }

  // Projector algebra on a 5-qubit register with sensor sites 3 and 4.
  const std::array<int, 2> sites{3, 4};
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(32, 32);
  double algebra = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto p = outcome_projector(OutcomeCombo::from_index(i), sites, 5).to_dense();
    algebra = std::max(algebra, (p * p - p).cwiseAbs().maxCoeff());
    for (int k = 0; k < 4; ++k) {
      if (k == i) continue;
      const auto q = outcome_projector(OutcomeCombo::from_index(k), sites, 5).to_dense();
      algebra = std::max(algebra, (p * q).cwiseAbs().maxCoeff());
    }
    total += p;
  }
  algebra = std::max(algebra, (total - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff());

  // Variance of noisy <P> with <P> = 0.3 and M = 10 at 10^4 draws.
  Rng rng(1010);
  const double mean = 0.3, analytic = mean * (1.0 - mean) / 10.0;
  const auto shots = ShotModel::finite(10, 0);
  double s1 = 0.0, s2 = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const double v = noisy_expectation(mean, mean, shots, rng);
    s1 += v;
    s2 += v * v;
  }
  const double var = s2 / draws - (s1 / draws) * (s1 / draws);
  const double rel = std::abs(var - analytic) / analytic;
  return {identical && algebra < 1e-12 && rel < 0.1,
          fmt("trajectory CSVs byte-identical: %s; projector algebra residual %.1e; empirical "
              "variance off by %.1f%% (< 10%%)",
              identical ? "yes" : "no", algebra, 100.0 * rel)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},  {5, criterion5},
      {6, criterion6}, {7, criterion7}, {8, criterion8}, {9, criterion9}, {10, criterion10}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
