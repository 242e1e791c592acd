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

#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "qep/random.hpp"

namespace qep::cli {

using nlohmann::json;

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  CsvWriter& header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << '\n';
    return *this;
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(const std::optional<double>& v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

std::vector<double> trailing_average(const std::vector<double>& v, std::size_t window) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    out.push_back(std::accumulate(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(i) + 1, 0.0) /
                  static_cast<double>(i + 1 - lo));
  }
  return out;
}

json base_manifest(const RunConfig& config, std::uint64_t equilibrations, bool complete,
                   const std::string& failure) {
  return {{"experiment", config.experiment()},
          {"status", complete ? "COMPLETE" : "INCOMPLETE"},
          {"failure", failure},
          {"config", config.values()},
          {"seed", config.seed()},
          {"software_version", std::string(software_version())},
          {"equilibrations", equilibrations}};
}

json finish_trajectory(const RunConfig& config, const Trajectory& t,
                       const std::filesystem::path& dir) {
  std::ofstream csv(dir / "trajectory.csv");
  write_trajectory_csv(t, csv);
  json m = trajectory_manifest(t);
  m["config"] = config.values();
  return m;
}

std::string shots_label(const std::optional<int>& m) {
  return m ? std::to_string(*m) : std::string("inf");
}

json run_supervised(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log) {
  const auto c = supervised_config(config);
  log << "training " << c.setup.parameter_count() << " couplings for up to " << c.batches
      << " batches\n";
  const auto t = train_supervised(c);
  json m = finish_trajectory(config, t, dir);
  const auto& theta = t.last().params;
  CsvWriter summary(dir / "summary.csv");
  summary.header({"g_zxz", "g_zz", "g_x", "p_cluster", "p_ferromagnetic", "p_paramagnetic"});
  for (const auto& r : probability_grid(c.setup, theta, config.values()["grid_resolution"].get<int>(),
                                        c.lanczos)) {
    summary.row(r[0], r[1], r[2], r[3], r[4], r[5]);
  }
  for (auto it = t.records.rbegin(); it != t.records.rend(); ++it) {
    if (it->many_queries_accuracy) {
      m["results"] = {{"final_step", it->step},
                      {"many_queries_accuracy", *it->many_queries_accuracy},
                      {"single_shot_accuracy", *it->single_shot_accuracy}};
      log << "step " << it->step << ": many-queries accuracy " << *it->many_queries_accuracy
          << ", single-shot " << *it->single_shot_accuracy << '\n';
      break;
    }
  }
  return m;
}

json run_explore(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log) {
  const auto t = explore_phase(explore_config(config));
  json m = finish_trajectory(config, t, dir);
  std::vector<double> loss;
  for (const auto& r : t.records) loss.push_back(*r.loss);
  const auto avg = trailing_average(loss, 10);
  CsvWriter summary(dir / "summary.csv");
  summary.header({"step", "loss", "loss_average_10", "g_x", "g_zz", "xx"});
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    summary.row(r.step, loss[i], avg[i], r.params[0], r.params[1], r.outputs[0]);
  }
  const auto& last = t.last();
  m["results"] = {{"final_g_x", last.params[0]}, {"final_g_zz", last.params[1]},
                  {"final_loss", *last.loss}};
  log << "final (g_x, g_zz) = (" << last.params[0] << ", " << last.params[1] << ")\n";
  return m;
}

json run_sensitivity(const RunConfig& config, const std::filesystem::path& dir,
                     std::ostream& log) {
  const auto t = optimize_sensitivity(sensitivity_config(config));
  json m = finish_trajectory(config, t, dir);
  std::vector<double> magnitude;
  for (const auto& r : t.records) magnitude.push_back(std::abs(*r.loss));
  const auto avg = trailing_average(magnitude, 10);
  CsvWriter summary(dir / "summary.csv");
  summary.header({"step", "loss", "abs_loss_average_10", "separation", "y1", "y2"});
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    summary.row(r.step, *r.loss, avg[i], std::abs(r.params[0] - r.params[1]), r.outputs[0],
                r.outputs[1]);
  }
  const auto& first = t.records.front();
  const auto& last = t.last();
  m["results"] = {{"initial_separation", std::abs(first.params[0] - first.params[1])},
                  {"final_separation", std::abs(last.params[0] - last.params[1])},
                  {"final_loss", *last.loss}};
  log << "final |L| = " << std::abs(*last.loss) << '\n';
  return m;
}

json run_audit(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log) {
  const std::uint64_t before = equilibration_count();
  const auto a = onsager_reciprocity_audit(audit_config(config));
  {
    CsvWriter traj(dir / "trajectory.csv");
    traj.header({"instance", "j", "l", "chi_jl", "chi_lj", "exact_jl", "exact_lj", "asymmetry"});
    for (const auto& e : a.entries) {
      traj.row(e.instance, e.j, e.l, e.chi_jl, e.chi_lj, e.exact_jl, e.exact_lj,
               std::abs(e.chi_jl - e.chi_lj));
    }
  }
  CsvWriter summary(dir / "summary.csv");
  summary.header({"instance", "max_asymmetry", "max_exact_error"});
  std::map<int, std::pair<double, double>> per_instance;
  for (const auto& e : a.entries) {
    auto& [asym, err] = per_instance[e.instance];
    asym = std::max(asym, std::abs(e.chi_jl - e.chi_lj));
    err = std::max({err, std::abs(e.exact_jl - e.chi_jl), std::abs(e.exact_lj - e.chi_lj)});
  }
  for (const auto& [i, v] : per_instance) summary.row(i, v.first, v.second);
  json m = base_manifest(config, equilibration_count() - before, true, "");
  m["results"] = {{"max_asymmetry", a.max_asymmetry},
                  {"max_exact_error", a.max_exact_error},
                  {"rejected_draws", a.rejected_draws}};
  log << "max asymmetry " << a.max_asymmetry << ", max exact-vs-FD error " << a.max_exact_error
      << '\n';
  return m;
}

json run_sweep(const RunConfig& config, const std::filesystem::path& dir, std::ostream& log) {
  const auto r = nudge_sweep(sweep_config(config));
  {
    CsvWriter traj(dir / "trajectory.csv");
    traj.header({"batch", "shots", "beta", "overlap"});
    for (const auto& c : r.cells) {
      for (std::size_t b = 0; b < c.overlaps.size(); ++b) {
        traj.row(static_cast<int>(b), shots_label(c.shots), c.beta, c.overlaps[b]);
      }
    }
  }
  CsvWriter summary(dir / "summary.csv");
  summary.header({"shots", "beta", "median", "min", "max"});
  json cells = json::array();
  for (const auto& c : r.cells) {
    const auto [lo, hi] = std::minmax_element(c.overlaps.begin(), c.overlaps.end());
    summary.row(shots_label(c.shots), c.beta, c.median, *lo, *hi);
    cells.push_back({{"shots", shots_label(c.shots)}, {"beta", c.beta}, {"median", c.median}});
    log << "M=" << shots_label(c.shots) << " beta=" << c.beta << " median overlap " << c.median
        << '\n';
  }
  json m = base_manifest(config, r.equilibrations, true, "");
  m["results"] = {{"cells", cells}, {"couplings", r.couplings}};
  return m;
}

}  // namespace

AuditResult onsager_reciprocity_audit(const AuditConfig& config) {
  AuditResult result;
  Rng rng = make_stream(config.seed, {stream::kAudit});
  auto exact_opts = config.lanczos;
  exact_opts.tol = std::min(exact_opts.tol, 1e-12);
  for (int inst = 0; inst < config.instances; ++inst) {
    ParameterizedHamiltonian h = random_hamiltonian(config.n_sites, config.params_per_instance, rng);
    while (ground_state(assemble(h), config.lanczos).gap <= config.min_gap) {
      ++result.rejected_draws;
      h = random_hamiltonian(config.n_sites, config.params_per_instance, rng);
    }
    const auto labels = h.labels(ParameterRole::Input);
    std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
    std::set<std::pair<std::size_t, std::size_t>> used;
    const auto max_pairs = labels.size() * (labels.size() - 1) / 2;
    while (used.size() < std::min<std::size_t>(static_cast<std::size_t>(config.pairs), max_pairs)) {
      std::size_t a = pick(rng), b = pick(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (!used.insert({a, b}).second) continue;
      AuditEntry e{inst, labels[a], labels[b]};
      e.chi_jl = finite_difference_susceptibility(h, e.j, e.l, config.delta, config.lanczos);
      e.chi_lj = finite_difference_susceptibility(h, e.l, e.j, config.delta, config.lanczos);
      e.exact_jl = exact_susceptibility(h, e.j, e.l, exact_opts);
      e.exact_lj = exact_susceptibility(h, e.l, e.j, exact_opts);
      result.max_asymmetry = std::max(result.max_asymmetry, std::abs(e.chi_jl - e.chi_lj));
      result.max_exact_error = std::max({result.max_exact_error, std::abs(e.exact_jl - e.chi_jl),
                                         std::abs(e.exact_lj - e.chi_lj)});
      result.entries.push_back(e);
    }
  }
  return result;
}

int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  std::filesystem::create_directories(out_dir);
  static const std::map<std::string,
                        std::function<json(const RunConfig&, const std::filesystem::path&,
                                           std::ostream&)>>
      runners{{"train-phase-classifier", run_supervised},
              {"explore-phase", run_explore},
              {"optimize-sensitivity", run_sensitivity},
              {"onsager-audit", run_audit},
              {"nudge-sweep", run_sweep}};
  const std::uint64_t before = equilibration_count();
  json manifest;
  try {
    manifest = runners.at(config.experiment())(config, out_dir, log);
  } catch (const std::exception& e) {
    manifest = base_manifest(config, equilibration_count() - before, false, e.what());
  }
  write_json(out_dir / "manifest.json", manifest);
  const bool ok = manifest["status"] == "COMPLETE";
  if (!ok) log << "experiment failed: " << manifest["failure"].get<std::string>() << '\n';
  return ok ? 0 : 1;
}

}  // namespace qep::cli
