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

#include "qep/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qep {

std::string_view to_string(ParameterRole role) {
  switch (role) {
    case ParameterRole::Input: return "input";
    case ParameterRole::Trainable: return "trainable";
    case ParameterRole::OutputNudge: return "output_nudge";
  }
  return "unknown";
}

ParameterRole role_from_string(std::string_view text) {
  if (text == "input") return ParameterRole::Input;
  if (text == "trainable") return ParameterRole::Trainable;
  if (text == "output_nudge") return ParameterRole::OutputNudge;
  throw std::invalid_argument("unknown parameter role '" + std::string(text) + "'");
}

ParameterizedHamiltonian::ParameterizedHamiltonian(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 30) {
    throw std::invalid_argument("n_sites must lie in [1, 30]");
  }
}

void ParameterizedHamiltonian::check_label(std::string_view label) const {
  if (label.empty()) throw std::invalid_argument("empty term label");
  if (find_term(label)) {
    throw std::invalid_argument("duplicate label '" + std::string(label) + "'");
  }
  for (const auto& o : outputs_) {
    if (o.label == label) {
      throw std::invalid_argument("duplicate label '" + std::string(label) + "'");
    }
  }
}

void ParameterizedHamiltonian::add_term(HamiltonianTerm term) {
  check_label(term.label);
  if (!std::isfinite(term.coefficient)) {
    throw std::invalid_argument("term '" + term.label + "' has non-finite coefficient");
  }
  if (term.op.n_sites() != n_sites_) {
    throw std::invalid_argument("term '" + term.label + "' acts on the wrong number of sites");
  }
  terms_.push_back(std::move(term));
}

void ParameterizedHamiltonian::add_term(std::string label, ParameterRole role,
                                        double coefficient, PauliSum op) {
  add_term(HamiltonianTerm{std::move(label), role, coefficient, std::move(op)});
}

void ParameterizedHamiltonian::add_output(std::string label, PauliSum op) {
  check_label(label);
  if (op.n_sites() != n_sites_) {
    throw std::invalid_argument("output '" + label + "' acts on the wrong number of sites");
  }
  outputs_.push_back({std::move(label), std::move(op)});
}

std::optional<std::size_t> ParameterizedHamiltonian::find_term(std::string_view label) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].label == label) return i;
  }
  return std::nullopt;
}

const HamiltonianTerm& ParameterizedHamiltonian::term(std::string_view label) const {
  auto i = find_term(label);
  if (!i) throw std::out_of_range("no term labelled '" + std::string(label) + "'");
  return terms_[*i];
}

const PauliSum& ParameterizedHamiltonian::observable(std::string_view label) const {
  if (auto i = find_term(label)) return terms_[*i].op;
  for (const auto& o : outputs_) {
    if (o.label == label) return o.op;
  }
  throw std::out_of_range("no term or output labelled '" + std::string(label) + "'");
}

std::vector<std::size_t> ParameterizedHamiltonian::indices(ParameterRole role) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].role == role) out.push_back(i);
  }
  return out;
}

std::vector<std::string> ParameterizedHamiltonian::labels(ParameterRole role) const {
  std::vector<std::string> out;
  for (const auto& t : terms_) {
    if (t.role == role) out.push_back(t.label);
  }
  return out;
}

std::vector<double> ParameterizedHamiltonian::coefficients(ParameterRole role) const {
  std::vector<double> out;
  for (const auto& t : terms_) {
    if (t.role == role) out.push_back(t.coefficient);
  }
  return out;
}

ParameterizedHamiltonian ParameterizedHamiltonian::with_coefficient(std::string_view label,
                                                                    double value) const {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite coefficient");
  auto i = find_term(label);
  if (!i) throw std::out_of_range("no term labelled '" + std::string(label) + "'");
  ParameterizedHamiltonian out = *this;
  out.terms_[*i].coefficient = value;
  return out;
}

ParameterizedHamiltonian ParameterizedHamiltonian::with_coefficients(
    ParameterRole role, std::span<const double> values) const {
  const auto idx = indices(role);
  if (idx.size() != values.size()) {
    throw std::invalid_argument("expected " + std::to_string(idx.size()) + " " +
                                std::string(to_string(role)) + " values, got " +
                                std::to_string(values.size()));
  }
  ParameterizedHamiltonian out = *this;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (!std::isfinite(values[k])) throw std::invalid_argument("non-finite coefficient");
    out.terms_[idx[k]].coefficient = values[k];
  }
  return out;
}

PauliSum ParameterizedHamiltonian::as_pauli_sum() const {
  PauliSum sum(n_sites_);
  for (const auto& t : terms_) {
    for (const auto& p : t.op.terms()) sum.add(t.coefficient * p.coefficient, p.string);
  }
  return sum;
}

std::size_t ParameterizedHamiltonian::pauli_string_count() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n += t.op.terms().size();
  return n;
}

SparseOperator assemble(const ParameterizedHamiltonian& h) {
  return realize(h.as_pauli_sum());
}

ParameterizedHamiltonian with_nudge(const ParameterizedHamiltonian& h,
                                    std::span<const double> nu) {
  if (nu.size() != h.outputs().size()) {
    throw std::invalid_argument("nudge vector has " + std::to_string(nu.size()) +
                                " entries for " + std::to_string(h.outputs().size()) +
                                " output observables");
  }
  ParameterizedHamiltonian out = h;
  for (std::size_t l = 0; l < nu.size(); ++l) {
    const auto& o = h.outputs()[l];
    out.add_term("nudge:" + o.label, ParameterRole::OutputNudge, nu[l], o.op);
  }
  return out;
}

PauliSum extend(const PauliSum& op, int n_sites) {
  if (n_sites < op.n_sites()) {
    throw std::invalid_argument("cannot shrink a Pauli sum");
  }
  PauliSum out(n_sites);
  for (const auto& t : op.terms()) {
    std::vector<PauliLetter> letters(t.string.letters().begin(), t.string.letters().end());
    letters.resize(static_cast<std::size_t>(n_sites), PauliLetter::I);
    out.add(t.coefficient, PauliString(std::move(letters)));
  }
  return out;
}

std::string_view to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "open";
}

Boundary boundary_from_string(std::string_view text) {
  if (text == "periodic") return Boundary::Periodic;
  if (text == "open") return Boundary::Open;
  throw std::invalid_argument("boundary must be 'periodic' or 'open', got '" +
                              std::string(text) + "'");
}

ParameterizedHamiltonian build_cluster_ising(double g_zxz, double g_zz, double g_x, int n,
                                             Boundary boundary, ClusterIsingRoles roles) {
  if (n < 3) throw std::invalid_argument("cluster Ising chain needs n >= 3");
  using L = PauliLetter;
  const bool periodic = boundary == Boundary::Periodic;
  auto wrap = [n](int s) { return (s + n) % n; };

  PauliSum zxz(n), zz(n), x(n);
  for (int j = 0; j < n; ++j) {
    if (periodic || (j >= 1 && j <= n - 2)) {
      zxz.add(1.0, PauliString::on_sites(n, {{wrap(j - 1), L::Z}, {j, L::X}, {wrap(j + 1), L::Z}}));
    }
    if (periodic || j <= n - 2) {
      zz.add(-1.0, PauliString::on_sites(n, {{j, L::Z}, {wrap(j + 1), L::Z}}));
    }
    x.add(-1.0, PauliString::on_sites(n, {{j, L::X}}));
  }
  ParameterizedHamiltonian h(n);
  h.add_term("g_zxz", roles.zxz, g_zxz, std::move(zxz));
  h.add_term("g_zz", roles.zz, g_zz, std::move(zz));
  h.add_term("g_x", roles.x, g_x, std::move(x));
  return h;
}

namespace {

constexpr std::array<PauliLetter, 3> kXYZ{PauliLetter::X, PauliLetter::Y, PauliLetter::Z};

}  // namespace

std::size_t SensorArchitecture::parameter_count() const {
  return 15 + 2 * 2 * 3 * chain_letters.size();
}

ParameterizedHamiltonian build_sensor_system(const ParameterizedHamiltonian& chain,
                                             const SensorArchitecture& arch,
                                             std::span<const double> theta) {
  const int n_chain = chain.n_sites();
  for (int a : arch.attach_sites) {
    if (a < 0 || a >= n_chain) {
      throw std::out_of_range("sensor attach site " + std::to_string(a) +
                              " outside chain of " + std::to_string(n_chain));
    }
  }
  if (arch.attach_sites[0] == arch.attach_sites[1]) {
    throw std::invalid_argument("sensor attach sites must be distinct");
  }
  for (auto l : arch.chain_letters) {
    if (l == PauliLetter::I) throw std::invalid_argument("identity is not a coupling letter");
  }
  if (theta.size() != arch.parameter_count()) {
    throw std::invalid_argument("sensor needs " + std::to_string(arch.parameter_count()) +
                                " couplings, got " + std::to_string(theta.size()));
  }

  const int n = n_chain + 2;
  const std::array<int, 2> sensor{n_chain, n_chain + 1};
  ParameterizedHamiltonian h(n);
  for (const auto& t : chain.terms()) {
    h.add_term(t.label, t.role, t.coefficient, extend(t.op, n));
  }
  for (const auto& o : chain.outputs()) h.add_output(o.label, extend(o.op, n));

  std::size_t k = 0;
  auto add = [&](std::string label, std::initializer_list<std::pair<int, PauliLetter>> ops) {
    h.add_term(std::move(label), ParameterRole::Trainable, theta[k++],
               PauliSum(1.0, PauliString::on_sites(n, ops)));
  };
  for (int s = 0; s < 2; ++s) {
    for (auto a : kXYZ) add("s" + std::to_string(s) + ":" + to_char(a), {{sensor[s], a}});
  }
  for (auto a : kXYZ) {
    for (auto b : kXYZ) {
      add(std::string("s0s1:") + to_char(a) + to_char(b), {{sensor[0], a}, {sensor[1], b}});
    }
  }
  for (int s = 0; s < 2; ++s) {
    for (int site : arch.attach_sites) {
      for (auto a : kXYZ) {
        for (auto b : arch.chain_letters) {
          add("s" + std::to_string(s) + "c" + std::to_string(site) + ":" + to_char(a) +
                  to_char(b),
              {{sensor[s], a}, {site, b}});
        }
      }
    }
  }
  return h;
}

nlohmann::json to_json(const PauliSum& op) {
  auto arr = nlohmann::json::array();
  for (const auto& t : op.terms()) {
    arr.push_back({{"weight", t.coefficient}, {"letters", t.string.str()}});
  }
  return arr;
}

PauliSum pauli_sum_from_json(const nlohmann::json& j, int n_sites) {
  PauliSum op(n_sites);
  for (const auto& t : j) {
    op.add(t.at("weight").get<double>(), PauliString::parse(t.at("letters").get<std::string>()));
  }
  return op;
}

nlohmann::json to_json(const ParameterizedHamiltonian& h) {
  nlohmann::json j;
  j["n_sites"] = h.n_sites();
  auto terms = nlohmann::json::array();
  for (const auto& t : h.terms()) {
    terms.push_back({{"label", t.label},
                     {"role", std::string(to_string(t.role))},
                     {"coefficient", t.coefficient},
                     {"letters", to_json(t.op)}});
  }
  j["terms"] = std::move(terms);
  auto outputs = nlohmann::json::array();
  for (const auto& o : h.outputs()) {
    outputs.push_back({{"label", o.label}, {"letters", to_json(o.op)}});
  }
  j["outputs"] = std::move(outputs);
  return j;
}

ParameterizedHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  ParameterizedHamiltonian h(j.at("n_sites").get<int>());
  for (const auto& t : j.at("terms")) {
    h.add_term(t.at("label").get<std::string>(),
               role_from_string(t.at("role").get<std::string>()),
               t.at("coefficient").get<double>(),
               pauli_sum_from_json(t.at("letters"), h.n_sites()));
  }
  if (j.contains("outputs")) {
    for (const auto& o : j.at("outputs")) {
      h.add_output(o.at("label").get<std::string>(),
                   pauli_sum_from_json(o.at("letters"), h.n_sites()));
    }
  }
  return h;
}

}  // namespace qep
