// Copyright 2026 The qrobot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrobot/state_core.hpp"

#include <cmath>
#include <sstream>

namespace qrobot {

Coords::Coords(std::size_t size, std::uint16_t fill) : size_(static_cast<std::uint8_t>(size)) {
    if (size > kMaxDim) {
        throw std::invalid_argument("Coords: dimension exceeds kMaxDim");
    }
    for (std::size_t i = 0; i < size; ++i) {
        values_[i] = fill;
    }
}

Coords::Coords(std::initializer_list<int> values) : Coords(values.size()) {
    std::size_t i = 0;
    for (int v : values) {
        values_[i++] = static_cast<std::uint16_t>(v);
    }
}

bool Coords::all_equal(std::uint16_t v) const {
    for (std::size_t i = 0; i < size_; ++i) {
        if (values_[i] != v) {
            return false;
        }
    }
    return true;
}

std::uint64_t Coords::flatten(std::uint32_t side) const {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < size_; ++i) {
        index = index * side + values_[i];
    }
    return index;
}

Coords Coords::unflatten(std::uint64_t index, std::size_t size, std::uint32_t side) {
    Coords out(size);
    for (std::size_t i = size; i-- > 0;) {
        out.values_[i] = static_cast<std::uint16_t>(index % side);
        index /= side;
    }
    return out;
}

std::string Coords::str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < size_; ++i) {
        if (i) {
            out += ",";
        }
        out += std::to_string(values_[i]);
    }
    return out + ")";
}

int Output::direction() const {
    if (!is_move()) {
        return 0;
    }
    return (code_ % 2 == 1) ? 1 : -1;
}

std::string Output::str() const {
    if (is_done()) {
        return "dn";
    }
    if (is_look()) {
        return "look";
    }
    return (direction() > 0 ? "+x" : "-x") + std::to_string(axis() + 1);
}

std::optional<Output> Output::parse(const std::string &text) {
    if (text == "dn") {
        return done();
    }
    if (text == "look") {
        return look();
    }
    if (text.size() >= 3 && (text[0] == '+' || text[0] == '-') && text[1] == 'x') {
        int axis = 0;
        try {
            axis = std::stoi(text.substr(2));
        } catch (const std::exception &) {
            return std::nullopt;
        }
        if (axis < 1 || axis > static_cast<int>(kMaxDim)) {
            return std::nullopt;
        }
        return text[0] == '+' ? advance(axis - 1) : retreat(axis - 1);
    }
    return std::nullopt;
}

std::string stage_name(Stage stage) {
    switch (stage) {
        case Stage::copy:
            return "copy";
        case Stage::test:
            return "test";
        case Stage::decrement:
            return "decrement";
        case Stage::look:
            return "look";
        case Stage::compare:
            return "compare";
        case Stage::increment:
            return "increment";
        case Stage::uncopy:
            return "uncopy";
        case Stage::done:
            return "done";
    }
    return "?";
}

std::string ConfigLabel::str() const {
    std::ostringstream out;
    out << *this;
    return out.str();
}

std::ostream &operator<<(std::ostream &out, const ConfigLabel &label) {
    out << "pos=" << label.position.str() << " m=" << label.memory.str() << " L=" << label.comp.str()
        << " o=" << label.output.str() << " c=" << int(label.control) << " r=" << int(label.record)
        << " b=" << label.ballast << " h=" << stage_name(label.head.stage) << "[" << int(label.head.axis) << ","
        << int(label.head.bit) << "]";
    return out;
}

NonInjectiveMapError::NonInjectiveMapError(const ConfigLabel &first, const ConfigLabel &second,
                                           const ConfigLabel &image)
    : std::runtime_error("component map is not injective: " + first.str() + " and " + second.str() +
                         " both map to " + image.str()),
      first(first),
      second(second),
      image(image) {
}

SparseState SparseState::basis(const ConfigLabel &label, Complex amplitude) {
    SparseState out;
    out.add(label, amplitude);
    return out;
}

void SparseState::add(const ConfigLabel &label, Complex amplitude) {
    auto [it, inserted] = terms_.try_emplace(label, amplitude);
    if (!inserted) {
        it->second += amplitude;
    }
    if (std::abs(it->second) < kPruneThreshold) {
        terms_.erase(it);
    }
}

Complex SparseState::amplitude(const ConfigLabel &label) const {
    auto it = terms_.find(label);
    return it == terms_.end() ? Complex{} : it->second;
}

SparseState SparseState::scaled(Complex factor) const {
    SparseState out;
    for (const auto &[label, amp] : terms_) {
        out.add(label, factor * amp);
    }
    return out;
}

double norm(const SparseState &state) {
    double sum = 0;
    for (const auto &[label, amp] : state) {
        sum += std::norm(amp);
    }
    return std::sqrt(sum);
}

Complex inner(const SparseState &a, const SparseState &b) {
    const auto &small = a.size() <= b.size() ? a : b;
    const auto &large = a.size() <= b.size() ? b : a;
    Complex sum{};
    for (const auto &[label, amp] : small) {
        Complex other = large.amplitude(label);
        sum += (&small == &a) ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return sum;
}

SparseState axpy(const SparseState &a, Complex factor, const SparseState &b) {
    SparseState out = a;
    for (const auto &[label, amp] : b) {
        out.add(label, factor * amp);
    }
    return out;
}

SparseState apply_component_map(const SparseState &state, const ComponentMap &map) {
    SparseState out;
    std::map<ConfigLabel, ConfigLabel> preimage;
    for (const auto &[label, amp] : state) {
        Mapped image = map(label);
        auto [it, inserted] = preimage.try_emplace(image.label, label);
        if (!inserted) {
            throw NonInjectiveMapError(it->second, label, image.label);
        }
        out.add(image.label, image.phase * amp);
    }
    return out;
}

ConfigLabel project(const ConfigLabel &label, RegisterSet keep) {
    ConfigLabel out;
    out.control = 0;
    if (keep.contains(Register::position)) {
        out.position = label.position;
    }
    if (keep.contains(Register::memory)) {
        out.memory = label.memory;
    }
    if (keep.contains(Register::comp)) {
        out.comp = label.comp;
    }
    if (keep.contains(Register::output)) {
        out.output = label.output;
    }
    if (keep.contains(Register::control)) {
        out.control = label.control;
    }
    if (keep.contains(Register::record)) {
        out.record = label.record;
    }
    if (keep.contains(Register::ballast)) {
        out.ballast = label.ballast;
    }
    if (keep.contains(Register::head)) {
        out.head = label.head;
    }
    return out;
}

DensityMatrix reduced_density(const SparseState &state, RegisterSet keep) {
    const RegisterSet rest = keep.complement();

    // Kept values from the support, in label order.
    std::map<ConfigLabel, std::size_t> index;
    for (const auto &[label, amp] : state) {
        index.try_emplace(project(label, keep), 0);
    }
    DensityMatrix rho;
    rho.basis.reserve(index.size());
    for (auto &[kept, i] : index) {
        i = rho.basis.size();
        rho.basis.push_back(kept);
    }

    // Terms sharing a value of the traced-out registers interfere; group them.
    std::map<ConfigLabel, std::vector<std::pair<std::size_t, Complex>>> groups;
    for (const auto &[label, amp] : state) {
        groups[project(label, rest)].emplace_back(index.at(project(label, keep)), amp);
    }

    const auto dim = static_cast<Eigen::Index>(rho.basis.size());
    rho.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &[r, column] : groups) {
        for (const auto &[i, ai] : column) {
            for (const auto &[j, aj] : column) {
                rho.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += ai * std::conj(aj);
            }
        }
    }
    return rho;
}

double entropy_bits(const DensityMatrix &rho) {
    if (rho.dim() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries, Eigen::EigenvaluesOnly);
    double entropy = 0;
    for (double lambda : solver.eigenvalues()) {
        if (lambda > 1e-15) {
            entropy -= lambda * std::log2(lambda);
        }
    }
    // A rank-one matrix can give -1e-16 from an eigenvalue just above 1.
    return entropy < 0 ? 0.0 : entropy;
}

std::optional<double> support_entropy_bits(const SparseState &state, RegisterSet keep) {
    const RegisterSet rest = keep.complement();
    std::map<ConfigLabel, ConfigLabel> partner;
    std::map<ConfigLabel, double> weight;
    for (const auto &[label, amp] : state) {
        ConfigLabel k = project(label, keep);
        ConfigLabel r = project(label, rest);
        auto [it, inserted] = partner.try_emplace(k, r);
        if (!inserted && it->second != r) {
            return std::nullopt;
        }
        weight[r] += std::norm(amp);
    }
    double entropy = 0;
    for (const auto &[r, p] : weight) {
        if (p > 1e-15) {
            entropy -= p * std::log2(p);
        }
    }
    return entropy;
}

}  // namespace qrobot
