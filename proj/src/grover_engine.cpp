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

#include "qrobot/grover_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

namespace qrobot {

namespace {

void check_element_count(std::uint64_t M) {
    if (M < 2 || !std::has_single_bit(M) || M > (std::uint64_t{1} << 16)) {
        throw GroverError("element count M=" + std::to_string(M) + " is not a power of two in [2, 65536]");
    }
}

std::uint64_t power(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= base;
    }
    return out;
}

}  // namespace

ConfigLabel element_label(std::uint64_t index) {
    ConfigLabel l;
    l.memory = Coords{static_cast<int>(index)};
    return l;
}

SparseState apply_hadamard(const SparseState &state, std::size_t axis, int bit) {
    SparseState out;
    const auto mask = static_cast<std::uint16_t>(1U << bit);
    for (const auto &[label, amp] : state) {
        const bool set = (label.memory[axis] & mask) != 0;
        ConfigLabel zero = label;
        ConfigLabel one = label;
        zero.memory[axis] = static_cast<std::uint16_t>(label.memory[axis] & ~mask);
        one.memory[axis] = static_cast<std::uint16_t>(label.memory[axis] | mask);
        out.add(zero, amp * M_SQRT1_2);
        out.add(one, set ? -amp * M_SQRT1_2 : amp * M_SQRT1_2);
    }
    return out;
}

SparseState apply_hadamard_pair(const SparseState &state, std::size_t axis1, int bit1, std::size_t axis2, int bit2) {
    SparseState out;
    const auto mask1 = static_cast<std::uint16_t>(1U << bit1);
    const auto mask2 = static_cast<std::uint16_t>(1U << bit2);
    for (const auto &[label, amp] : state) {
        const bool set1 = (label.memory[axis1] & mask1) != 0;
        const bool set2 = (label.memory[axis2] & mask2) != 0;
        for (int v1 = 0; v1 < 2; ++v1) {
            for (int v2 = 0; v2 < 2; ++v2) {
                ConfigLabel l = label;
                l.memory[axis1] = static_cast<std::uint16_t>(v1 ? (l.memory[axis1] | mask1) : (l.memory[axis1] & ~mask1));
                l.memory[axis2] = static_cast<std::uint16_t>(v2 ? (l.memory[axis2] | mask2) : (l.memory[axis2] & ~mask2));
                const bool negative = (set1 && v1) != (set2 && v2);
                out.add(l, negative ? -0.5 * amp : 0.5 * amp);
            }
        }
    }
    return out;
}

namespace {

// Hadamard on every memory qubit, two qubits at a time so the factors stay exact.
SparseState hadamard_all(SparseState s, std::size_t axes, int width) {
    std::vector<std::pair<std::size_t, int>> qubits;
    for (std::size_t a = 0; a < axes; ++a) {
        for (int b = 0; b < width; ++b) {
            qubits.emplace_back(a, b);
        }
    }
    std::size_t i = 0;
    for (; i + 1 < qubits.size(); i += 2) {
        s = apply_hadamard_pair(s, qubits[i].first, qubits[i].second, qubits[i + 1].first, qubits[i + 1].second);
    }
    if (i < qubits.size()) {
        s = apply_hadamard(s, qubits[i].first, qubits[i].second);
    }
    return s;
}

}  // namespace

SparseState uniform_state(std::uint64_t M) {
    check_element_count(M);
    return hadamard_all(SparseState::basis(element_label(0)), 1, std::countr_zero(M));
}

SparseState uniform_state(const TaskConfig &config) {
    config.validate();
    return hadamard_all(SparseState::basis(initial_label(config, Coords(static_cast<std::size_t>(config.d)))),
                        static_cast<std::size_t>(config.d), config.width());
}

Rotation rotation_params(std::uint64_t M) {
    if (M < 2) {
        throw GroverError("rotation_params: M must be >= 2");
    }
    Rotation r;
    r.theta = std::acos(1.0 - 2.0 / static_cast<double>(M));
    r.beta = r.theta / 2;
    return r;
}

int optimal_iterations(std::uint64_t M) {
    const double beta = rotation_params(M).beta;
    // nearbyint follows the default rounding mode, round-half-to-even.
    const double m = std::nearbyint(M_PI / (4 * beta) - 0.5);
    return m < 0 ? 0 : static_cast<int>(m);
}

double success_probability(std::uint64_t M, int m) {
    const double s = std::sin((2 * m + 1) * rotation_params(M).beta);
    return s * s;
}

GroverParams make_params(std::uint64_t M, std::uint64_t target_index, int m) {
    if (target_index >= M) {
        throw GroverError("target index outside [0, M-1]");
    }
    const Rotation r = rotation_params(M);
    return GroverParams{M, target_index, m, r.theta, r.beta};
}

SparseState oracle_flip(const SparseState &state, const Coords &target) {
    return apply_component_map(state,
                               [&target](const ConfigLabel &l) { return Mapped{l, l.memory == target ? -1.0 : 1.0}; });
}

SparseState diffusion(const SparseState &state, int d, int n) {
    const std::uint64_t M = power(static_cast<std::uint64_t>(n), d);
    const RegisterSet rest = RegisterSet(Register::memory).complement();
    struct Group {
        ConfigLabel representative;
        Complex sum;
    };
    std::map<ConfigLabel, Group> groups;
    for (const auto &[label, amp] : state) {
        auto [it, inserted] = groups.try_emplace(project(label, rest), Group{label, Complex{}});
        it->second.sum += amp;
    }
    SparseState out;
    for (const auto &[key, group] : groups) {
        const Complex mean = 2.0 * group.sum / static_cast<double>(M);
        ConfigLabel l = group.representative;
        for (std::uint64_t i = 0; i < M; ++i) {
            l.memory = Coords::unflatten(i, static_cast<std::size_t>(d), static_cast<std::uint32_t>(n));
            out.add(l, mean);
        }
    }
    for (const auto &[label, amp] : state) {
        out.add(label, -amp);
    }
    return out;
}

double memory_probability(const SparseState &state, const Coords &target) {
    double p = 0;
    for (const auto &[label, amp] : state) {
        if (label.memory == target) {
            p += std::norm(amp);
        }
    }
    return p;
}

AbstractResult grover_abstract(std::uint64_t M, std::uint64_t target_index, int m) {
    check_element_count(M);
    if (target_index >= M) {
        throw GroverError("target index outside [0, M-1]");
    }
    if (m < 0) {
        throw GroverError("iteration count must be >= 0");
    }
    const Coords target{static_cast<int>(target_index)};
    AbstractResult r;
    r.state = uniform_state(M);
    for (int i = 0; i < m; ++i) {
        r.state = diffusion(oracle_flip(r.state, target), 1, static_cast<int>(M));
    }
    r.probability = memory_probability(r.state, target);
    return r;
}

Eigen::Matrix2d q_in_span(std::uint64_t M, std::uint64_t target_index) {
    check_element_count(M);
    const Coords target{static_cast<int>(target_index)};
    const SparseState omega = SparseState::basis(element_label(target_index));
    SparseState alpha;
    for (std::uint64_t x = 0; x < M; ++x) {
        if (x != target_index) {
            alpha.add(element_label(x), 1.0 / std::sqrt(static_cast<double>(M - 1)));
        }
    }
    auto q = [&](const SparseState &s) { return diffusion(oracle_flip(s, target), 1, static_cast<int>(M)); };
    const SparseState basis[2] = {omega, alpha};
    Eigen::Matrix2d out;
    for (int j = 0; j < 2; ++j) {
        const SparseState image = q(basis[j]);
        for (int i = 0; i < 2; ++i) {
            out(i, j) = inner(basis[i], image).real();
        }
    }
    return out;
}

Eigen::Matrix2d q_rotation_matrix(std::uint64_t M) {
    const double md = static_cast<double>(M);
    const double c = 1.0 - 2.0 / md;
    const double s = 2.0 * std::sqrt(md - 1.0) / md;
    Eigen::Matrix2d out;
    out << c, s, -s, c;
    return out;
}

std::string variant_name(GroverVariant v) {
    return v == GroverVariant::after_return ? "after_return" : "at_endpoint";
}

std::uint64_t diffusion_cost(const TaskConfig &config) {
    return static_cast<std::uint64_t>(config.d) * static_cast<std::uint64_t>(config.width());
}

namespace {

bool at_program_start(const ConfigLabel &l) {
    return l.head == Head{} && l.control == 1 && l.output.is_done() && l.comp.all_equal(0) && l.position.all_equal(0);
}

// Advances every term independently until `stop`, then pads each one with
// further steps so all terms have taken as many steps as the slowest.
SparseState advance_all(const TaskMachine &machine, const SparseState &start,
                        const std::function<bool(const ConfigLabel &)> &stop, bool pad, StepLedger &ledger) {
    std::map<ConfigLabel, AdvanceResult> runs;
    StepLedger slowest;
    for (const auto &[label, amp] : start) {
        AdvanceResult r = advance_until(machine, label, stop);
        if (r.ledger.total >= slowest.total) {
            slowest = r.ledger;
        }
        runs.emplace(label, std::move(r));
    }
    if (pad) {
        for (auto &[label, r] : runs) {
            for (std::uint64_t t = r.ledger.total; t < slowest.total; ++t) {
                Mapped next = step_label(machine, r.label);
                r.label = next.label;
                r.phase *= next.phase;
            }
        }
    }
    ledger += slowest;
    return apply_component_map(start, [&runs](const ConfigLabel &l) {
        const AdvanceResult &r = runs.at(l);
        return Mapped{r.label, r.phase};
    });
}

double memory_entropy(const SparseState &state) {
    if (auto fast = support_entropy_bits(state)) {
        return *fast;
    }
    return entropy_bits(reduced_density(state));
}

SparseState restart_all(const SparseState &state) {
    return apply_component_map(state, [](const ConfigLabel &l) { return Mapped{restart(l)}; });
}

SparseState clear_ballast(const SparseState &state) {
    return apply_component_map(state, [](const ConfigLabel &l) {
        ConfigLabel out = l;
        out.ballast = 0;
        return Mapped{out};
    });
}

}  // namespace

SparseState round_trip(const TaskMachine &machine, const SparseState &start, StepLedger &ledger) {
    for (const auto &[label, amp] : start) {
        if (!at_program_start(label)) {
            throw std::invalid_argument("round_trip: term not at program start: " + label.str());
        }
    }
    return advance_all(machine, start, is_complete, true, ledger);
}

EmbeddedResult grover_embedded(const TaskConfig &config, int m, const EmbeddedOptions &options) {
    if (config.recording != Recording::sign_flip) {
        throw GroverError("grover_embedded needs sign_flip recording");
    }
    if (m < 0) {
        throw GroverError("iteration count must be >= 0");
    }
    const TaskMachine machine = build_machine(config);
    const std::uint64_t cost = diffusion_cost(config);
    EmbeddedResult r;
    r.state = uniform_state(config);
    r.ledger.charge_computation(cost);
    r.trace.push_back(memory_probability(r.state, config.target));
    r.trace_steps.push_back(r.ledger.total);

    if (options.variant == GroverVariant::after_return) {
        for (int i = 0; i < m; ++i) {
            if (i > 0) {
                r.state = restart_all(r.state);
            }
            r.state = round_trip(machine, r.state, r.ledger);
            r.max_entropy_bits = std::max(r.max_entropy_bits, memory_entropy(r.state));
            if (options.disentangle) {
                r.state = clear_ballast(r.state);
            }
            r.state = diffusion(r.state, config.d, config.n);
            r.ledger.charge_computation(cost);
            ++r.ledger.grover_iterations;
            r.trace.push_back(memory_probability(r.state, config.target));
            r.trace_steps.push_back(r.ledger.total);
        }
    } else if (m > 0) {
        // Components are held at their endpoints; the first oracle is the look
        // itself, later ones can only look at the site the robot occupies.
        r.state = advance_all(machine, r.state, [&config](const ConfigLabel &l) { return at_endpoint(config, l); },
                              false, r.ledger);
        r.max_entropy_bits = memory_entropy(r.state);
        for (int i = 0; i < m; ++i) {
            if (i > 0) {
                r.state = apply_component_map(r.state, [&config](const ConfigLabel &l) {
                    return Mapped{l, l.position == config.target ? -1.0 : 1.0};
                });
                r.ledger.charge_computation(1);
            }
            r.state = diffusion(r.state, config.d, config.n);
            r.ledger.charge_computation(cost);
            ++r.ledger.grover_iterations;
            r.trace.push_back(memory_probability(r.state, config.target));
            r.trace_steps.push_back(r.ledger.total);
        }
    }
    r.probability = r.trace.back();
    return r;
}

namespace {

ConfigLabel memory_record_label(const Coords &memory, std::uint8_t record) {
    ConfigLabel l;
    l.control = 0;
    l.memory = memory;
    l.record = record;
    return l;
}

}  // namespace

SparseState apply_record_u(const SparseState &state, int d, int n) {
    const std::uint64_t M = power(static_cast<std::uint64_t>(n), d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(M));
    // I_{|1>r}
    SparseState flipped =
        apply_component_map(state, [](const ConfigLabel &l) { return Mapped{l, l.record ? -1.0 : 1.0}; });
    // -I_phi_i = 2|phi_i><phi_i| - 1
    Complex overlap{};
    for (const auto &[label, a] : flipped) {
        if (label.record == 0) {
            overlap += amp * a;
        }
    }
    SparseState out = flipped.scaled(-1.0);
    for (std::uint64_t i = 0; i < M; ++i) {
        out.add(memory_record_label(
                    Coords::unflatten(i, static_cast<std::size_t>(d), static_cast<std::uint32_t>(n)), 0),
                2.0 * overlap * amp);
    }
    return out;
}

RecordResult record_variant(const TaskConfig &config, int m_max) {
    if (config.recording != Recording::record_qubit) {
        throw GroverError("record_variant needs record_qubit recording");
    }
    if (m_max < 0) {
        throw GroverError("iteration count must be >= 0");
    }
    const TaskMachine machine = build_machine(config);
    StepLedger ledger;
    SparseState done = clear_ballast(round_trip(machine, uniform_state(config), ledger));

    RecordResult r;
    r.phi_f = apply_component_map(
        done, [](const ConfigLabel &l) { return Mapped{memory_record_label(l.memory, l.record)}; });
    const ConfigLabel marked = memory_record_label(config.target, 1);
    SparseState state = r.phi_f;
    for (int i = 0; i <= m_max; ++i) {
        if (i > 0) {
            state = apply_record_u(state, config.d, config.n);
        }
        r.probability.push_back(std::norm(state.amplitude(marked)));
        r.norms.push_back(norm(state));
    }
    return r;
}

}  // namespace qrobot
