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

#include "qrobot/task_machine.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace qrobot {

int TaskConfig::width() const {
    return std::countr_zero(static_cast<unsigned>(n));
}

std::uint64_t TaskConfig::sites() const {
    std::uint64_t m = 1;
    for (int i = 0; i < d; ++i) {
        m *= static_cast<std::uint64_t>(n);
    }
    return m;
}

void TaskConfig::validate() const {
    if (d < 1 || d > static_cast<int>(kMaxDim)) {
        throw ConfigError("dimension d=" + std::to_string(d) + " outside [1," + std::to_string(kMaxDim) + "]");
    }
    if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n)) || n > (1 << 15)) {
        throw ConfigError("side N=" + std::to_string(n) + " is not a power of two >= 2");
    }
    if (target.size() != static_cast<std::size_t>(d)) {
        throw ConfigError("target has " + std::to_string(target.size()) + " coordinates, expected " +
                          std::to_string(d));
    }
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (target[i] >= n) {
            throw ConfigError("target " + target.str() + " outside [0," + std::to_string(n - 1) + "]^" +
                              std::to_string(d));
        }
    }
    if (ballast.cyclic && (ballast.qubits < 1 || ballast.qubits > 62)) {
        throw ConfigError("cyclic ballast needs 1..62 qubits");
    }
}

std::string phase_name(PhaseKind kind) {
    return kind == PhaseKind::computation ? "computation" : "action";
}

void StepLedger::charge(StepCharge c) {
    ++total;
    if (c.kind == PhaseKind::computation) {
        ++computation_steps;
    } else {
        ++action_steps;
    }
    if (c.carry) {
        ++carry_ops;
    }
}

void StepLedger::charge_computation(std::uint64_t steps) {
    total += steps;
    computation_steps += steps;
}

StepLedger &StepLedger::operator+=(const StepLedger &other) {
    total += other.total;
    computation_steps += other.computation_steps;
    action_steps += other.action_steps;
    carry_ops += other.carry_ops;
    grover_iterations += other.grover_iterations;
    return *this;
}

namespace {

bool bit_of(std::uint16_t value, int bit) {
    return ((value >> bit) & 1U) != 0;
}

Head head(Stage stage, std::size_t axis = 0, int bit = 0) {
    return Head{stage, static_cast<std::uint8_t>(axis), static_cast<std::uint8_t>(bit)};
}

// Action phase: one move along the axis named by the output symbol, then hand
// control back. Output, memory, comp and head are untouched.
Mapped action_step(const TaskConfig &config, const ConfigLabel &in) {
    Mapped out{in};
    ConfigLabel &l = out.label;
    if (in.output.is_move()) {
        const std::size_t a = in.output.axis();
        if (a < l.position.size()) {
            // Off-program labels wrap on the torus so the map stays a bijection.
            const int n = config.n;
            l.position[a] = static_cast<std::uint16_t>((l.position[a] + n + in.output.direction()) % n);
        }
    }
    l.control = 1;
    return out;
}

// Computation phase. Position never changes here.
Mapped computation_step(const TaskConfig &config, const ConfigLabel &in) {
    Mapped out{in};
    ConfigLabel &l = out.label;
    const std::size_t d = static_cast<std::size_t>(config.d);
    const int w = config.width();
    const std::size_t a = in.head.axis;
    const int k = in.head.bit;

    switch (in.head.stage) {
        case Stage::copy:
        case Stage::uncopy: {
            if (bit_of(l.memory[a], k)) {
                l.comp[a] = static_cast<std::uint16_t>(l.comp[a] ^ (1U << k));
            }
            if (k + 1 < w) {
                l.head = head(in.head.stage, a, k + 1);
            } else if (a + 1 < d) {
                l.head = head(in.head.stage, a + 1, 0);
            } else {
                l.head = in.head.stage == Stage::copy ? head(Stage::test, 0, 0) : head(Stage::done);
            }
            break;
        }
        case Stage::test: {
            // Zero test on comp[a], one qubit per step against |0>.
            if (k == 0 && l.output == Output::advance(a)) {
                l.output = Output::done();
            }
            if (k + 1 < w) {
                l.head = head(Stage::test, a, k + 1);
            } else if (l.comp[a] != 0) {
                l.head = head(Stage::decrement, a, 0);
            } else if (a + 1 < d) {
                l.head = head(Stage::test, a + 1, 0);
            } else {
                l.output = Output::look();
                l.head = head(Stage::look);
            }
            break;
        }
        case Stage::decrement: {
            const bool was_set = bit_of(l.comp[a], k);
            l.comp[a] = static_cast<std::uint16_t>(l.comp[a] ^ (1U << k));
            if (was_set || k + 1 >= w) {
                l.output = Output::advance(a);
                l.control = 0;
                l.head = head(Stage::test, a, 0);
            } else {
                l.head = head(Stage::decrement, a, k + 1);
            }
            break;
        }
        case Stage::look: {
            if (l.position == config.target) {
                if (config.recording == Recording::sign_flip) {
                    out.phase = -1.0;
                } else {
                    l.record ^= 1U;
                }
            }
            l.output = Output::done();
            l.head = head(Stage::compare, d - 1, 0);
            break;
        }
        case Stage::compare: {
            // Equality test comp[a] == memory[a], one qubit pair per step.
            if (k == 0 && l.output == Output::retreat(a)) {
                l.output = Output::done();
            }
            if (k + 1 < w) {
                l.head = head(Stage::compare, a, k + 1);
            } else if (l.comp[a] != l.memory[a]) {
                l.head = head(Stage::increment, a, 0);
            } else if (a > 0) {
                l.head = head(Stage::compare, a - 1, 0);
            } else {
                l.head = head(Stage::uncopy, 0, 0);
            }
            break;
        }
        case Stage::increment: {
            const bool was_set = bit_of(l.comp[a], k);
            l.comp[a] = static_cast<std::uint16_t>(l.comp[a] ^ (1U << k));
            if (!was_set || k + 1 >= w) {
                l.output = Output::retreat(a);
                l.control = 0;
                l.head = head(Stage::compare, a, 0);
            } else {
                l.head = head(Stage::increment, a, k + 1);
            }
            break;
        }
        case Stage::done: {
            if (config.ballast.cyclic && l.ballast + 1 >= config.ballast.period()) {
                // Counter overflow: the carry out of the ballast restarts the program.
                l.ballast = 0;
                l.head = head(Stage::copy);
            } else {
                ++l.ballast;
            }
            break;
        }
    }
    return out;
}

}  // namespace

TaskMachine build_machine(const TaskConfig &config) {
    config.validate();
    TaskMachine machine;
    machine.config = config;
    machine.gamma_a = [config](const ConfigLabel &l) { return action_step(config, l); };
    machine.gamma_c = [config](const ConfigLabel &l) { return computation_step(config, l); };
    return machine;
}

Mapped step_label(const TaskMachine &machine, const ConfigLabel &label) {
    return label.control ? machine.gamma_c(label) : machine.gamma_a(label);
}

SparseState step(const TaskMachine &machine, const SparseState &state) {
    return apply_component_map(state, [&machine](const ConfigLabel &l) { return step_label(machine, l); });
}

StepCharge charge_of(const ConfigLabel &label) {
    StepCharge c;
    c.kind = phase_of(label);
    c.carry = label.control &&
              (label.head.stage == Stage::decrement || label.head.stage == Stage::increment);
    return c;
}

ConfigLabel initial_label(const TaskConfig &config, const Coords &memory) {
    ConfigLabel l;
    const auto d = static_cast<std::size_t>(config.d);
    l.position = Coords(d);
    l.memory = memory;
    l.comp = Coords(d);
    l.output = Output::done();
    l.control = 1;
    l.record = 0;
    l.ballast = 0;
    l.head = head(Stage::copy);
    return l;
}

bool is_complete(const ConfigLabel &label) {
    return label.head.stage == Stage::done;
}

bool at_endpoint(const TaskConfig &config, const ConfigLabel &label) {
    // Only the look enters compare(d-1, 0) with output dn; returns from an
    // action step carry -x_d there instead.
    return label.control == 1 && label.head == head(Stage::compare, static_cast<std::size_t>(config.d - 1), 0) &&
           label.output.is_done() && label.comp[static_cast<std::size_t>(config.d - 1)] == 0;
}

ConfigLabel restart(const ConfigLabel &label) {
    ConfigLabel out = label;
    out.head = head(Stage::copy);
    return out;
}

BitStepResult decrement(std::uint64_t value, int width) {
    if (value == 0) {
        throw std::domain_error("decrement: register underflow");
    }
    if (width < 64 && value >> width) {
        throw std::domain_error("decrement: value does not fit the register width");
    }
    BitStepResult r{value, 0};
    for (int j = 0; j < width; ++j) {
        const bool was_set = ((r.value >> j) & 1U) != 0;
        r.value ^= std::uint64_t{1} << j;
        ++r.flips;
        if (was_set) {
            break;
        }
    }
    return r;
}

BitStepResult increment(std::uint64_t value, int width) {
    if (width < 64 && value + 1 >= (std::uint64_t{1} << width)) {
        throw std::domain_error("increment: register overflow");
    }
    BitStepResult r{value, 0};
    for (int j = 0; j < width; ++j) {
        const bool was_set = ((r.value >> j) & 1U) != 0;
        r.value ^= std::uint64_t{1} << j;
        ++r.flips;
        if (!was_set) {
            break;
        }
    }
    return r;
}

std::uint64_t step_guard(const TaskConfig &config) {
    return 64ULL * static_cast<std::uint64_t>(config.d) * static_cast<std::uint64_t>(config.n) *
           static_cast<std::uint64_t>(config.width() + 2);
}

ComponentRun run_component(const TaskConfig &config, const Coords &memory) {
    return run_component(build_machine(config), memory);
}

ComponentRun run_component(const TaskMachine &machine, const Coords &memory) {
    const TaskConfig &config = machine.config;
    if (memory.size() != static_cast<std::size_t>(config.d)) {
        throw ConfigError("memory value has the wrong dimension");
    }
    for (std::size_t i = 0; i < memory.size(); ++i) {
        if (memory[i] >= config.n) {
            throw ConfigError("memory value " + memory.str() + " outside the region");
        }
    }
    ComponentRun run;
    run.trajectory.push_back(initial_label(config, memory));
    const std::uint64_t guard = step_guard(config);
    while (!is_complete(run.trajectory.back())) {
        if (run.ledger.total >= guard) {
            throw GuardError("run_component: no completion within " + std::to_string(guard) + " steps");
        }
        const ConfigLabel &current = run.trajectory.back();
        run.ledger.charge(charge_of(current));
        ConfigLabel next = step_label(machine, current).label;
        run.trajectory.push_back(std::move(next));
    }
    return run;
}

AdvanceResult advance_until(const TaskMachine &machine, const ConfigLabel &start,
                            const std::function<bool(const ConfigLabel &)> &stop) {
    AdvanceResult r;
    r.label = start;
    const std::uint64_t guard = step_guard(machine.config);
    while (!stop(r.label)) {
        if (r.ledger.total >= guard) {
            throw GuardError("advance_until: stop condition not reached within " + std::to_string(guard) + " steps");
        }
        r.ledger.charge(charge_of(r.label));
        Mapped next = step_label(machine, r.label);
        r.label = std::move(next.label);
        r.phase *= next.phase;
    }
    return r;
}

SparseState initial_coherent_state(const TaskConfig &config) {
    config.validate();
    const std::uint64_t m = config.sites();
    const double amp = 1.0 / std::sqrt(static_cast<double>(m));
    SparseState state;
    for (std::uint64_t i = 0; i < m; ++i) {
        state.add(initial_label(config, Coords::unflatten(i, static_cast<std::size_t>(config.d),
                                                          static_cast<std::uint32_t>(config.n))),
                  amp);
    }
    return state;
}

CoherentRun run_coherent(const TaskConfig &config, const std::set<std::uint64_t> &snapshot_steps) {
    return run_coherent(build_machine(config), initial_coherent_state(config), snapshot_steps);
}

CoherentRun run_coherent(const TaskMachine &machine, const SparseState &start,
                         const std::set<std::uint64_t> &snapshot_steps) {
    const TaskConfig &config = machine.config;
    std::set<Coords> pending;
    for (const auto &[label, amp] : start) {
        pending.insert(label.memory);
    }

    // The slowest component sets the length of the run; its own steps are the
    // ledger of the coherent run.
    CoherentRun run;
    std::uint64_t slowest_time = 0;
    for (const Coords &memory : pending) {
        AdvanceResult r = advance_until(machine, initial_label(config, memory), is_complete);
        if (r.ledger.total >= slowest_time) {
            slowest_time = r.ledger.total;
            run.slowest = memory;
            run.ledger = r.ledger;
        }
    }

    SparseState state = start;
    std::uint64_t t = 0;
    const std::uint64_t guard = step_guard(config);
    while (true) {
        for (const auto &[label, amp] : state) {
            if (is_complete(label)) {
                pending.erase(label.memory);
            }
        }
        if (snapshot_steps.count(t)) {
            run.snapshots.emplace_back(t, state);
        }
        if (pending.empty()) {
            break;
        }
        if (t >= guard) {
            throw GuardError("run_coherent: components still running after " + std::to_string(guard) + " steps");
        }
        state = step(machine, state);
        ++t;
    }
    if (t != run.ledger.total) {
        throw std::logic_error("run_coherent: global completion time differs from the slowest component");
    }
    run.final_state = std::move(state);
    return run;
}

namespace {

void check_label(const TaskMachine &machine, const ConfigLabel &label, CondsReport &report) {
    ++report.checked;
    if (label.control) {
        const Mapped out = machine.gamma_c(label);
        if (out.label.position != label.position) {
            report.violations.push_back({label, "computation step moved the robot (Gamma_c P_x != P_x Gamma_c)"});
        }
    } else {
        const Mapped out = machine.gamma_a(label);
        if (out.label.output != label.output) {
            report.violations.push_back({label, "action step changed the output (Gamma_a P_o != P_o Gamma_a)"});
        }
        if (out.label.memory != label.memory || out.label.comp != label.comp || out.label.head != label.head) {
            report.violations.push_back({label, "action step edited the on-board computer or memory"});
        }
    }
}

}  // namespace

CondsReport verify_conds(const TaskMachine &machine, int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("verify_conds: trials must be >= 1");
    }
    std::mt19937_64 rng(seed);
    CondsReport report;
    for (int i = 0; i < trials; ++i) {
        check_label(machine, random_label(machine.config, rng), report);
    }
    return report;
}

CondsReport verify_conds(const TaskMachine &machine, const std::vector<ConfigLabel> &labels) {
    CondsReport report;
    for (const ConfigLabel &label : labels) {
        check_label(machine, label, report);
    }
    return report;
}

std::vector<ConfigLabel> reachable_labels(const TaskConfig &config, int ballast_steps) {
    const TaskMachine machine = build_machine(config);
    std::set<ConfigLabel> seen;
    for (std::uint64_t i = 0; i < config.sites(); ++i) {
        const Coords memory =
            Coords::unflatten(i, static_cast<std::size_t>(config.d), static_cast<std::uint32_t>(config.n));
        ComponentRun run = run_component(machine, memory);
        ConfigLabel tail = run.trajectory.back();
        seen.insert(run.trajectory.begin(), run.trajectory.end());
        for (int s = 0; s < ballast_steps; ++s) {
            tail = step_label(machine, tail).label;
            seen.insert(tail);
        }
    }
    return {seen.begin(), seen.end()};
}

ConfigLabel random_label(const TaskConfig &config, std::mt19937_64 &rng) {
    const auto d = static_cast<std::size_t>(config.d);
    auto uniform = [&rng](std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng); };
    auto coords = [&] {
        Coords c(d);
        for (std::size_t i = 0; i < d; ++i) {
            c[i] = static_cast<std::uint16_t>(uniform(static_cast<std::uint64_t>(config.n)));
        }
        return c;
    };
    ConfigLabel l;
    l.position = coords();
    l.memory = coords();
    l.comp = coords();
    const std::uint64_t symbol = uniform(2 * d + 2);
    if (symbol == 0) {
        l.output = Output::done();
    } else if (symbol == 2 * d + 1) {
        l.output = Output::look();
    } else {
        const std::size_t axis = (symbol - 1) / 2;
        l.output = (symbol % 2 == 1) ? Output::advance(axis) : Output::retreat(axis);
    }
    l.control = static_cast<std::uint8_t>(uniform(2));
    l.record = config.recording == Recording::record_qubit ? static_cast<std::uint8_t>(uniform(2)) : 0;
    l.ballast = uniform(config.ballast.cyclic ? config.ballast.period() : 1024);
    l.head.stage = static_cast<Stage>(uniform(8));
    l.head.axis = static_cast<std::uint8_t>(uniform(d));
    l.head.bit = static_cast<std::uint8_t>(uniform(static_cast<std::uint64_t>(config.width())));
    return l;
}

std::map<Coords, std::uint64_t> completion_profile(const TaskConfig &config) {
    const TaskMachine machine = build_machine(config);
    std::map<Coords, std::uint64_t> profile;
    for (std::uint64_t i = 0; i < config.sites(); ++i) {
        const Coords memory =
            Coords::unflatten(i, static_cast<std::size_t>(config.d), static_cast<std::uint32_t>(config.n));
        profile[memory] = run_component(machine, memory).ledger.total;
    }
    return profile;
}

namespace {

std::string plain(const Coords &c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += std::to_string(c[i]);
    }
    return out;
}

}  // namespace

void write_trace(std::ostream &out, const ComponentRun &run) {
    out << "step\tphase\tposition\tcomp\toutput\tballast\n";
    for (std::size_t t = 0; t < run.trajectory.size(); ++t) {
        const ConfigLabel &l = run.trajectory[t];
        out << t << '\t' << phase_name(phase_of(l)) << '\t' << plain(l.position) << '\t' << plain(l.comp) << '\t'
            << l.output.str() << '\t' << l.ballast << '\n';
    }
}

}  // namespace qrobot
