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

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrobot/state_core.hpp"

namespace qrobot {

/// How the look at the path endpoint records the presence of the target.
enum class Recording : std::uint8_t {
    sign_flip,     ///< amplitude *= -1 at the target site
    record_qubit,  ///< r ^= 1 at the target site
};

struct BallastMode {
    bool cyclic = false;
    /// Counter width when cyclic; the counter holds 2^qubits values.
    int qubits = 0;

    static BallastMode unbounded() {
        return {};
    }
    static BallastMode cyclic_with(int qubits) {
        return {true, qubits};
    }
    std::uint64_t period() const {
        return std::uint64_t{1} << qubits;
    }

    friend bool operator==(const BallastMode &, const BallastMode &) = default;
};

class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Search-task parameters: a d-dimensional cube of side n, target site s.
struct TaskConfig {
    int d = 2;
    int n = 4;
    Coords target;
    Recording recording = Recording::sign_flip;
    BallastMode ballast;

    /// Bits per coordinate register (log2 n).
    int width() const;
    /// Number of sites / memory components, n^d.
    std::uint64_t sites() const;
    /// Throws ConfigError unless n is a power of two >= 2, 1 <= d <= kMaxDim and
    /// the target lies inside the region.
    void validate() const;

    friend bool operator==(const TaskConfig &, const TaskConfig &) = default;
};

enum class PhaseKind : std::uint8_t { computation, action };

inline PhaseKind phase_of(const ConfigLabel &label) {
    return label.control ? PhaseKind::computation : PhaseKind::action;
}

std::string phase_name(PhaseKind kind);

/// Charges of one elementary step.
struct StepCharge {
    PhaseKind kind = PhaseKind::computation;
    bool carry = false;
};

struct StepLedger {
    std::uint64_t total = 0;
    std::uint64_t computation_steps = 0;
    std::uint64_t action_steps = 0;
    std::uint64_t carry_ops = 0;
    std::uint64_t grover_iterations = 0;

    void charge(StepCharge c);
    /// Adds `steps` computation steps (e.g. the diffusion or preparation gates).
    void charge_computation(std::uint64_t steps);
    StepLedger &operator+=(const StepLedger &other);

    friend bool operator==(const StepLedger &, const StepLedger &) = default;
};

/// The phase-routed step operator: gamma_a acts on control=0 labels,
/// gamma_c on control=1 labels.
struct TaskMachine {
    TaskConfig config;
    ComponentMap gamma_a;
    ComponentMap gamma_c;
};

TaskMachine build_machine(const TaskConfig &config);

/// Applies gamma_a to the control=0 terms and gamma_c to the control=1 terms.
SparseState step(const TaskMachine &machine, const SparseState &state);
/// Single-label form of step().
Mapped step_label(const TaskMachine &machine, const ConfigLabel &label);

/// Charge of the step taken from `label`.
StepCharge charge_of(const ConfigLabel &label);

/// Starting label for one memory component: comp=0, origin, dn, c=1.
ConfigLabel initial_label(const TaskConfig &config, const Coords &memory);
/// True once the micro-program has finished and the ballast stage has begun.
bool is_complete(const ConfigLabel &label);
/// True for the label immediately after the look, before the return begins.
/// This is the hook point for processing at the path endpoint.
bool at_endpoint(const TaskConfig &config, const ConfigLabel &label);
/// Puts a completed component back at the start of the program. The ballast
/// counter is left untouched.
ConfigLabel restart(const ConfigLabel &label);

struct BitStepResult {
    std::uint64_t value = 0;
    /// Number of single-bit flips, i.e. borrow (or carry) propagations.
    int flips = 0;
};

/// value - 1 with ripple borrow; flips = 1 + trailing zeros of value.
BitStepResult decrement(std::uint64_t value, int width);
/// value + 1 with ripple carry; flips = 1 + trailing ones of value.
BitStepResult increment(std::uint64_t value, int width);

struct ComponentRun {
    std::vector<ConfigLabel> trajectory;  ///< trajectory[0] is the initial label
    StepLedger ledger;
};

class GuardError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Step budget after which a single run is declared non-terminating.
std::uint64_t step_guard(const TaskConfig &config);

/// Runs one memory component until the program completes. ledger.total is the
/// completion time T(memory).
ComponentRun run_component(const TaskConfig &config, const Coords &memory);
ComponentRun run_component(const TaskMachine &machine, const Coords &memory);

/// Steps `label` until `stop` holds (or the guard trips). Returns the final
/// label, its accumulated phase and the ledger of the steps taken.
struct AdvanceResult {
    ConfigLabel label;
    Complex phase{1.0, 0.0};
    StepLedger ledger;
};
AdvanceResult advance_until(const TaskMachine &machine, const ConfigLabel &start,
                            const std::function<bool(const ConfigLabel &)> &stop);

struct CoherentRun {
    std::vector<std::pair<std::uint64_t, SparseState>> snapshots;
    SparseState final_state;
    StepLedger ledger;
    /// Memory component with the largest completion time.
    Coords slowest;
};

/// Uniform superposition over memory values, all other registers at their
/// program-start values.
SparseState initial_coherent_state(const TaskConfig &config);

/// Evolves the uniform memory superposition with step() until every memory
/// component has completed at least once.
CoherentRun run_coherent(const TaskConfig &config, const std::set<std::uint64_t> &snapshot_steps = {});
/// Same, from a caller-provided state whose terms all sit at program start.
CoherentRun run_coherent(const TaskMachine &machine, const SparseState &start,
                         const std::set<std::uint64_t> &snapshot_steps = {});

struct CondsViolation {
    ConfigLabel label;
    std::string what;
};

struct CondsReport {
    std::uint64_t checked = 0;
    std::vector<CondsViolation> violations;

    bool ok() const {
        return violations.empty();
    }
};

/// Checks Gamma_c P_x = P_x Gamma_c, Gamma_a P_o = P_o Gamma_a and that
/// Gamma_a leaves memory and comp alone, on `trials` random labels.
CondsReport verify_conds(const TaskMachine &machine, int trials, std::uint64_t seed = 1);
/// Same checks on an explicit list of labels.
CondsReport verify_conds(const TaskMachine &machine, const std::vector<ConfigLabel> &labels);

/// Every label visited by the program over all memory values, including
/// `ballast_steps` steps past completion.
std::vector<ConfigLabel> reachable_labels(const TaskConfig &config, int ballast_steps = 2);

/// Uniformly random label with fields in their legal ranges.
ConfigLabel random_label(const TaskConfig &config, std::mt19937_64 &rng);

/// T(memory) for every memory value.
std::map<Coords, std::uint64_t> completion_profile(const TaskConfig &config);

/// Tab-separated dump: step, phase, position, comp, output, ballast.
void write_trace(std::ostream &out, const ComponentRun &run);

}  // namespace qrobot
