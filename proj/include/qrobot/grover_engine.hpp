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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrobot/state_core.hpp"
#include "qrobot/task_machine.hpp"

namespace qrobot {

class GroverError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct GroverParams {
    std::uint64_t M = 0;
    std::uint64_t target_index = 0;
    int m = 0;
    double theta = 0;
    double beta = 0;
};

/// Label of data-base element `index` in the abstract setting: a one-axis
/// memory register holding the index.
ConfigLabel element_label(std::uint64_t index);

/// Walsh-Hadamard gate on qubit `bit` of memory axis `axis`.
SparseState apply_hadamard(const SparseState &state, std::size_t axis, int bit);
/// Hadamards on two distinct memory qubits at once.
SparseState apply_hadamard_pair(const SparseState &state, std::size_t axis1, int bit1, std::size_t axis2, int bit2);

/// (1/sqrt M) sum |x>, built by Hadamards on every qubit of |0...0>.
SparseState uniform_state(std::uint64_t M);
/// Same over the memory register of a task, every other register at program start.
SparseState uniform_state(const TaskConfig &config);

struct Rotation {
    double theta = 0;
    double beta = 0;
};

/// cos theta = 1 - 2/M, beta = theta / 2.
Rotation rotation_params(std::uint64_t M);
/// round-half-even(pi/(4 beta) - 1/2), at least 0.
int optimal_iterations(std::uint64_t M);
/// sin^2((2m+1) beta).
double success_probability(std::uint64_t M, int m);

GroverParams make_params(std::uint64_t M, std::uint64_t target_index, int m);

/// -I_omega: sign flip on the terms whose memory equals `target`.
SparseState oracle_flip(const SparseState &state, const Coords &target);
/// 2|psi><psi| - 1 on the memory register, identity on everything else. The
/// memory register has `d` axes of side `n`.
SparseState diffusion(const SparseState &state, int d, int n);

/// Sum of |amp|^2 over terms whose memory equals `target`.
double memory_probability(const SparseState &state, const Coords &target);

struct AbstractResult {
    SparseState state;
    double probability = 0;
};

/// m applications of Q = -I_phi I_omega to uniform_state(M).
AbstractResult grover_abstract(std::uint64_t M, std::uint64_t target_index, int m);

/// Q restricted to span{|omega>, |alpha>}, basis order (omega, alpha), by
/// applying Q to the two basis vectors.
Eigen::Matrix2d q_in_span(std::uint64_t M, std::uint64_t target_index);
/// [[cos theta, sin theta], [-sin theta, cos theta]].
Eigen::Matrix2d q_rotation_matrix(std::uint64_t M);

enum class GroverVariant : std::uint8_t { after_return, at_endpoint };

std::string variant_name(GroverVariant v);

struct EmbeddedOptions {
    GroverVariant variant = GroverVariant::after_return;
    /// Non-physical: clear ballast between iterations so the memory register
    /// is left in a pure state.
    bool disentangle = false;
};

struct EmbeddedResult {
    SparseState state;
    double probability = 0;
    StepLedger ledger;
    /// Target probability after each iteration; entry 0 is before the first.
    std::vector<double> trace;
    /// ledger.total at each trace entry.
    std::vector<std::uint64_t> trace_steps;
    /// Largest memory entropy seen at the end of a round trip (after_return)
    /// or at the endpoint (at_endpoint).
    double max_entropy_bits = 0;
};

/// Steps charged for one diffusion (or one preparation): d log2 N.
std::uint64_t diffusion_cost(const TaskConfig &config);

/// One coherent round trip of every term from program start to completion,
/// each memory component evolved on its own and padded with ballast steps up
/// to the slowest one. Equal to run_coherent(...).final_state.
SparseState round_trip(const TaskMachine &machine, const SparseState &start, StepLedger &ledger);

/// Grover search with the oracle realized by the task machine.
EmbeddedResult grover_embedded(const TaskConfig &config, int m, const EmbeddedOptions &options = {});

struct RecordResult {
    /// probability of |target, r=1> after m = 0..m_max iterations of U.
    std::vector<double> probability;
    /// ||U^m phi_f|| for each m.
    std::vector<double> norms;
    SparseState phi_f;
};

/// Record-qubit recording: phi_f from one coherent search (ballast cleared),
/// then U = -I_phi_i I_{|1>r} iterated on memory (x) record.
RecordResult record_variant(const TaskConfig &config, int m_max);

/// U = -I_phi_i I_{|1>r} applied once; phi_i = psi_m (x) |0>_r.
SparseState apply_record_u(const SparseState &state, int d, int n);

}  // namespace qrobot
