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

#include <optional>
#include <stdexcept>
#include <vector>

#include "qrobot/state_core.hpp"
#include "qrobot/task_machine.hpp"

namespace qrobot {

/// Largest step count accepted by the path enumeration.
inline constexpr int kMaxPathSteps = 12;

/// One term of the expansion of (Gamma_a + Gamma_c)^n: t alternating phase
/// blocks with durations h, the first of kind v1.
struct PhasePath {
    int t = 0;
    std::vector<int> h;
    PhaseKind v1 = PhaseKind::computation;

    /// Kind of block `index` (0-based).
    PhaseKind kind(int index) const;
    int steps() const;

    friend bool operator==(const PhasePath &, const PhasePath &) = default;
};

class PathGuardError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

/// All compositions of n, for the given starting kind or for both kinds when
/// `start` is empty. 2^(n-1) paths per starting kind.
std::vector<PhasePath> enumerate_phase_paths(int n, std::optional<PhaseKind> start = std::nullopt);

/// (Gamma_v)^h applied to `state`, where Gamma_v = Gamma P^c_v.
SparseState apply_phase_block(const TaskMachine &machine, PhaseKind kind, int h, const SparseState &state);

/// Contribution of a single phase path to <w_out| Gamma^n |w_in>.
Complex path_amplitude(const TaskMachine &machine, const PhasePath &path, const ConfigLabel &w_out,
                       const ConfigLabel &w_in);

/// <w_out| Gamma^n |w_in> as the sum over phase paths starting with the kind
/// selected by w_in's control bit.
Complex pathsum_element(const TaskMachine &machine, const ConfigLabel &w_out, const ConfigLabel &w_in, int n);

/// <w_out| Gamma^n |w_in> by n direct applications of step().
Complex direct_element(const TaskMachine &machine, const ConfigLabel &w_out, const ConfigLabel &w_in, int n);

}  // namespace qrobot
