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

#include "qrobot/phase_paths.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qrobot {

namespace {

PhaseKind other(PhaseKind kind) {
    return kind == PhaseKind::computation ? PhaseKind::action : PhaseKind::computation;
}

void check_guard(int n, int lo) {
    if (n < lo || n > kMaxPathSteps) {
        throw PathGuardError("phase paths: n=" + std::to_string(n) + " outside [" + std::to_string(lo) + "," +
                             std::to_string(kMaxPathSteps) + "]");
    }
}

}  // namespace

PhaseKind PhasePath::kind(int index) const {
    return index % 2 == 0 ? v1 : other(v1);
}

int PhasePath::steps() const {
    return std::accumulate(h.begin(), h.end(), 0);
}

std::vector<PhasePath> enumerate_phase_paths(int n, std::optional<PhaseKind> start) {
    check_guard(n, 1);
    // Bit i of the mask cuts the sequence after step i + 1.
    std::vector<std::vector<int>> compositions;
    for (std::uint32_t mask = 0; mask < (1U << (n - 1)); ++mask) {
        std::vector<int> h;
        int run = 1;
        for (int i = 0; i < n - 1; ++i) {
            if ((mask >> i) & 1U) {
                h.push_back(run);
                run = 1;
            } else {
                ++run;
            }
        }
        h.push_back(run);
        compositions.push_back(std::move(h));
    }
    std::sort(compositions.begin(), compositions.end(), [](const auto &a, const auto &b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    std::vector<PhaseKind> kinds;
    if (start) {
        kinds.push_back(*start);
    } else {
        kinds = {PhaseKind::computation, PhaseKind::action};
    }
    std::vector<PhasePath> paths;
    paths.reserve(kinds.size() * compositions.size());
    for (PhaseKind v : kinds) {
        for (const auto &h : compositions) {
            paths.push_back(PhasePath{static_cast<int>(h.size()), h, v});
        }
    }
    return paths;
}

SparseState apply_phase_block(const TaskMachine &machine, PhaseKind kind, int h, const SparseState &state) {
    const ComponentMap &gamma = kind == PhaseKind::computation ? machine.gamma_c : machine.gamma_a;
    SparseState current = state;
    for (int i = 0; i < h && !current.empty(); ++i) {
        SparseState projected;
        for (const auto &[label, amp] : current) {
            if (phase_of(label) == kind) {
                projected.add(label, amp);
            }
        }
        current = apply_component_map(projected, gamma);
    }
    return current;
}

Complex path_amplitude(const TaskMachine &machine, const PhasePath &path, const ConfigLabel &w_out,
                       const ConfigLabel &w_in) {
    // Summing over the intermediate labels p_l is the same as carrying the
    // support through each block in turn.
    SparseState state = SparseState::basis(w_in);
    for (int l = 0; l < path.t && !state.empty(); ++l) {
        state = apply_phase_block(machine, path.kind(l), path.h[static_cast<std::size_t>(l)], state);
    }
    return state.amplitude(w_out);
}

Complex pathsum_element(const TaskMachine &machine, const ConfigLabel &w_out, const ConfigLabel &w_in, int n) {
    check_guard(n, 1);
    Complex sum{};
    for (const PhasePath &path : enumerate_phase_paths(n, phase_of(w_in))) {
        sum += path_amplitude(machine, path, w_out, w_in);
    }
    return sum;
}

Complex direct_element(const TaskMachine &machine, const ConfigLabel &w_out, const ConfigLabel &w_in, int n) {
    if (n < 0) {
        throw PathGuardError("direct_element: negative step count");
    }
    SparseState state = SparseState::basis(w_in);
    for (int i = 0; i < n; ++i) {
        state = step(machine, state);
    }
    return state.amplitude(w_out);
}

}  // namespace qrobot
