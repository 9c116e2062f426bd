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
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrobot/state_core.hpp"
#include "qrobot/task_machine.hpp"

namespace qrobot {

enum class Variant : std::uint8_t { coherent_search, grover_after_return, classical };

std::string variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string &text);

class BudgetError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ScalingRow {
    Variant variant = Variant::coherent_search;
    int d = 0;
    int n = 0;
    std::uint64_t M = 0;
    StepLedger ledger;
    double max_entropy_bits = 0;
    bool skipped = false;
    std::string reason;

    std::uint64_t steps_total() const {
        return ledger.total;
    }
};

/// Default state-size budget in MiB; QROBOT_BUDGET_MB overrides it.
inline constexpr std::uint64_t kDefaultBudgetMb = 512;
std::uint64_t budget_from_env();
/// Rough resident size of a state with `terms` entries.
std::uint64_t state_bytes(std::uint64_t terms);

/// Deterministic robot sweeping R in lexicographic order (last axis fastest)
/// with the same primitives as the search program: one look per site, w-step
/// compares against N-1 or 0, ripple increment/decrement, one step per move,
/// and a carriage return when an axis wraps. Stops at the site holding the target.
StepLedger classical_baseline(const TaskConfig &config);

struct SweepOptions {
    std::uint64_t budget_mb = kDefaultBudgetMb;
};

/// One row per (variant, d, N), in the order variants x d_list x n_list. The
/// target sits at the last site. Grover rows run optimal_iterations(N^d)
/// iterations; their state is evolved with ballast cleared between
/// iterations, which does not change the step count.
std::vector<ScalingRow> sweep(const std::vector<Variant> &variants, const std::vector<int> &d_list,
                              const std::vector<int> &n_list, const SweepOptions &options = {});
ScalingRow measure(Variant variant, int d, int n, const SweepOptions &options = {});

struct ScalingFit {
    double p_hat = 0;
    double intercept = 0;
    double residual = 0;
};

/// Least squares fit of log(steps/(log2 N + 1)) = p log N + c over the
/// non-skipped rows. residual is the largest relative error of the fitted
/// steps. Throws std::invalid_argument with fewer than 3 rows or mixed
/// (variant, d).
ScalingFit fit_scaling(const std::vector<ScalingRow> &rows);

/// Memory entropy every `stride` steps during run_coherent, plus the final
/// step. Dense eigendecomposition; needs N^d <= 256.
std::vector<std::pair<std::uint64_t, double>> entanglement_profile(const TaskConfig &config, std::uint64_t stride);

/// Every memory component held at its own path endpoint (just after the
/// look), amplitudes as in the coherent run.
SparseState endpoint_state(const TaskConfig &config);

struct RecurrenceResult {
    bool found = false;
    std::uint64_t step = 0;
    std::uint64_t budget = 0;
};

/// Steps one component from program start until its label repeats the
/// initial one. The default budget is 4 * period * T_max for cyclic ballast
/// and 4 * T_max * 1024 otherwise.
RecurrenceResult recurrence_probe(const TaskConfig &config, const Coords &memory,
                                  std::optional<std::uint64_t> budget = std::nullopt);

/// CSV with header variant,d,N,M,grover_iterations,steps_total,
/// computation_steps,action_steps,carry_ops,max_entropy_bits. Skipped rows
/// are left out.
void write_scaling_csv(std::ostream &out, const std::vector<ScalingRow> &rows);

}  // namespace qrobot
