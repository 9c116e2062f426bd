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

#include "qrobot/complexity_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include <Eigen/Dense>

#include "qrobot/grover_engine.hpp"

namespace qrobot {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::coherent_search:
            return "coherent_search";
        case Variant::grover_after_return:
            return "grover_after_return";
        case Variant::classical:
            return "classical";
    }
    return "?";
}

std::optional<Variant> parse_variant(const std::string &text) {
    for (Variant v : {Variant::coherent_search, Variant::grover_after_return, Variant::classical}) {
        if (variant_name(v) == text) {
            return v;
        }
    }
    return std::nullopt;
}

std::uint64_t budget_from_env() {
    const char *raw = std::getenv("QROBOT_BUDGET_MB");
    if (raw == nullptr || *raw == '\0') {
        return kDefaultBudgetMb;
    }
    char *end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v == 0) {
        throw std::invalid_argument(std::string("QROBOT_BUDGET_MB is not a positive integer: ") + raw);
    }
    return v;
}

std::uint64_t state_bytes(std::uint64_t terms) {
    // Map node plus the copies alive during one step.
    constexpr std::uint64_t per_term = sizeof(ConfigLabel) + sizeof(Complex) + 48;
    return 3 * terms * per_term;
}

namespace {

void charge_flips(StepLedger &ledger, int flips) {
    for (int i = 0; i < flips; ++i) {
        ledger.charge({PhaseKind::computation, true});
    }
}

TaskConfig worst_case_config(int d, int n) {
    TaskConfig c;
    c.d = d;
    c.n = n;
    c.target = Coords(static_cast<std::size_t>(d), static_cast<std::uint16_t>(n - 1));
    c.validate();
    return c;
}

double memory_entropy(const SparseState &state) {
    if (auto fast = support_entropy_bits(state)) {
        return *fast;
    }
    return entropy_bits(reduced_density(state));
}

}  // namespace

StepLedger classical_baseline(const TaskConfig &config) {
    config.validate();
    const int w = config.width();
    const auto d = static_cast<std::size_t>(config.d);
    const auto top = static_cast<std::uint16_t>(config.n - 1);
    Coords position(d);
    StepLedger ledger;
    while (true) {
        ledger.charge_computation(1);
        if (position == config.target) {
            break;
        }
        for (std::size_t a = d; a-- > 0;) {
            ledger.charge_computation(static_cast<std::uint64_t>(w));
            if (position[a] != top) {
                const BitStepResult r = increment(position[a], w);
                charge_flips(ledger, r.flips);
                position[a] = static_cast<std::uint16_t>(r.value);
                ledger.charge({PhaseKind::action, false});
                break;
            }
            while (position[a] > 0) {
                ledger.charge_computation(static_cast<std::uint64_t>(w));
                const BitStepResult r = decrement(position[a], w);
                charge_flips(ledger, r.flips);
                position[a] = static_cast<std::uint16_t>(r.value);
                ledger.charge({PhaseKind::action, false});
            }
            ledger.charge_computation(static_cast<std::uint64_t>(w));
        }
    }
    return ledger;
}

ScalingRow measure(Variant variant, int d, int n, const SweepOptions &options) {
    ScalingRow row;
    row.variant = variant;
    row.d = d;
    row.n = n;
    const TaskConfig config = worst_case_config(d, n);
    row.M = config.sites();

    if (variant != Variant::classical) {
        const std::uint64_t need = state_bytes(row.M);
        if (need > options.budget_mb * 1024 * 1024) {
            row.skipped = true;
            row.reason = "state of " + std::to_string(row.M) + " terms needs about " +
                         std::to_string(need / (1024 * 1024) + 1) + " MiB, budget " +
                         std::to_string(options.budget_mb) + " MiB";
            return row;
        }
    }

    switch (variant) {
        case Variant::classical:
            row.ledger = classical_baseline(config);
            row.max_entropy_bits = 0;
            break;
        case Variant::coherent_search: {
            const std::uint64_t total = run_coherent(config).ledger.total;
            std::set<std::uint64_t> steps;
            for (std::uint64_t t = 0; t <= total; ++t) {
                steps.insert(t);
            }
            CoherentRun run = run_coherent(config, steps);
            row.ledger = run.ledger;
            for (const auto &[t, state] : run.snapshots) {
                row.max_entropy_bits = std::max(row.max_entropy_bits, memory_entropy(state));
            }
            break;
        }
        case Variant::grover_after_return: {
            const EmbeddedResult r =
                grover_embedded(config, optimal_iterations(row.M), {GroverVariant::after_return, true});
            row.ledger = r.ledger;
            row.max_entropy_bits = r.max_entropy_bits;
            break;
        }
    }
    return row;
}

std::vector<ScalingRow> sweep(const std::vector<Variant> &variants, const std::vector<int> &d_list,
                              const std::vector<int> &n_list, const SweepOptions &options) {
    std::vector<ScalingRow> rows;
    for (Variant v : variants) {
        for (int d : d_list) {
            for (int n : n_list) {
                rows.push_back(measure(v, d, n, options));
            }
        }
    }
    return rows;
}

ScalingFit fit_scaling(const std::vector<ScalingRow> &rows) {
    std::vector<const ScalingRow *> used;
    for (const ScalingRow &r : rows) {
        if (!r.skipped) {
            used.push_back(&r);
        }
    }
    if (used.size() < 3) {
        throw std::invalid_argument("fit_scaling: need at least 3 rows, got " + std::to_string(used.size()));
    }
    for (const ScalingRow *r : used) {
        if (r->variant != used.front()->variant || r->d != used.front()->d) {
            throw std::invalid_argument("fit_scaling: rows mix variants or dimensions");
        }
        if (r->ledger.total == 0) {
            throw std::invalid_argument("fit_scaling: row with zero steps");
        }
    }
    const auto k = static_cast<Eigen::Index>(used.size());
    Eigen::MatrixXd a(k, 2);
    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double n = used[static_cast<std::size_t>(i)]->n;
        a(i, 0) = std::log(n);
        a(i, 1) = 1.0;
        y(i) = std::log(static_cast<double>(used[static_cast<std::size_t>(i)]->ledger.total) / (std::log2(n) + 1));
    }
    const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(y);
    ScalingFit fit{coef(0), coef(1), 0.0};
    for (Eigen::Index i = 0; i < k; ++i) {
        const double n = used[static_cast<std::size_t>(i)]->n;
        const double steps = static_cast<double>(used[static_cast<std::size_t>(i)]->ledger.total);
        const double predicted = std::exp(coef(0) * std::log(n) + coef(1)) * (std::log2(n) + 1);
        fit.residual = std::max(fit.residual, std::abs(predicted - steps) / steps);
    }
    return fit;
}

std::vector<std::pair<std::uint64_t, double>> entanglement_profile(const TaskConfig &config, std::uint64_t stride) {
    config.validate();
    if (config.sites() > 256) {
        throw BudgetError("entanglement_profile: N^d = " + std::to_string(config.sites()) +
                          " exceeds the dense limit of 256");
    }
    if (stride == 0) {
        throw std::invalid_argument("entanglement_profile: stride must be >= 1");
    }
    const std::uint64_t total = run_coherent(config).ledger.total;
    std::set<std::uint64_t> steps;
    for (std::uint64_t t = 0; t <= total; t += stride) {
        steps.insert(t);
    }
    steps.insert(total);
    const CoherentRun run = run_coherent(config, steps);
    std::vector<std::pair<std::uint64_t, double>> out;
    for (const auto &[t, state] : run.snapshots) {
        out.emplace_back(t, entropy_bits(reduced_density(state)));
    }
    return out;
}

SparseState endpoint_state(const TaskConfig &config) {
    const TaskMachine machine = build_machine(config);
    return apply_component_map(uniform_state(config), [&](const ConfigLabel &l) {
        AdvanceResult r = advance_until(machine, l, [&config](const ConfigLabel &x) { return at_endpoint(config, x); });
        return Mapped{r.label, r.phase};
    });
}

RecurrenceResult recurrence_probe(const TaskConfig &config, const Coords &memory,
                                  std::optional<std::uint64_t> budget) {
    const TaskMachine machine = build_machine(config);
    const std::uint64_t t_max =
        run_component(machine, Coords(static_cast<std::size_t>(config.d), static_cast<std::uint16_t>(config.n - 1)))
            .ledger.total;
    RecurrenceResult r;
    r.budget = budget.value_or(4 * t_max * (config.ballast.cyclic ? config.ballast.period() : 1024));
    const ConfigLabel start = initial_label(config, memory);
    ConfigLabel label = start;
    for (std::uint64_t s = 1; s <= r.budget; ++s) {
        label = step_label(machine, label).label;
        if (label == start) {
            r.found = true;
            r.step = s;
            break;
        }
    }
    return r;
}

void write_scaling_csv(std::ostream &out, const std::vector<ScalingRow> &rows) {
    out << "variant,d,N,M,grover_iterations,steps_total,computation_steps,action_steps,carry_ops,max_entropy_bits\n";
    for (const ScalingRow &r : rows) {
        if (r.skipped) {
            continue;
        }
        char entropy[32];
        std::snprintf(entropy, sizeof(entropy), "%.9g", r.max_entropy_bits);
        out << variant_name(r.variant) << ',' << r.d << ',' << r.n << ',' << r.M << ','
            << r.ledger.grover_iterations << ',' << r.ledger.total << ',' << r.ledger.computation_steps << ','
            << r.ledger.action_steps << ',' << r.ledger.carry_ops << ',' << entropy << '\n';
    }
}

}  // namespace qrobot
