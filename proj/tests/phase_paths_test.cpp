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

#include <random>
#include <set>

#include "gtest/gtest.h"

using namespace qrobot;

namespace {

TaskMachine toy_machine(Recording recording = Recording::sign_flip) {
    TaskConfig c;
    c.d = 1;
    c.n = 2;
    c.target = Coords{1};
    c.recording = recording;
    return build_machine(c);
}

// Half the time the true image of w_in, otherwise an unrelated label.
std::pair<ConfigLabel, ConfigLabel> random_pair(const TaskMachine &m, int n, std::mt19937_64 &rng) {
    ConfigLabel w_in = random_label(m.config, rng);
    ConfigLabel w_out;
    if (rng() % 2) {
        w_out = w_in;
        for (int i = 0; i < n; ++i) {
            w_out = step_label(m, w_out).label;
        }
    } else {
        w_out = random_label(m.config, rng);
    }
    return {w_out, w_in};
}

}  // namespace

TEST(phase_paths, single_step) {
    auto paths = enumerate_phase_paths(1, PhaseKind::computation);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].t, 1);
    EXPECT_EQ(paths[0].h, std::vector<int>{1});
    EXPECT_EQ(enumerate_phase_paths(1).size(), 2u);
}

TEST(phase_paths, compositions_of_three) {
    auto paths = enumerate_phase_paths(3, PhaseKind::action);
    std::vector<std::vector<int>> hs;
    for (const auto &p : paths) {
        hs.push_back(p.h);
        EXPECT_EQ(p.v1, PhaseKind::action);
    }
    const std::vector<std::vector<int>> expected = {{3}, {1, 2}, {2, 1}, {1, 1, 1}};
    EXPECT_EQ(hs, expected);
}

TEST(phase_paths, composition_counts) {
    EXPECT_EQ(enumerate_phase_paths(5, PhaseKind::computation).size(), 16u);
    for (int n = 1; n <= kMaxPathSteps; ++n) {
        auto paths = enumerate_phase_paths(n);
        EXPECT_EQ(paths.size(), 2u << (n - 1));
        std::set<std::pair<int, std::vector<int>>> distinct;
        for (const auto &p : paths) {
            EXPECT_EQ(p.steps(), n);
            EXPECT_EQ(static_cast<std::size_t>(p.t), p.h.size());
            for (int l = 0; l + 1 < p.t; ++l) {
                EXPECT_NE(p.kind(l), p.kind(l + 1));
            }
            distinct.insert({static_cast<int>(p.v1), p.h});
        }
        EXPECT_EQ(distinct.size(), paths.size());
    }
}

TEST(phase_paths, guard) {
    EXPECT_THROW(enumerate_phase_paths(0), PathGuardError);
    EXPECT_THROW(enumerate_phase_paths(kMaxPathSteps + 1), PathGuardError);
    const TaskMachine m = toy_machine();
    const ConfigLabel l = initial_label(m.config, {1});
    EXPECT_THROW(pathsum_element(m, l, l, 13), PathGuardError);
    EXPECT_THROW(direct_element(m, l, l, -1), PathGuardError);
}

TEST(phase_paths, one_step_matches_matrix_element) {
    const TaskMachine m = toy_machine();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        ConfigLabel w_in = random_label(m.config, rng);
        Mapped image = step_label(m, w_in);
        EXPECT_EQ(pathsum_element(m, image.label, w_in, 1), image.phase);
        ConfigLabel other = random_label(m.config, rng);
        if (other != image.label) {
            EXPECT_EQ(pathsum_element(m, other, w_in, 1), Complex(0.0));
        }
    }
}

TEST(phase_paths, two_steps_match_direct) {
    const TaskMachine m = toy_machine();
    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
        auto [w_out, w_in] = random_pair(m, 2, rng);
        EXPECT_NEAR(std::abs(pathsum_element(m, w_out, w_in, 2) - direct_element(m, w_out, w_in, 2)), 0.0, 1e-12);
    }
}

TEST(phase_paths, expansion_identity_up_to_eight_steps) {
    for (Recording rec : {Recording::sign_flip, Recording::record_qubit}) {
        const TaskMachine m = toy_machine(rec);
        std::mt19937_64 rng(17);
        for (int n = 1; n <= 8; ++n) {
            for (int i = 0; i < 50; ++i) {
                auto [w_out, w_in] = random_pair(m, n, rng);
                EXPECT_LT(std::abs(pathsum_element(m, w_out, w_in, n) - direct_element(m, w_out, w_in, n)), 1e-10);
            }
        }
    }
}

TEST(phase_paths, program_run_picks_up_the_look_sign) {
    const TaskMachine m = toy_machine();
    ComponentRun run = run_component(m, {1});
    const int n = static_cast<int>(run.ledger.total);
    ASSERT_LE(n, kMaxPathSteps);
    const ConfigLabel &w_in = run.trajectory.front();
    const ConfigLabel &w_out = run.trajectory.back();
    EXPECT_EQ(pathsum_element(m, w_out, w_in, n), Complex(-1.0));
    EXPECT_EQ(direct_element(m, w_out, w_in, n), Complex(-1.0));

    // Only the path that follows the actual control sequence contributes.
    int contributing = 0;
    for (const PhasePath &p : enumerate_phase_paths(n, phase_of(w_in))) {
        if (path_amplitude(m, p, w_out, w_in) != Complex(0.0)) {
            ++contributing;
            EXPECT_EQ(p.t, 5);
        }
    }
    EXPECT_EQ(contributing, 1);
}

TEST(phase_paths, direct_element_properties) {
    const TaskMachine m = toy_machine();
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        ConfigLabel w_in = random_label(m.config, rng);
        ConfigLabel other = random_label(m.config, rng);
        EXPECT_EQ(direct_element(m, w_in, w_in, 0), Complex(1.0));
        if (other != w_in) {
            EXPECT_EQ(direct_element(m, other, w_in, 0), Complex(0.0));
        }
        const int n = 1 + static_cast<int>(rng() % 8);
        const double mag = std::abs(direct_element(m, other, w_in, n));
        EXPECT_TRUE(mag == 0.0 || std::abs(mag - 1.0) < 1e-15);

        SparseState s = SparseState::basis(w_in);
        for (int k = 0; k < n; ++k) {
            s = step(m, s);
        }
        double total = 0;
        for (const auto &[label, amp] : s) {
            total += std::norm(direct_element(m, label, w_in, n));
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(phase_paths, block_concatenation) {
    const TaskMachine m = toy_machine();
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        ConfigLabel l = random_label(m.config, rng);
        const PhaseKind kind = phase_of(l);
        const int h1 = static_cast<int>(rng() % 4);
        const int h2 = static_cast<int>(rng() % 4);
        SparseState s = SparseState::basis(l);
        EXPECT_EQ(apply_phase_block(m, kind, h1, apply_phase_block(m, kind, h2, s)),
                  apply_phase_block(m, kind, h1 + h2, s));
    }
}

TEST(phase_paths, block_of_wrong_kind_annihilates) {
    const TaskMachine m = toy_machine();
    ConfigLabel l = initial_label(m.config, {1});
    EXPECT_TRUE(apply_phase_block(m, PhaseKind::action, 1, SparseState::basis(l)).empty());
    EXPECT_EQ(apply_phase_block(m, PhaseKind::action, 0, SparseState::basis(l)), SparseState::basis(l));
}
