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

#include "qrobot/cli_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "qrobot/complexity_lab.hpp"

using namespace qrobot;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string word;
    while (in >> word) {
        out.push_back(word);
    }
    return out;
}

struct Outcome {
    int status = 0;
    std::string out;
    std::string err;
};

Outcome run(const std::string &line) {
    std::ostringstream out, err;
    Outcome o;
    o.status = run_cli(split(line), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string parse_message(const std::string &line) {
    try {
        parse_cli(split(line));
    } catch (const CliError &e) {
        EXPECT_EQ(e.status(), kExitParse);
        return e.what();
    }
    ADD_FAILURE() << "no error for: " << line;
    return {};
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string &name) {
    return std::filesystem::temp_directory_path() / ("qrobot_cli_test_" + name);
}

// Random legal configuration for every command.
RunConfig random_config(std::mt19937_64 &rng) {
    auto pick = [&rng](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1)); };
    auto site = [&](int d, int n) {
        Coords c(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            c[static_cast<std::size_t>(a)] = static_cast<std::uint16_t>(pick(0, n - 1));
        }
        return c;
    };
    RunConfig c;
    c.command = static_cast<Command>(pick(0, 7));
    const int d = pick(1, 3);
    const int n = 1 << pick(1, 4);
    c.task.d = d;
    c.task.n = n;
    if (c.command == Command::sweep) {
        c.d_list = {d, pick(1, 3)};
        c.n_list = {n};
        c.format = rng() % 2 ? Format::csv : Format::json;
    } else {
        c.task.target = site(d, n);
        if (c.command == Command::trace || c.command == Command::recurrence || rng() % 2) {
            c.memory = site(d, n);
        }
        if (c.command == Command::trace) {
            c.format = rng() % 2 ? Format::tsv : Format::json;
        }
    }
    c.task.recording = c.command == Command::record_demo ? Recording::record_qubit
                       : c.command == Command::grover    ? Recording::sign_flip
                       : rng() % 2                       ? Recording::record_qubit
                                                         : Recording::sign_flip;
    if (rng() % 2) {
        c.task.ballast = BallastMode::cyclic_with(pick(1, 8));
    }
    if (rng() % 2) {
        c.iterations = pick(0, 40);
    }
    for (int i = pick(0, 3); i > 0; --i) {
        c.snapshots.push_back(static_cast<std::uint64_t>(pick(0, 500)));
    }
    if (rng() % 2) {
        c.output_path = "out" + std::to_string(pick(0, 99)) + ".json";
    }
    c.grover_variant = rng() % 2 ? GroverVariant::at_endpoint : GroverVariant::after_return;
    c.disentangle = rng() % 2;
    return c;
}

}  // namespace

TEST(cli_io, defaults) {
    const RunConfig c = parse_cli(split("coherent --n 4 --target 1,2"));
    EXPECT_EQ(c.command, Command::coherent);
    EXPECT_EQ(c.task.d, 2);
    EXPECT_EQ(c.task.recording, Recording::sign_flip);
    EXPECT_FALSE(c.task.ballast.cyclic);
    EXPECT_FALSE(c.iterations.has_value());
    EXPECT_EQ(c.format, Format::json);
    EXPECT_TRUE(c.output_path.empty());
    EXPECT_FALSE(c.memory.has_value());
}

TEST(cli_io, grover_example) {
    const RunConfig c = parse_cli(split("grover --d 2 --n 4 --target 1,2"));
    EXPECT_EQ(c.task.sites(), 16u);
    EXPECT_EQ(c.task.target, (Coords{1, 2}));
    const Outcome o = run("grover --d 2 --n 4 --target 1,2");
    ASSERT_EQ(o.status, 0) << o.err;
    const json doc = json::parse(o.out);
    EXPECT_EQ(doc["M"], 16);
    EXPECT_EQ(doc["m"], 3);
    for (const char *field : {"m", "theta", "beta", "probability_closed_form", "probability_measured", "steps_total"}) {
        EXPECT_TRUE(doc.contains(field)) << field;
    }
    EXPECT_EQ(doc["steps_total"], 4 + 3 * (69 + 4));
    EXPECT_NEAR(doc["probability_closed_form"].get<double>(), success_probability(16, 3), 1e-15);
    EXPECT_NEAR(doc["probability_measured"].get<double>(), 0.251907348633, 1e-12);
    EXPECT_EQ(doc["trace"].size(), 4u);
    EXPECT_EQ(doc["trace"][3]["steps_total"], doc["steps_total"]);
    EXPECT_EQ(doc["non_physical_disentangle"], false);
}

TEST(cli_io, provenance_block) {
    const json doc = json::parse(run("grover --n 2 --target 1,1").out);
    EXPECT_EQ(doc["provenance"]["version"], kVersion);
    const json &tariff = doc["provenance"]["tariff"];
    EXPECT_EQ(tariff["copy_per_qubit"], 1);
    EXPECT_EQ(tariff["move"], 1);
    EXPECT_EQ(tariff["diffusion"], "d*log2(N)");
    EXPECT_EQ(doc["config"]["command"], "grover");
}

TEST(cli_io, trace_example) {
    const RunConfig c = parse_cli(split("trace --d 2 --n 4 --memory 2,1 --target 3,3"));
    ASSERT_TRUE(c.memory.has_value());
    EXPECT_EQ(*c.memory, (Coords{2, 1}));
    const Outcome o = run("trace --d 2 --n 4 --memory 2,1 --target 3,3 --format tsv");
    ASSERT_EQ(o.status, 0);
    std::ostringstream expected;
    write_trace(expected, run_component(c.task, {2, 1}));
    EXPECT_EQ(o.out, expected.str());
    EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "step\tphase\tposition\tcomp\toutput\tballast");

    const json doc = json::parse(run("trace --d 2 --n 4 --memory 2,1 --target 3,3").out);
    // 4dw+1 = 17, axis 1 at 2: 2(2w+2) + 2(4-1), axis 2 at 1: (2w+2) + 2(2-1).
    EXPECT_EQ(doc["steps_total"], 17 + 18 + 8);
    EXPECT_EQ(doc["trajectory"].size(), 44u);
    EXPECT_EQ(doc["trajectory"][43]["stage"], "done");
}

TEST(cli_io, sweep_example) {
    const std::filesystem::path path = scratch("rows.csv");
    std::filesystem::remove(path);
    const Outcome o = run("sweep --d 2,3 --n 2,4,8 --format csv --out " + path.string());
    ASSERT_EQ(o.status, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    const std::string csv = read_file(path);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line,
              "variant,d,N,M,grover_iterations,steps_total,computation_steps,action_steps,carry_ops,max_entropy_bits");
    std::map<std::string, int> per_variant;
    while (std::getline(in, line)) {
        ++per_variant[line.substr(0, line.find(','))];
    }
    EXPECT_EQ(per_variant["coherent_search"], 6);
    EXPECT_EQ(per_variant["grover_after_return"], 6);
    EXPECT_EQ(per_variant["classical"], 6);
    std::filesystem::remove(path);
}

TEST(cli_io, sweep_json_has_fits) {
    const json doc = json::parse(run("sweep --d 2 --n 2,4,8").out);
    EXPECT_EQ(doc["rows"].size(), 9u);
    EXPECT_EQ(doc["fits"].size(), 3u);
    EXPECT_EQ(doc["config"]["d"], json::array({2}));
}

TEST(cli_io, identical_argv_identical_files) {
    const std::filesystem::path path = scratch("repeat");
    for (const std::string line : {"sweep --d 2 --n 2,4 --format csv", "sweep --d 1,2 --n 4", "grover --n 4 --target 0,3",
                                   "entropy --n 4 --target 1,2 --format csv"}) {
        const std::string full = line + " --out " + path.string();
        ASSERT_EQ(run(full).status, 0);
        const std::string first = read_file(path);
        std::filesystem::remove(path);
        ASSERT_EQ(run(full).status, 0);
        EXPECT_EQ(read_file(path), first) << line;
        EXPECT_FALSE(first.empty());
        std::filesystem::remove(path);
    }
}

TEST(cli_io, distinct_parse_errors) {
    const std::vector<std::string> lines = {
        "grover --n 4 --target 1,2 --bogus",   // unknown flag
        "grover --n 4 --target 1,x",           // malformed vector
        "grover --n 4 --target 4,0",           // outside region
        "grover --n 6 --target 1,1",           // N not a power of two
        "trace --n 4 --target 1,1",            // missing memory
        "grover --n 4",                        // missing target
        "grover --n 4 --target 1,2 --format tsv",
        "launch --n 4",
        "grover --n 4 --target 1,2,3",
        "grover --n 4 --target 1,2 --ballast cyclic:x",
        "grover --n 4 --target 1,2 --iterations many",
        "grover --n 4 --target 1,2 --recording record",
        "record-demo --n 4 --target 1,2 --recording sign",
        "grover --d 2,3 --n 4 --target 1,2",
        "sweep --n 4 --target 1,1",
        "grover --d 9 --n 4 --target 1,2",
    };
    std::set<std::string> messages;
    for (const std::string &line : lines) {
        const std::string m = parse_message(line);
        EXPECT_EQ(m.rfind("qrobot: parse-error: ", 0), 0u) << m;
        EXPECT_EQ(m.find('\n'), std::string::npos);
        messages.insert(m);
    }
    EXPECT_EQ(messages.size(), lines.size());
    EXPECT_NE(parse_message("grover --n 4 --target 1,2 --bogus").find("unknown flag: --bogus"), std::string::npos);
    EXPECT_NE(parse_message("grover --n 12 --target 1,1").find("not a power of two"), std::string::npos);
}

TEST(cli_io, exit_statuses) {
    const Outcome parse = run("grover --n 4 --target 9,9");
    EXPECT_EQ(parse.status, kExitParse);
    EXPECT_TRUE(parse.out.empty());
    EXPECT_EQ(parse.err.rfind("qrobot: parse-error: ", 0), 0u);
    EXPECT_EQ(std::count(parse.err.begin(), parse.err.end(), '\n'), 1);

    const Outcome io = run("grover --n 2 --target 1,1 --out /nonexistent-dir/x.json");
    EXPECT_EQ(io.status, kExitIo);
    EXPECT_EQ(io.err.rfind("qrobot: io-error: ", 0), 0u);

    const Outcome dense = run("entropy --d 3 --n 8 --target 0,0,0");
    EXPECT_EQ(dense.status, kExitBudget);
    EXPECT_EQ(dense.err.rfind("qrobot: budget-error: ", 0), 0u);

    const Outcome guard = run("pathsum-verify --d 1 --n 2 --iterations 13");
    EXPECT_EQ(guard.status, kExitBudget);
    EXPECT_EQ(guard.err.rfind("qrobot: guard-error: ", 0), 0u);

    ::setenv("QROBOT_BUDGET_MB", "1", 1);
    const Outcome budget = run("coherent --d 3 --n 16 --target 0,0,0");
    const Outcome skipped = run("sweep --d 3 --n 16 --format csv");
    ::unsetenv("QROBOT_BUDGET_MB");
    EXPECT_EQ(budget.status, kExitBudget);
    EXPECT_EQ(budget.err.rfind("qrobot: budget-error: ", 0), 0u);
    EXPECT_EQ(skipped.status, 0);
    EXPECT_EQ(std::count(skipped.out.begin(), skipped.out.end(), '\n'), 2);  // header and the classical row
    EXPECT_NE(skipped.err.find("qrobot: note: skipped coherent_search d=3 N=16"), std::string::npos);

    EXPECT_EQ(run("--help").status, 0);
    EXPECT_NE(run("--help").out.find("usage: qrobot"), std::string::npos);
}

TEST(cli_io, round_trip_through_argv) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
        const RunConfig c = random_config(rng);
        const RunConfig back = parse_cli(to_argv(c));
        EXPECT_EQ(back, c) << testing::PrintToString(to_argv(c));
    }
}

TEST(cli_io, round_trip_through_echo) {
    for (const std::string line : {"grover --n 4 --target 1,2", "sweep --d 2,3 --n 2,4 --format csv",
                                   "recurrence --d 1 --n 2 --ballast cyclic:2", "record-demo --n 4 --target 3,0"}) {
        const RunConfig c = parse_cli(split(line));
        const json echo = config_echo(c);
        EXPECT_EQ(parse_cli(echo["argv"].get<std::vector<std::string>>()), c) << line;
        EXPECT_EQ(echo["command"], command_name(c.command));
    }
}

TEST(cli_io, command_names) {
    for (int i = 0; i < 8; ++i) {
        const auto c = static_cast<Command>(i);
        EXPECT_EQ(parse_command(command_name(c)), c);
    }
    EXPECT_FALSE(parse_command("record_demo").has_value());
}

TEST(cli_io, pathsum_verify) {
    const Outcome o = run("pathsum-verify --d 1 --n 2");
    ASSERT_EQ(o.status, 0);
    const json doc = json::parse(o.out);
    EXPECT_TRUE(doc["agree"].get<bool>());
    ASSERT_EQ(doc["rows"].size(), 6u);
    for (int n = 1; n <= 6; ++n) {
        EXPECT_EQ(doc["rows"][n - 1]["compositions"], 1 << (n - 1));
        EXPECT_GT(doc["rows"][n - 1]["nonzero_elements"].get<int>(), 0);
    }
}

TEST(cli_io, record_demo) {
    const json doc = json::parse(run("record-demo --n 4 --target 1,2").out);
    EXPECT_EQ(doc["config"]["recording"], "record");
    EXPECT_EQ(doc["probability"].size(), 17u);
    EXPECT_EQ(doc["probability"][0].get<double>(), 0.0625);
    EXPECT_LT(doc["max_probability"].get<double>(), 0.5);
}

TEST(cli_io, entropy_and_recurrence) {
    const json e = json::parse(run("entropy --n 4 --target 1,2 --snapshots 0,69").out);
    ASSERT_EQ(e["profile"].size(), 2u);
    EXPECT_EQ(e["profile"][0]["entropy_bits"].get<double>(), 0.0);
    EXPECT_NEAR(e["profile"][1]["entropy_bits"].get<double>(), 3.0, 1e-9);
    EXPECT_NEAR(e["endpoint_entropy_bits"].get<double>(), 4.0, 1e-9);

    const json r = json::parse(run("recurrence --d 1 --n 2 --ballast cyclic:2").out);
    EXPECT_TRUE(r["found"].get<bool>());
    EXPECT_EQ(r["step"], 9);
    const json u = json::parse(run("recurrence --d 1 --n 2 --iterations 5000").out);
    EXPECT_FALSE(u["found"].get<bool>());
    EXPECT_TRUE(u["step"].is_null());
    EXPECT_EQ(u["budget"], 5000);
}
