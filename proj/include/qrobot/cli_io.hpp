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
#include <vector>

#include "json.hpp"

#include "qrobot/grover_engine.hpp"
#include "qrobot/task_machine.hpp"

namespace qrobot {

inline constexpr const char *kVersion = "0.1.0";

enum class Command : std::uint8_t { trace, coherent, grover, record_demo, pathsum_verify, sweep, entropy, recurrence };
enum class Format : std::uint8_t { json, csv, tsv };

std::string command_name(Command c);
std::optional<Command> parse_command(const std::string &text);
std::string format_name(Format f);

/// Process exit statuses.
enum ExitStatus : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitParse = 2,
    kExitBudget = 3,
    kExitIo = 4,
};

/// Error carrying its exit status. what() is a single line starting with
/// "qrobot: <kind>: ".
class CliError : public std::runtime_error {
   public:
    CliError(ExitStatus status, const std::string &kind, const std::string &message);
    ExitStatus status() const {
        return status_;
    }

   private:
    ExitStatus status_;
};

struct RunConfig {
    Command command = Command::trace;
    TaskConfig task;
    /// Memory value for single-component commands (trace, recurrence).
    std::optional<Coords> memory;
    /// Empty means "auto".
    std::optional<int> iterations;
    std::vector<std::uint64_t> snapshots;
    /// Empty writes to the stream passed to run_cli.
    std::string output_path;
    Format format = Format::json;
    /// Sweep grid; empty for every other command.
    std::vector<int> d_list;
    std::vector<int> n_list;
    GroverVariant grover_variant = GroverVariant::after_return;
    bool disentangle = false;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

/// Parses the arguments after the program name. Throws CliError with
/// kExitParse on unknown flags, malformed values, a target or memory outside
/// the region, N not a power of two, missing required flags, and formats
/// the command cannot produce.
RunConfig parse_cli(const std::vector<std::string> &args);

/// Arguments that parse_cli maps back to `config`.
std::vector<std::string> to_argv(const RunConfig &config);

/// The "config" block of a JSON document; its "argv" member round-trips
/// through parse_cli.
nlohmann::json config_echo(const RunConfig &config);
/// Artifact version and the step tariff.
nlohmann::json provenance();

struct Rendered {
    std::string document;
    /// kExitCheckFailed when a verification command finds a mismatch.
    ExitStatus status = kExitOk;
    /// One-line remarks for stderr, e.g. sweep rows skipped for budget.
    std::vector<std::string> notes;
};

/// Runs the command and returns the document in the requested format.
/// Throws BudgetError or GuardError when the run exceeds its limits.
Rendered render(const RunConfig &config);

/// Writes `document` to config.output_path, or to `out` when the path is empty.
void emit(const std::string &document, const RunConfig &config, std::ostream &out);

std::string usage();

/// parse_cli, render and emit, with errors reported as one line on `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace qrobot
