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

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qrobot/complexity_lab.hpp"
#include "qrobot/phase_paths.hpp"

namespace qrobot {

namespace {

using json = nlohmann::json;

constexpr Command kCommands[] = {Command::trace,          Command::coherent, Command::grover,
                                 Command::record_demo,    Command::pathsum_verify, Command::sweep,
                                 Command::entropy,        Command::recurrence};

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    while (!text.empty() && text.back() == ' ') {
        text.pop_back();
    }
    return text;
}

[[noreturn]] void parse_error(const std::string &message) {
    throw CliError(kExitParse, "parse-error", message);
}

std::vector<std::uint64_t> parse_list(const std::string &text, const std::string &flag) {
    std::vector<std::uint64_t> out;
    std::size_t begin = 0;
    while (true) {
        const std::size_t end = std::min(text.find(',', begin), text.size());
        const char *first = text.data() + begin;
        const char *last = text.data() + end;
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (first == last || ec != std::errc() || ptr != last) {
            parse_error("malformed vector for " + flag + ": '" + text + "'");
        }
        out.push_back(v);
        if (end == text.size()) {
            break;
        }
        begin = end + 1;
    }
    return out;
}

std::vector<int> parse_small_list(const std::string &text, const std::string &flag) {
    std::vector<int> out;
    for (std::uint64_t v : parse_list(text, flag)) {
        if (v > 1u << 15) {
            parse_error(flag + " value " + std::to_string(v) + " is out of range");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void check_dim(int d) {
    if (d < 1 || d > static_cast<int>(kMaxDim)) {
        parse_error("d=" + std::to_string(d) + " outside [1," + std::to_string(kMaxDim) + "]");
    }
}

void check_side(int n) {
    if (n < 2 || (n & (n - 1)) != 0) {
        parse_error("N=" + std::to_string(n) + " is not a power of two >= 2");
    }
}

std::string join(const std::vector<int> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + std::to_string(values[i]);
    }
    return out;
}

std::string join(const std::vector<std::uint64_t> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? "," : "") + std::to_string(values[i]);
    }
    return out;
}

std::string join(const Coords &c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        out += (i ? "," : "") + std::to_string(c[i]);
    }
    return out;
}

Coords parse_site(const std::string &text, const std::string &flag, int d, int n) {
    const std::vector<std::uint64_t> v = parse_list(text, flag);
    if (static_cast<int>(v.size()) != d) {
        parse_error(flag + " has " + std::to_string(v.size()) + " coordinates, expected d=" + std::to_string(d));
    }
    Coords c(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= static_cast<std::uint64_t>(n)) {
            parse_error(flag.substr(2) + " " + text + " outside [0," + std::to_string(n - 1) + "]^" +
                        std::to_string(d));
        }
        c[i] = static_cast<std::uint16_t>(v[i]);
    }
    return c;
}

BallastMode parse_ballast(const std::string &text) {
    if (text == "unbounded") {
        return BallastMode::unbounded();
    }
    const std::string prefix = "cyclic:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string k = text.substr(prefix.size());
        int v = 0;
        const auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
        if (!k.empty() && ec == std::errc() && ptr == k.data() + k.size() && v >= 1 && v <= 62) {
            return BallastMode::cyclic_with(v);
        }
    }
    parse_error("malformed --ballast '" + text + "', expected cyclic:K with 1 <= K <= 62 or unbounded");
}

std::string ballast_text(const BallastMode &b) {
    return b.cyclic ? "cyclic:" + std::to_string(b.qubits) : "unbounded";
}

bool format_allowed(Command c, Format f) {
    switch (f) {
        case Format::json:
            return true;
        case Format::csv:
            return c == Command::sweep || c == Command::grover || c == Command::record_demo || c == Command::entropy;
        case Format::tsv:
            return c == Command::trace;
    }
    return false;
}

bool needs_target(Command c) {
    return c == Command::trace || c == Command::coherent || c == Command::grover || c == Command::record_demo ||
           c == Command::entropy;
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json coords_json(const Coords &c) {
    json out = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        out.push_back(c[i]);
    }
    return out;
}

json ledger_json(const StepLedger &l) {
    return {{"total", l.total},
            {"computation_steps", l.computation_steps},
            {"action_steps", l.action_steps},
            {"carry_ops", l.carry_ops},
            {"grover_iterations", l.grover_iterations}};
}

void check_budget(const TaskConfig &task) {
    const std::uint64_t budget = budget_from_env();
    const std::uint64_t need = state_bytes(task.sites());
    if (need > budget * 1024 * 1024) {
        throw BudgetError("state of " + std::to_string(task.sites()) + " terms needs about " +
                          std::to_string(need / (1024 * 1024) + 1) + " MiB, budget " + std::to_string(budget) +
                          " MiB");
    }
}

std::optional<double> entropy_if_small(const SparseState &state, const TaskConfig &task) {
    if (auto fast = support_entropy_bits(state)) {
        return fast;
    }
    if (task.sites() <= 256) {
        return entropy_bits(reduced_density(state));
    }
    return std::nullopt;
}

json document(const RunConfig &config) {
    return {{"config", config_echo(config)}, {"provenance", provenance()}};
}

std::string dump(const json &doc) {
    return doc.dump(2) + "\n";
}

Rendered render_trace(const RunConfig &config) {
    const ComponentRun run = run_component(config.task, *config.memory);
    Rendered r;
    if (config.format == Format::tsv) {
        std::ostringstream out;
        write_trace(out, run);
        r.document = out.str();
        return r;
    }
    json doc = document(config);
    doc["memory"] = coords_json(*config.memory);
    doc["steps_total"] = run.ledger.total;
    doc["ledger"] = ledger_json(run.ledger);
    json steps = json::array();
    for (std::size_t t = 0; t < run.trajectory.size(); ++t) {
        const ConfigLabel &l = run.trajectory[t];
        steps.push_back({{"step", t},
                         {"phase", phase_name(phase_of(l))},
                         {"stage", stage_name(l.head.stage)},
                         {"position", coords_json(l.position)},
                         {"comp", coords_json(l.comp)},
                         {"output", l.output.str()},
                         {"record", l.record},
                         {"ballast", l.ballast}});
    }
    doc["trajectory"] = steps;
    r.document = dump(doc);
    return r;
}

Rendered render_coherent(const RunConfig &config) {
    check_budget(config.task);
    const std::set<std::uint64_t> steps(config.snapshots.begin(), config.snapshots.end());
    const CoherentRun run = run_coherent(config.task, steps);
    json doc = document(config);
    doc["M"] = config.task.sites();
    doc["steps_total"] = run.ledger.total;
    doc["ledger"] = ledger_json(run.ledger);
    doc["slowest_memory"] = coords_json(run.slowest);
    json completion = json::array();
    for (const auto &[memory, t] : completion_profile(config.task)) {
        completion.push_back({{"memory", coords_json(memory)}, {"steps", t}});
    }
    doc["completion"] = completion;
    json snaps = json::array();
    for (const auto &[t, state] : run.snapshots) {
        const auto h = entropy_if_small(state, config.task);
        snaps.push_back({{"step", t}, {"terms", state.size()}, {"entropy_bits", h ? json(*h) : json(nullptr)}});
    }
    doc["snapshots"] = snaps;
    const auto h = entropy_if_small(run.final_state, config.task);
    doc["final_entropy_bits"] = h ? json(*h) : json(nullptr);
    Rendered r;
    r.document = dump(doc);
    return r;
}

Rendered render_grover(const RunConfig &config) {
    check_budget(config.task);
    const std::uint64_t M = config.task.sites();
    const int m = config.iterations.value_or(optimal_iterations(M));
    const Rotation rot = rotation_params(M);
    const EmbeddedResult run = grover_embedded(config.task, m, {config.grover_variant, config.disentangle});
    Rendered r;
    if (config.format == Format::csv) {
        std::string out = "m,probability,steps_total\n";
        for (std::size_t i = 0; i < run.trace.size(); ++i) {
            out += std::to_string(i) + "," + number(run.trace[i]) + "," + std::to_string(run.trace_steps[i]) + "\n";
        }
        r.document = out;
        return r;
    }
    json doc = document(config);
    doc["M"] = M;
    doc["m"] = m;
    doc["theta"] = rot.theta;
    doc["beta"] = rot.beta;
    doc["probability_closed_form"] = success_probability(M, m);
    doc["probability_measured"] = run.probability;
    doc["probability_abstract"] = grover_abstract(M, config.task.target.flatten(static_cast<std::uint32_t>(config.task.n)), m).probability;
    doc["steps_total"] = run.ledger.total;
    doc["ledger"] = ledger_json(run.ledger);
    doc["variant"] = variant_name(config.grover_variant);
    doc["non_physical_disentangle"] = config.disentangle;
    doc["max_entropy_bits"] = run.max_entropy_bits;
    json trace = json::array();
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
        trace.push_back({{"m", i}, {"probability", run.trace[i]}, {"steps_total", run.trace_steps[i]}});
    }
    doc["trace"] = trace;
    r.document = dump(doc);
    return r;
}

Rendered render_record(const RunConfig &config) {
    check_budget(config.task);
    const int m_max = config.iterations.value_or(16);
    const RecordResult run = record_variant(config.task, m_max);
    Rendered r;
    if (config.format == Format::csv) {
        std::string out = "m,probability,norm\n";
        for (std::size_t i = 0; i < run.probability.size(); ++i) {
            out += std::to_string(i) + "," + number(run.probability[i]) + "," + number(run.norms[i]) + "\n";
        }
        r.document = out;
        return r;
    }
    json doc = document(config);
    doc["M"] = config.task.sites();
    doc["m_max"] = m_max;
    doc["probability"] = run.probability;
    doc["norms"] = run.norms;
    doc["max_probability"] = *std::max_element(run.probability.begin(), run.probability.end());
    r.document = dump(doc);
    return r;
}

Rendered render_pathsum(const RunConfig &config) {
    constexpr int kPairs = 50;
    constexpr std::uint64_t kSeed = 1;
    constexpr double kTolerance = 1e-10;
    const int n_max = config.iterations.value_or(6);
    if (n_max < 1 || n_max > kMaxPathSteps) {
        throw PathGuardError("pathsum-verify: step count " + std::to_string(n_max) + " outside [1," +
                             std::to_string(kMaxPathSteps) + "]");
    }
    const TaskMachine machine = build_machine(config.task);
    std::mt19937_64 rng(kSeed);
    json rows = json::array();
    bool agree = true;
    for (int n = 1; n <= n_max; ++n) {
        double worst = 0;
        int nonzero = 0;
        for (int i = 0; i < kPairs; ++i) {
            const ConfigLabel w_in = random_label(machine.config, rng);
            ConfigLabel w_out = w_in;
            if (rng() % 2) {
                for (int s = 0; s < n; ++s) {
                    w_out = step_label(machine, w_out).label;
                }
            } else {
                w_out = random_label(machine.config, rng);
            }
            const Complex direct = direct_element(machine, w_out, w_in, n);
            worst = std::max(worst, std::abs(pathsum_element(machine, w_out, w_in, n) - direct));
            nonzero += std::abs(direct) > 0 ? 1 : 0;
        }
        const std::size_t compositions = enumerate_phase_paths(n, PhaseKind::computation).size();
        const bool ok = worst <= kTolerance && compositions == std::size_t{1} << (n - 1);
        agree = agree && ok;
        rows.push_back({{"n", n},
                        {"compositions", compositions},
                        {"pairs", kPairs},
                        {"nonzero_elements", nonzero},
                        {"max_abs_difference", worst},
                        {"ok", ok}});
    }
    json doc = document(config);
    doc["seed"] = kSeed;
    doc["tolerance"] = kTolerance;
    doc["rows"] = rows;
    doc["agree"] = agree;
    Rendered r;
    r.document = dump(doc);
    r.status = agree ? kExitOk : kExitCheckFailed;
    return r;
}

Rendered render_sweep(const RunConfig &config) {
    SweepOptions options;
    options.budget_mb = budget_from_env();
    const std::vector<Variant> variants = {Variant::coherent_search, Variant::grover_after_return,
                                           Variant::classical};
    const std::vector<ScalingRow> rows = sweep(variants, config.d_list, config.n_list, options);
    Rendered r;
    for (const ScalingRow &row : rows) {
        if (row.skipped) {
            r.notes.push_back("skipped " + variant_name(row.variant) + " d=" + std::to_string(row.d) +
                              " N=" + std::to_string(row.n) + ": " + row.reason);
        }
    }
    if (config.format == Format::csv) {
        std::ostringstream out;
        write_scaling_csv(out, rows);
        r.document = out.str();
        return r;
    }
    json doc = document(config);
    json out_rows = json::array();
    json skipped = json::array();
    std::map<std::pair<std::string, int>, std::vector<ScalingRow>> groups;
    for (const ScalingRow &row : rows) {
        if (row.skipped) {
            skipped.push_back(
                {{"variant", variant_name(row.variant)}, {"d", row.d}, {"N", row.n}, {"reason", row.reason}});
            continue;
        }
        out_rows.push_back({{"variant", variant_name(row.variant)},
                            {"d", row.d},
                            {"N", row.n},
                            {"M", row.M},
                            {"grover_iterations", row.ledger.grover_iterations},
                            {"steps_total", row.ledger.total},
                            {"computation_steps", row.ledger.computation_steps},
                            {"action_steps", row.ledger.action_steps},
                            {"carry_ops", row.ledger.carry_ops},
                            {"max_entropy_bits", row.max_entropy_bits}});
        groups[{variant_name(row.variant), row.d}].push_back(row);
    }
    json fits = json::array();
    for (const auto &[key, group] : groups) {
        if (group.size() < 3) {
            continue;
        }
        const ScalingFit fit = fit_scaling(group);
        fits.push_back({{"variant", key.first},
                        {"d", key.second},
                        {"p_hat", fit.p_hat},
                        {"intercept", fit.intercept},
                        {"residual", fit.residual}});
    }
    doc["rows"] = out_rows;
    doc["skipped"] = skipped;
    doc["fits"] = fits;
    r.document = dump(doc);
    return r;
}

Rendered render_entropy(const RunConfig &config) {
    const auto profile = entanglement_profile(config.task, 1);
    const std::set<std::uint64_t> wanted(config.snapshots.begin(), config.snapshots.end());
    std::vector<std::pair<std::uint64_t, double>> rows;
    double peak = 0;
    for (const auto &[t, h] : profile) {
        peak = std::max(peak, h);
        if (wanted.empty() || wanted.count(t)) {
            rows.emplace_back(t, h);
        }
    }
    Rendered r;
    if (config.format == Format::csv) {
        std::string out = "step,entropy_bits\n";
        for (const auto &[t, h] : rows) {
            out += std::to_string(t) + "," + number(h) + "\n";
        }
        r.document = out;
        return r;
    }
    json doc = document(config);
    doc["steps_total"] = profile.back().first;
    json list = json::array();
    for (const auto &[t, h] : rows) {
        list.push_back({{"step", t}, {"entropy_bits", h}});
    }
    doc["profile"] = list;
    doc["max_entropy_bits"] = peak;
    doc["endpoint_entropy_bits"] = entropy_bits(reduced_density(endpoint_state(config.task)));
    r.document = dump(doc);
    return r;
}

Rendered render_recurrence(const RunConfig &config) {
    std::optional<std::uint64_t> budget;
    if (config.iterations) {
        budget = static_cast<std::uint64_t>(*config.iterations);
    }
    const RecurrenceResult res = recurrence_probe(config.task, *config.memory, budget);
    json doc = document(config);
    doc["memory"] = coords_json(*config.memory);
    doc["found"] = res.found;
    doc["step"] = res.found ? json(res.step) : json(nullptr);
    doc["budget"] = res.budget;
    Rendered r;
    r.document = dump(doc);
    return r;
}

}  // namespace

CliError::CliError(ExitStatus status, const std::string &kind, const std::string &message)
    : std::runtime_error("qrobot: " + kind + ": " + one_line(message)), status_(status) {
}

std::string command_name(Command c) {
    switch (c) {
        case Command::trace:
            return "trace";
        case Command::coherent:
            return "coherent";
        case Command::grover:
            return "grover";
        case Command::record_demo:
            return "record-demo";
        case Command::pathsum_verify:
            return "pathsum-verify";
        case Command::sweep:
            return "sweep";
        case Command::entropy:
            return "entropy";
        case Command::recurrence:
            return "recurrence";
    }
    return "?";
}

std::optional<Command> parse_command(const std::string &text) {
    for (Command c : kCommands) {
        if (command_name(c) == text) {
            return c;
        }
    }
    return std::nullopt;
}

std::string format_name(Format f) {
    switch (f) {
        case Format::json:
            return "json";
        case Format::csv:
            return "csv";
        case Format::tsv:
            return "tsv";
    }
    return "?";
}

RunConfig parse_cli(const std::vector<std::string> &args) {
    CLI::App app{"qrobot"};
    app.set_help_flag();
    app.allow_extras();
    std::string command, d_text = "2", n_text, target_text, memory_text, recording_text, ballast_text = "unbounded",
                         iterations_text = "auto", snapshots_text, out_text, format_text = "json",
                         variant_text = "after_return";
    bool disentangle = false;
    app.add_option("command", command);
    app.add_option("--d", d_text);
    CLI::Option *n_opt = app.add_option("--n", n_text);
    CLI::Option *target_opt = app.add_option("--target", target_text);
    CLI::Option *memory_opt = app.add_option("--memory", memory_text);
    CLI::Option *recording_opt = app.add_option("--recording", recording_text);
    app.add_option("--ballast", ballast_text);
    app.add_option("--iterations", iterations_text);
    app.add_option("--snapshots", snapshots_text);
    app.add_option("--out", out_text);
    app.add_option("--format", format_text);
    app.add_option("--variant", variant_text);
    app.add_flag("--disentangle", disentangle);

    std::vector<const char *> argv = {"qrobot"};
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        parse_error(e.what());
    }
    if (!app.remaining().empty()) {
        const std::string first = app.remaining().front();
        parse_error((first.rfind("-", 0) == 0 ? "unknown flag: " : "unexpected argument: ") + first);
    }

    RunConfig config;
    if (command.empty()) {
        parse_error("missing command, expected one of trace, coherent, grover, record-demo, pathsum-verify, sweep, "
                    "entropy, recurrence");
    }
    const auto c = parse_command(command);
    if (!c) {
        parse_error("unknown command: " + command);
    }
    config.command = *c;
    const bool is_sweep = config.command == Command::sweep;

    if (format_text == "json") {
        config.format = Format::json;
    } else if (format_text == "csv") {
        config.format = Format::csv;
    } else if (format_text == "tsv") {
        config.format = Format::tsv;
    } else {
        parse_error("unknown --format '" + format_text + "', expected json, csv or tsv");
    }
    if (!format_allowed(config.command, config.format)) {
        parse_error("format " + format_text + " not available for " + command);
    }

    if (n_opt->count() == 0) {
        parse_error("missing --n for " + command);
    }
    std::vector<int> ds = parse_small_list(d_text, "--d");
    std::vector<int> ns = parse_small_list(n_text, "--n");
    if (!is_sweep && ds.size() > 1) {
        parse_error("--d takes a single value for " + command);
    }
    if (!is_sweep && ns.size() > 1) {
        parse_error("--n takes a single value for " + command);
    }
    for (int d : ds) {
        check_dim(d);
    }
    for (int n : ns) {
        check_side(n);
    }
    config.task.d = ds.front();
    config.task.n = ns.front();

    if (is_sweep) {
        if (target_opt->count() || memory_opt->count()) {
            parse_error("--target and --memory do not apply to sweep");
        }
        config.d_list = ds;
        config.n_list = ns;
        config.task.target = Coords();
    } else if (target_opt->count()) {
        config.task.target = parse_site(target_text, "--target", config.task.d, config.task.n);
    } else if (needs_target(config.command)) {
        parse_error("missing --target for " + command);
    } else {
        config.task.target = Coords(static_cast<std::size_t>(config.task.d));
    }

    if (memory_opt->count() && !is_sweep) {
        config.memory = parse_site(memory_text, "--memory", config.task.d, config.task.n);
    } else if (config.command == Command::trace) {
        parse_error("missing --memory for trace");
    } else if (config.command == Command::recurrence) {
        config.memory = Coords(static_cast<std::size_t>(config.task.d));
    }

    if (recording_opt->count() == 0) {
        config.task.recording =
            config.command == Command::record_demo ? Recording::record_qubit : Recording::sign_flip;
    } else if (recording_text == "sign") {
        config.task.recording = Recording::sign_flip;
    } else if (recording_text == "record") {
        config.task.recording = Recording::record_qubit;
    } else {
        parse_error("unknown --recording '" + recording_text + "', expected sign or record");
    }
    if (config.command == Command::record_demo && config.task.recording != Recording::record_qubit) {
        parse_error("record-demo needs --recording record");
    }
    if (config.command == Command::grover && config.task.recording != Recording::sign_flip) {
        parse_error("grover needs --recording sign");
    }

    config.task.ballast = parse_ballast(ballast_text);

    if (iterations_text != "auto") {
        const std::vector<std::uint64_t> v = parse_list(iterations_text, "--iterations");
        if (v.size() != 1 || v.front() > 1u << 30) {
            parse_error("malformed --iterations '" + iterations_text + "', expected auto or a count");
        }
        config.iterations = static_cast<int>(v.front());
    }
    if (!snapshots_text.empty()) {
        config.snapshots = parse_list(snapshots_text, "--snapshots");
    }
    config.output_path = out_text;

    if (variant_text == "after_return") {
        config.grover_variant = GroverVariant::after_return;
    } else if (variant_text == "at_endpoint") {
        config.grover_variant = GroverVariant::at_endpoint;
    } else {
        parse_error("unknown --variant '" + variant_text + "', expected after_return or at_endpoint");
    }
    config.disentangle = disentangle;

    if (!is_sweep) {
        try {
            config.task.validate();
        } catch (const ConfigError &e) {
            parse_error(e.what());
        }
    }
    return config;
}

std::vector<std::string> to_argv(const RunConfig &config) {
    const bool is_sweep = config.command == Command::sweep;
    std::vector<std::string> out = {command_name(config.command)};
    out.insert(out.end(), {"--d", is_sweep ? join(config.d_list) : std::to_string(config.task.d)});
    out.insert(out.end(), {"--n", is_sweep ? join(config.n_list) : std::to_string(config.task.n)});
    if (!is_sweep) {
        out.insert(out.end(), {"--target", join(config.task.target)});
        if (config.memory) {
            out.insert(out.end(), {"--memory", join(*config.memory)});
        }
    }
    out.insert(out.end(),
               {"--recording", config.task.recording == Recording::sign_flip ? "sign" : "record", "--ballast",
                ballast_text(config.task.ballast), "--iterations",
                config.iterations ? std::to_string(*config.iterations) : "auto"});
    if (!config.snapshots.empty()) {
        out.insert(out.end(), {"--snapshots", join(config.snapshots)});
    }
    if (!config.output_path.empty()) {
        out.insert(out.end(), {"--out", config.output_path});
    }
    out.insert(out.end(), {"--format", format_name(config.format), "--variant", variant_name(config.grover_variant)});
    if (config.disentangle) {
        out.push_back("--disentangle");
    }
    return out;
}

json config_echo(const RunConfig &config) {
    const bool is_sweep = config.command == Command::sweep;
    json echo = {{"command", command_name(config.command)}};
    if (is_sweep) {
        echo["d"] = config.d_list;
        echo["N"] = config.n_list;
    } else {
        echo["d"] = config.task.d;
        echo["N"] = config.task.n;
        echo["target"] = coords_json(config.task.target);
        echo["memory"] = config.memory ? coords_json(*config.memory) : json(nullptr);
    }
    echo["recording"] = config.task.recording == Recording::sign_flip ? "sign" : "record";
    echo["ballast"] = ballast_text(config.task.ballast);
    echo["iterations"] = config.iterations ? json(*config.iterations) : json("auto");
    echo["snapshots"] = config.snapshots;
    echo["format"] = format_name(config.format);
    echo["out"] = config.output_path;
    echo["variant"] = variant_name(config.grover_variant);
    echo["disentangle"] = config.disentangle;
    echo["argv"] = to_argv(config);
    return echo;
}

json provenance() {
    return {{"artifact", "qrobot"},
            {"version", kVersion},
            {"tariff",
             {{"copy_per_qubit", 1},
              {"uncopy_per_qubit", 1},
              {"zero_test_per_qubit", 1},
              {"compare_per_qubit_pair", 1},
              {"counter_per_bit_flip", 1},
              {"move", 1},
              {"look", 1},
              {"ballast_increment", 1},
              {"preparation", "d*log2(N)"},
              {"diffusion", "d*log2(N)"},
              {"endpoint_oracle", 1},
              {"restart", 0}}}};
}

Rendered render(const RunConfig &config) {
    switch (config.command) {
        case Command::trace:
            return render_trace(config);
        case Command::coherent:
            return render_coherent(config);
        case Command::grover:
            return render_grover(config);
        case Command::record_demo:
            return render_record(config);
        case Command::pathsum_verify:
            return render_pathsum(config);
        case Command::sweep:
            return render_sweep(config);
        case Command::entropy:
            return render_entropy(config);
        case Command::recurrence:
            return render_recurrence(config);
    }
    return {};
}

void emit(const std::string &document, const RunConfig &config, std::ostream &out) {
    if (config.output_path.empty()) {
        out << document;
        out.flush();
        return;
    }
    std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw CliError(kExitIo, "io-error", "cannot open " + config.output_path + " for writing");
    }
    file << document;
    file.close();
    if (!file) {
        throw CliError(kExitIo, "io-error", "write to " + config.output_path + " failed");
    }
}

std::string usage() {
    return "usage: qrobot COMMAND --n N [options]\n"
           "\n"
           "commands:\n"
           "  trace           step-by-step run of one memory component (needs --target, --memory)\n"
           "  coherent        uniform memory superposition run to completion (needs --target)\n"
           "  grover          Grover search with the task machine as oracle (needs --target)\n"
           "  record-demo     record-qubit iteration U = -I_phi I_r (needs --target)\n"
           "  pathsum-verify  phase-path expansion against direct stepping\n"
           "  sweep           step-count table for every variant over --d and --n lists\n"
           "  entropy         memory entanglement entropy along the coherent run (needs --target)\n"
           "  recurrence      first return of one component to its initial label\n"
           "\n"
           "options:\n"
           "  --d D[,D...]            dimension (default 2; lists for sweep)\n"
           "  --n N[,N...]            side length, a power of two (lists for sweep)\n"
           "  --target c1,c2,...      target site\n"
           "  --memory c1,c2,...      memory value for trace and recurrence\n"
           "  --recording sign|record\n"
           "  --ballast cyclic:K|unbounded\n"
           "  --iterations auto|INT   Grover iterations, record-demo m_max, path length, or recurrence budget\n"
           "  --snapshots s1,s2,...   steps to record for coherent and entropy\n"
           "  --variant after_return|at_endpoint\n"
           "  --disentangle           clear ballast between Grover iterations (non-physical)\n"
           "  --out PATH              output file (default stdout)\n"
           "  --format json|csv|tsv\n"
           "\n"
           "exit status: 0 ok, 1 verification failed, 2 parse error, 3 budget or guard error, 4 I/O error\n";
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    if (std::find(args.begin(), args.end(), "--help") != args.end() ||
        std::find(args.begin(), args.end(), "-h") != args.end()) {
        out << usage();
        return kExitOk;
    }
    auto fail = [&err](ExitStatus status, const std::string &kind, const std::string &message) {
        err << CliError(status, kind, message).what() << '\n';
        return static_cast<int>(status);
    };
    try {
        const RunConfig config = parse_cli(args);
        const Rendered r = render(config);
        for (const std::string &note : r.notes) {
            err << "qrobot: note: " << one_line(note) << '\n';
        }
        emit(r.document, config, out);
        return r.status;
    } catch (const CliError &e) {
        err << e.what() << '\n';
        return e.status();
    } catch (const BudgetError &e) {
        return fail(kExitBudget, "budget-error", e.what());
    } catch (const GuardError &e) {
        return fail(kExitBudget, "guard-error", e.what());
    } catch (const PathGuardError &e) {
        return fail(kExitBudget, "guard-error", e.what());
    } catch (const std::invalid_argument &e) {
        return fail(kExitParse, "parse-error", e.what());
    } catch (const std::exception &e) {
        return fail(kExitCheckFailed, "error", e.what());
    }
}

}  // namespace qrobot
