#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flatcheck/problem.hpp"

namespace flatcheck {

inline constexpr int kReportSchema = 1;

/// A point (eta, xi) of base times fiber; an empty `fiber` means xi = 0.
struct GermPoint {
    std::vector<Rational> base;
    std::vector<Rational> fiber;
};

enum class Command { check, flattener, oracle, validate };

const char* to_string(Command command);
std::optional<Command> parse_command(const std::string& name);

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_verdict = 0, exit_inconclusive = 1, exit_input_error = 2, exit_internal_error = 3 };

struct RunOptions {
    int order = 0;  // 0 keeps the problem's order
    std::optional<std::uint64_t> seed;
    bool timing = false;
    bool verify_reductions = false;
    /// Points for openness checks (flattener command).
    std::vector<GermPoint> points;
};

struct RunResult {
    std::string json;  // machine-readable report, deterministic unless timing is on
    std::string text;  // human-readable summary
    int exit_code = exit_verdict;
};

RunResult run_command(Command command, const ProblemFile& problem, const RunOptions& options = {});

/// All commands on one problem, as stored in the golden corpus.
std::string corpus_report(const ProblemFile& problem);

/// FLATCHECK_CORPUS_DIR if set, else the corpus directory of the source tree.
std::filesystem::path corpus_dir();

struct CorpusEntry {
    std::string name;
    bool matched = false;
    bool regenerated = false;
    std::string message;
};

struct CorpusRun {
    std::vector<CorpusEntry> entries;
    bool ok = true;
};

/// Runs every `<name>.problem.json` in `dir` and compares with
/// `<name>.expected.json`; with `regenerate` the expected files are rewritten.
CorpusRun run_corpus(const std::filesystem::path& dir, bool regenerate = false);

/// Parses "a,b" (base coordinates) or "a,b:c" (base, then fiber coordinates).
GermPoint parse_point(const std::string& text);

}  // namespace flatcheck
