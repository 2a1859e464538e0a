#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flatcheck/criterion.hpp"
#include "flatcheck/errors.hpp"

namespace flatcheck {

/// Input error located in a problem file (1-based line and column).
class ProblemError : public Error {
public:
    ProblemError(const std::string& what, std::size_t line, std::size_t column, std::string token)
        : Error(what), line_(line), column_(column), token_(std::move(token)) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& token() const { return token_; }

private:
    std::size_t line_, column_;
    std::string token_;
};

struct ProblemFile {
    std::vector<std::string> base_vars;
    std::vector<std::string> fiber_vars;
    std::vector<std::vector<std::string>> presentation;  // q rows of p entries
    std::vector<std::string> ideal;                      // generators of J
    int order = 8;
    std::uint64_t seed = 0;
    std::string label;
};

/// Parses and validates a problem; polynomial strings come back in
/// canonical form. `source` names the input in error messages.
ProblemFile parse_problem_text(const std::string& text, const std::string& source = "<input>");
ProblemFile parse_problem(const std::filesystem::path& path);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string serialize_problem(const ProblemFile& problem);

/// Engine inputs for a validated problem. `order` overrides the file's order
/// when positive.
struct ProblemData {
    SplitPtr split;
    Presentation presentation;
    Ideal ideal;
    EngineConfig config;
};

ProblemData build_problem(const ProblemFile& problem, int order = 0);

}  // namespace flatcheck
