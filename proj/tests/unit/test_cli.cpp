#include "doctest.h"

#include "flatcheck/report.hpp"
#include "json.hpp"

using namespace flatcheck;

namespace {

const char* kMinimal = R"({"base_vars":["y"],"fiber_vars":["x"],"presentation":[["x*y"]],"ideal_J":[],"order":8})";

}  // namespace

TEST_CASE("problem parsing") {
    ProblemFile p = parse_problem_text(kMinimal);
    CHECK(p.base_vars == std::vector<std::string>{"y"});
    CHECK(p.presentation[0][0] == "y*x");
    CHECK(p.order == 8);
    CHECK(p.seed == 0);

    auto error_at = [](const std::string& text) {
        try {
            parse_problem_text(text);
        } catch (const ProblemError& e) {
            return std::make_pair(e.line(), std::string(e.what()));
        }
        return std::make_pair(std::size_t(0), std::string());
    };
    auto [line, what] =
        error_at("{\"base_vars\":[\"y\"],\"fiber_vars\":[\"x\"],\n\"presentation\":[[\"x\"]],\n\"ideal_J\":[\"x*y\"]}");
    CHECK(line == 3);
    CHECK(what.find("J must use base variables only") != std::string::npos);

    try {
        parse_problem_text("{\"base_vars\":[\"y\"],\"fiber_vars\":[\"x\"],\"presentation\":[[\"x^\"]]}");
        FAIL("expected a parse error");
    } catch (const ProblemError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 1);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_problem_text("{\"base_vars\":[\"y\"],\"fiber_vars\":[\"x\"],\"presentation\":[[\"z\"]]}"),
                    ProblemError);
    CHECK_THROWS_AS(parse_problem_text("{\"base_vars\":[\"y\"],\"fiber_vars\":[\"y\"],\"presentation\":[[\"y\"]]}"),
                    ProblemError);
    CHECK_THROWS_AS(parse_problem_text("{\"base_vars\":[\"y\"],\"fiber_vars\":[\"x\"],\"presentation\":[[\"x\"],[]]}"),
                    ProblemError);
    CHECK_THROWS_AS(parse_problem_text("{\"base_vars\":[\"y\"],\"fiber_vars\":[\"x\"],\"presentation\":[[\"x\"]],"
                                       "\"extra\":1}"),
                    ProblemError);
    CHECK_THROWS_AS(parse_problem_text("{\"base_vars\":[\"y\"], oops}"), ProblemError);
}

TEST_CASE("serialization round trip is idempotent") {
    ProblemFile p = parse_problem_text(
        R"({"label":"t","base_vars":["y1","y2"],"fiber_vars":["x"],"presentation":[["y2 - x*y1", "x^2"]],)"
        R"("ideal_J":["y2 + y1^2"],"order":6,"seed":4})");
    std::string once = serialize_problem(p);
    std::string twice = serialize_problem(parse_problem_text(once));
    CHECK(once == twice);
    ProblemFile q = parse_problem_text(once);
    CHECK(q.seed == 4);
    CHECK(q.order == 6);
}

TEST_CASE("reports are deterministic and versioned") {
    ProblemFile p = parse_problem_text(kMinimal);
    for (Command c : {Command::check, Command::flattener, Command::oracle, Command::validate}) {
        RunResult a = run_command(c, p), b = run_command(c, p);
        CHECK(a.json == b.json);
        auto doc = nlohmann::json::parse(a.json);
        CHECK(doc["schema"] == 1);
        CHECK_FALSE(doc.contains("timing"));
    }
    RunOptions timed;
    timed.timing = true;
    CHECK(nlohmann::json::parse(run_command(Command::check, p, timed).json).contains("timing"));
}

TEST_CASE("check report embeds the witness") {
    ProblemFile p = parse_problem_text(kMinimal);
    RunResult r = run_command(Command::check, p);
    CHECK(r.exit_code == exit_verdict);
    auto doc = nlohmann::json::parse(r.json);
    CHECK(doc["verdict"]["status"] == "not_flat");
    CHECK(doc["verdict"]["chain"][0]["complement_condition"]["witness"]["coefficient"] == "y");
}

TEST_CASE("exit codes") {
    ProblemFile p = parse_problem_text(
        R"({"base_vars":["y"],"fiber_vars":["x"],"presentation":[["x^2 - y"]],"ideal_J":[],"order":8})");
    CHECK(run_command(Command::check, p).exit_code == exit_verdict);
    RunOptions low;
    low.order = 2;
    CHECK(run_command(Command::check, p, low).exit_code == exit_inconclusive);
}

TEST_CASE("points") {
    GermPoint g = parse_point("0, 1/2:3");
    CHECK(g.base.size() == 2);
    CHECK(g.base[1] == Rational(1, 2));
    CHECK(g.fiber.size() == 1);
    CHECK(parse_point("1").fiber.empty());
    CHECK_THROWS_AS(parse_point("1,,2"), ParseError);
}
