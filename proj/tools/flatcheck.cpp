#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "flatcheck/report.hpp"

using namespace flatcheck;

namespace {

struct Args {
    std::string input;
    int order = 0;
    std::optional<std::uint64_t> seed;
    std::string json_out;
    bool timing = false;
    bool verify = false;
    std::vector<std::string> points;
    bool regenerate = false;
    std::string corpus;
};

int run_problem(Command command, const Args& args) {
    ProblemFile problem = parse_problem(args.input);
    RunOptions options;
    options.order = args.order;
    options.seed = args.seed;
    options.timing = args.timing;
    options.verify_reductions = args.verify;
    for (const auto& p : args.points) options.points.push_back(parse_point(p));
    RunResult result = run_command(command, problem, options);
    if (args.json_out == "-") {
        // Keep stdout machine-readable.
        std::cerr << result.text;
        std::cout << result.json;
    } else {
        std::cout << result.text;
        if (!args.json_out.empty()) {
            std::ofstream out(args.json_out);
            if (!out) throw ProblemError("cannot write " + args.json_out, 0, 0, args.json_out);
            out << result.json;
        }
    }
    return result.exit_code;
}

int run_corpus_command(const Args& args) {
    std::filesystem::path dir = args.corpus.empty() ? corpus_dir() : std::filesystem::path(args.corpus);
    CorpusRun run = run_corpus(dir, args.regenerate);
    for (const auto& e : run.entries)
        std::cout << (e.matched ? "ok   " : "FAIL ") << e.name << (e.message.empty() ? "" : "  " + e.message) << "\n";
    std::cout << run.entries.size() << " corpus problems, " << (run.ok ? "all matched" : "mismatches found") << "\n";
    return run.ok ? exit_verdict : exit_internal_error;
}

const char* description(Command command) {
    switch (command) {
        case Command::check: return "decide flatness over R/J and print the certificate chain";
        case Command::flattener: return "compute the flattener ideal, optionally with openness checks";
        case Command::oracle: return "direct jet-space flatness test (no division)";
        case Command::validate: return "cross-check the engine against the oracle";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flatness certificates for modules over local analytic algebras"};
    app.require_subcommand(1);
    Args args;

    for (Command command : {Command::check, Command::flattener, Command::oracle, Command::validate}) {
        CLI::App* sub = app.add_subcommand(to_string(command), description(command));
        sub->add_option("-i,--input", args.input, "problem file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("-N,--order", args.order, "jet order (overrides the problem file)")
            ->check(CLI::Range(1, kMaxOrder));
        sub->add_option("--seed", args.seed, "seed for coordinate changes");
        sub->add_option("--json", args.json_out, "write the JSON report here ('-' for stdout)");
        sub->add_flag("--timing", args.timing, "include wall-clock time in the JSON report");
        sub->add_flag("--verify-reductions", args.verify, "recompute every G block by direct division");
        if (command == Command::flattener)
            sub->add_option("--point", args.points,
                            "point for an openness check: base coordinates, optionally ':' and fiber coordinates");
        sub->callback([command, &args] { throw CLI::RuntimeError(run_problem(command, args)); });
    }
    CLI::App* corpus = app.add_subcommand("corpus", "run the golden corpus and compare with stored reports");
    corpus->add_flag("--regenerate", args.regenerate, "rewrite the expected reports");
    corpus->add_option("--dir", args.corpus, "corpus directory (default: FLATCHECK_CORPUS_DIR or the bundled one)");
    corpus->callback([&args] { throw CLI::RuntimeError(run_corpus_command(args)); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    } catch (const ProblemError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const SplitMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const InvariantViolation& e) {
        std::cerr << "internal invariant failure: " << e.what() << "\n";
        return exit_internal_error;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_internal_error;
    }
    return exit_verdict;
}
