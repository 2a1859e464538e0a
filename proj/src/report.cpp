#include "flatcheck/report.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "flatcheck/flattener.hpp"
#include "flatcheck/oracle.hpp"
#include "json.hpp"

#ifndef FLATCHECK_DEFAULT_CORPUS_DIR
#define FLATCHECK_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace flatcheck {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

const char* to_string(Command command) {
    switch (command) {
        case Command::check: return "check";
        case Command::flattener: return "flattener";
        case Command::oracle: return "oracle";
        case Command::validate: return "validate";
    }
    return "?";
}

std::optional<Command> parse_command(const std::string& name) {
    for (Command c : {Command::check, Command::flattener, Command::oracle, Command::validate})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

namespace {

ordered precision_json(int precision) {
    if (precision >= kMaxOrder) return "exact";
    return precision;
}

ordered pair_json(const std::optional<std::pair<std::size_t, std::size_t>>& p) {
    if (!p) return nullptr;
    return ordered::array({p->first, p->second});
}

ordered ideal_json(const Ideal& ideal) {
    if (ideal.is_unit()) return ordered::array({"1"});
    return ordered(ideal.generator_strings());
}

ordered complement_condition_json(const ComplementCondition& c) {
    ordered out;
    out["passed"] = c.passed;
    out["entries_checked"] = c.entries_checked;
    out["exact"] = c.exact;
    out["precision"] = precision_json(c.precision);
    if (c.witness) {
        ordered w;
        w["entry"] = pair_json(c.entry);
        w["original_entry"] = pair_json(c.original_entry);
        w["fiber_exponent"] = c.witness->exponent;
        w["coefficient"] = c.witness->coefficient.to_string();
        w["found_at_order"] = c.witness->precision;
        out["witness"] = std::move(w);
    }
    return out;
}

ordered step_json(const CertificateStep& s) {
    ordered out;
    out["level"] = s.level;
    out["fiber_dim"] = s.fiber_dim;
    out["shape"] = ordered::array({s.rows, s.cols});
    out["r"] = s.r;
    out["l"] = s.l;
    out["g"] = s.g_summary;
    out["g_unit"] = s.g_unit;
    out["rank_certified"] = s.rank_certified;
    out["working_order"] = precision_json(s.working_order);
    out["working_exact"] = s.working_exact;
    out["complement_condition"] = complement_condition_json(s.complement_check);
    if (s.reduction) {
        const ReductionSummary& r = *s.reduction;
        ordered red;
        red["identity_change"] = r.identity_change;
        red["seed"] = r.seed;
        red["change_matrix"] = r.change_matrix;
        red["d"] = r.d;
        red["effective_order"] = r.n_eff;
        red["exact"] = r.exact;
        red["distinguished"] = r.distinguished;
        red["G_shape"] = ordered::array({r.g_rows, r.g_cols});
        out["reduction"] = std::move(red);
    } else {
        out["reduction"] = nullptr;
    }
    return out;
}

ordered verdict_json(const FlatnessVerdict& v) {
    ordered out;
    out["status"] = to_string(v.status);
    out["certified_order"] = v.status == FlatStatus::flat ? ordered(v.certified_order_string()) : ordered(nullptr);
    out["reason"] = v.reason;
    ordered chain = ordered::array();
    for (const auto& s : v.chain) chain.push_back(step_json(s));
    out["chain"] = std::move(chain);
    return out;
}

ordered oracle_json(const OracleVerdict& v) {
    ordered out;
    out["status"] = to_string(v.status);
    out["cap"] = v.cap;
    out["guard"] = v.guard;
    out["window"] = v.window;
    out["dim_origin"] = v.dim_origin;
    out["dim_lifted"] = v.dim_lifted;
    out["containment"] = v.containment;
    out["gap_witness"] = v.gap_witness ? ordered(*v.gap_witness) : ordered(nullptr);
    out["reason"] = v.reason;
    return out;
}

ordered point_json(const std::vector<Rational>& point) {
    ordered out = ordered::array();
    for (const auto& c : point) out.push_back(rational_to_string(c));
    return out;
}

ordered flattener_json(const Presentation& pres, const FlattenerResult& f, const EngineConfig& config,
                       const std::vector<GermPoint>& points, bool& failed) {
    ordered out;
    out["complete"] = f.complete;
    out["reason"] = f.reason;
    ordered levels = ordered::array();
    for (const auto& l : f.levels) {
        ordered lj;
        lj["depth"] = l.depth;
        lj["ideal"] = ideal_json(l.ideal);
        lj["working_order"] = precision_json(l.order);
        lj["exact"] = l.exact;
        levels.push_back(std::move(lj));
    }
    out["levels"] = std::move(levels);
    out["total"] = f.total ? ideal_json(*f.total) : ordered(nullptr);
    out["effective_order"] = f.effective_order_string();
    if (f.complete) {
        FlattenerCheck check = verify_flattener(pres, f, config);
        ordered v;
        v["restriction"] = to_string(check.restriction);
        ordered probes = ordered::array();
        for (const auto& p : check.probes) {
            ordered pj;
            pj["dropped"] = p.dropped;
            pj["comparison"] = p.comparison;
            pj["required"] = p.required;
            pj["status"] = to_string(p.status);
            pj["passed"] = p.passed;
            probes.push_back(std::move(pj));
        }
        v["probes"] = std::move(probes);
        v["universality"] = "probed";
        v["passed"] = check.passed;
        out["verification"] = std::move(v);
        failed = failed || check.restriction == FlatStatus::not_flat ||
                 std::any_of(check.probes.begin(), check.probes.end(), [](const auto& p) { return !p.passed; });
    } else {
        out["verification"] = nullptr;
    }
    ordered open = ordered::array();
    for (const auto& point : points) {
        OpennessReport r = openness_check(pres, point.base, point.fiber, config);
        ordered oj;
        oj["point"] = point_json(point.base);
        oj["fiber_point"] = point_json(point.fiber);
        oj["precondition_ok"] = r.precondition_ok;
        oj["message"] = r.message;
        oj["reference"] = r.reference ? ideal_json(*r.reference) : ordered(nullptr);
        oj["local"] = r.local ? ideal_json(*r.local) : ordered(nullptr);
        ordered gens = ordered::array();
        for (const auto& g : r.generators)
            gens.push_back({{"generator", g.generator}, {"member", g.member}, {"exact", g.exact}});
        oj["generators"] = std::move(gens);
        oj["contained"] = r.contained;
        failed = failed || (r.precondition_ok && !r.contained);
        open.push_back(std::move(oj));
    }
    out["openness"] = std::move(open);
    return out;
}

ordered validate_json(const CrossValidation& cv) {
    ordered out;
    out["engine"] = {
        {"status", to_string(cv.engine.status)},
        {"certified_order",
         cv.engine.status == FlatStatus::flat ? ordered(cv.engine.certified_order_string()) : ordered(nullptr)}};
    out["oracle"] = oracle_json(cv.oracle);
    out["comparable"] = cv.comparable;
    out["agree"] = cv.agree;
    const RankKernelCheck& p = cv.rank_kernel;
    ordered pj;
    pj["rank_at_origin"] = p.rank_origin;
    pj["rank_mod_J"] = p.rank_mod_ideal;
    pj["ranks_exact"] = p.ranks_exact;
    pj["ranks_equal"] = p.ranks_equal;
    pj["complement_condition"] = p.complement_check;
    pj["rank_matches_complement"] = p.rank_matches_complement;
    pj["G_oracle"] = p.g_oracle ? oracle_json(*p.g_oracle) : ordered(nullptr);
    pj["equivalence"] = p.equivalence ? ordered(*p.equivalence) : ordered(nullptr);
    pj["holds"] = p.holds;
    out["rank_kernel"] = std::move(pj);
    out["consistent"] = cv.consistent;
    out["note"] = cv.note;
    return out;
}

ordered problem_json(const ProblemFile& problem, const EngineConfig& config) {
    ordered out;
    out["label"] = problem.label;
    out["base_vars"] = problem.base_vars;
    out["fiber_vars"] = problem.fiber_vars;
    out["presentation"] = problem.presentation;
    out["ideal_J"] = problem.ideal;
    out["order"] = config.order;
    out["seed"] = config.seed;
    return out;
}

// ----------------------------------------------------------------- text

std::string join(const ordered& list) {
    if (list.empty()) return "0";
    std::string out;
    for (const auto& v : list) {
        if (!out.empty()) out += ", ";
        out += v.is_string() ? v.get<std::string>() : v.dump();
    }
    return out;
}

void verdict_text(std::ostringstream& out, const ordered& v) {
    out << "verdict: " << v["status"].get<std::string>();
    if (!v["certified_order"].is_null())
        out << (v["certified_order"] == "exact"
                    ? std::string(" (exact)")
                    : " (certified to order " + v["certified_order"].get<std::string>() + ")");
    out << "\n" << v["reason"].get<std::string>() << "\n";
    for (const auto& s : v["chain"]) {
        out << "  level " << s["level"] << ": m = " << s["fiber_dim"] << ", r = " << s["r"] << ", l = " << s["l"]
            << ", g = " << s["g"].get<std::string>() << (s["g_unit"].get<bool>() ? " (unit)" : "")
            << (s["rank_certified"].get<bool>() ? "" : ", rank not certified") << "\n";
        const auto& c = s["complement_condition"];
        out << "    complement condition: " << (c["passed"].get<bool>() ? "holds" : "fails") << " on "
            << c["entries_checked"] << " entries";
        if (c.contains("witness")) {
            const auto& w = c["witness"];
            out << "; M" << w["entry"].dump() << " has fiber coefficient " << w["coefficient"].get<std::string>()
                << " at exponent " << w["fiber_exponent"].dump() << " outside J";
        }
        out << "\n";
        if (!s["reduction"].is_null()) {
            const auto& r = s["reduction"];
            out << "    reduction: d = " << r["d"] << ", P = " << r["distinguished"].get<std::string>() << ", G is "
                << r["G_shape"][0] << " x " << r["G_shape"][1] << ", effective order " << r["effective_order"]
                << (r["identity_change"].get<bool>() ? ""
                                                     : ", coordinates changed (" + r["seed"].get<std::string>() + ")")
                << "\n";
        }
    }
}

void oracle_text(std::ostringstream& out, const ordered& o) {
    out << "oracle: " << o["status"].get<std::string>() << " (window degree " << o["window"] << ", guard " << o["guard"]
        << "; dim ker at origin " << o["dim_origin"] << ", lifted " << o["dim_lifted"] << ")\n";
    if (!o["gap_witness"].is_null()) out << "  unliftable kernel vector: (" << join(o["gap_witness"]) << ")\n";
    out << "  " << o["reason"].get<std::string>() << "\n";
}

std::string render_text(Command command, const ordered& doc) {
    std::ostringstream out;
    out << "problem: "
        << (doc["problem"]["label"].get<std::string>().empty() ? "(unlabelled)"
                                                               : doc["problem"]["label"].get<std::string>())
        << ", order " << doc["problem"]["order"] << "\n";
    switch (command) {
        case Command::check:
            verdict_text(out, doc["verdict"]);
            out << doc["psi"].get<std::string>();
            break;
        case Command::flattener: {
            const auto& f = doc["flattener"];
            if (!f["complete"].get<bool>()) {
                out << "flattener ideal not determined: " << f["reason"].get<std::string>() << "\n";
                break;
            }
            for (const auto& l : f["levels"]) out << "  level " << l["depth"] << ": (" << join(l["ideal"]) << ")\n";
            out << "I(F) = (" << join(f["total"]) << "), order " << f["effective_order"].get<std::string>() << "\n";
            const auto& v = f["verification"];
            out << "restriction to V(I(F)): " << v["restriction"].get<std::string>() << "\n";
            for (const auto& p : v["probes"])
                out << "  without " << p["dropped"].get<std::string>() << ": " << p["status"].get<std::string>()
                    << (p["passed"].get<bool>() ? "" : "  FAILED") << "\n";
            for (const auto& o : f["openness"]) {
                out << "  openness at (" << join(o["point"]) << ")";
                if (!o["fiber_point"].empty()) out << " over x = (" << join(o["fiber_point"]) << ")";
                out << ": ";
                if (!o["precondition_ok"].get<bool>())
                    out << o["message"].get<std::string>() << "\n";
                else
                    out << "local ideal (" << join(o["local"]) << ") " << (o["contained"].get<bool>() ? "is" : "is NOT")
                        << " inside (" << join(o["reference"]) << ")\n";
            }
            break;
        }
        case Command::oracle: oracle_text(out, doc["oracle"]); break;
        case Command::validate: {
            const auto& v = doc["validation"];
            out << "engine: " << v["engine"]["status"].get<std::string>() << "\n";
            oracle_text(out, v["oracle"]);
            out << "agreement: "
                << (v["comparable"].get<bool>() ? (v["agree"].get<bool>() ? "yes" : "NO") : "not comparable")
                << "; rank/G-kernel equivalence: " << (v["rank_kernel"]["holds"].get<bool>() ? "holds" : "FAILS")
                << "\n";
            if (!v["note"].get<std::string>().empty()) out << v["note"].get<std::string>() << "\n";
            break;
        }
    }
    return out.str();
}

}  // namespace

RunResult run_command(Command command, const ProblemFile& problem, const RunOptions& options) {
    auto start = std::chrono::steady_clock::now();
    ProblemData data = build_problem(problem, options.order);
    if (options.seed) data.config.seed = *options.seed;
    data.config.verify_reductions = options.verify_reductions;

    ordered doc;
    doc["schema"] = kReportSchema;
    doc["command"] = to_string(command);
    doc["problem"] = problem_json(problem, data.config);
    RunResult result;
    switch (command) {
        case Command::check: {
            FlatnessVerdict v = check_flat(data.presentation, data.ideal, data.config);
            doc["verdict"] = verdict_json(v);
            doc["psi"] = describe_psi(choose_block(data.presentation.phi));
            if (v.status == FlatStatus::inconclusive) result.exit_code = exit_inconclusive;
            break;
        }
        case Command::flattener: {
            for (const auto& point : options.points)
                if (point.base.size() != problem.base_vars.size() ||
                    (!point.fiber.empty() && point.fiber.size() != problem.fiber_vars.size()))
                    throw SplitMismatch("point has the wrong number of coordinates");
            FlattenerResult f = flattener_ideal(data.presentation, data.config);
            bool failed = false;
            doc["flattener"] = flattener_json(data.presentation, f, data.config, options.points, failed);
            if (failed)
                result.exit_code = exit_internal_error;
            else if (!f.complete || doc["flattener"]["verification"]["restriction"] == "inconclusive")
                result.exit_code = exit_inconclusive;
            break;
        }
        case Command::oracle: {
            OracleVerdict v = direct_flatness_test(data.presentation.phi, data.ideal, data.config.order);
            doc["oracle"] = oracle_json(v);
            if (v.status == OracleStatus::inconclusive) result.exit_code = exit_inconclusive;
            break;
        }
        case Command::validate: {
            CrossValidation cv = cross_validate(data.presentation, data.ideal, data.config);
            doc["validation"] = validate_json(cv);
            if (!cv.consistent)
                result.exit_code = exit_internal_error;
            else if (!cv.comparable)
                result.exit_code = exit_inconclusive;
            break;
        }
    }
    if (options.timing)
        doc["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    result.json = doc.dump(2) + "\n";
    result.text = render_text(command, doc);
    return result;
}

std::string corpus_report(const ProblemFile& problem) {
    ordered doc;
    doc["schema"] = kReportSchema;
    bool first = true;
    for (Command c : {Command::check, Command::flattener, Command::oracle, Command::validate}) {
        ordered part = ordered::parse(run_command(c, problem).json);
        if (first) doc["problem"] = part["problem"];
        first = false;
        part.erase("schema");
        part.erase("command");
        part.erase("problem");
        doc[to_string(c)] = std::move(part);
    }
    return doc.dump(2) + "\n";
}

std::filesystem::path corpus_dir() {
    if (const char* env = std::getenv("FLATCHECK_CORPUS_DIR"); env && *env) return env;
    return FLATCHECK_DEFAULT_CORPUS_DIR;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// First JSON pointer where the two documents differ.
std::string first_difference(const json& expected, const json& actual) {
    json patch = json::diff(expected, actual);
    if (patch.empty()) return {};
    return patch[0]["op"].get<std::string>() + " at " + patch[0]["path"].get<std::string>();
}

}  // namespace

CorpusRun run_corpus(const std::filesystem::path& dir, bool regenerate) {
    CorpusRun run;
    if (!std::filesystem::is_directory(dir))
        throw ProblemError("corpus directory not found: " + dir.string(), 0, 0, dir.string());
    std::vector<std::filesystem::path> problems;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        const std::string suffix = ".problem.json";
        if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            problems.push_back(e.path());
    }
    std::sort(problems.begin(), problems.end());
    for (const auto& path : problems) {
        std::string file = path.filename().string();
        CorpusEntry entry;
        entry.name = file.substr(0, file.size() - std::string(".problem.json").size());
        std::filesystem::path expected = dir / (entry.name + ".expected.json");
        std::string actual = corpus_report(parse_problem(path));
        if (regenerate) {
            std::ofstream(expected) << actual;
            entry.matched = entry.regenerated = true;
            entry.message = "regenerated";
        } else if (!std::filesystem::exists(expected)) {
            entry.message = "no expected report";
        } else {
            std::string want = read_file(expected);
            entry.matched = want == actual;
            if (!entry.matched) {
                std::string where = first_difference(json::parse(want), json::parse(actual));
                entry.message = where.empty() ? "formatting differs" : "report differs: " + where;
            }
        }
        run.ok = run.ok && entry.matched;
        run.entries.push_back(std::move(entry));
    }
    return run;
}

namespace {

std::vector<Rational> parse_coordinates(const std::string& text, const std::string& whole) {
    std::vector<Rational> out;
    if (text.empty()) return out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        auto b = part.find_first_not_of(" \t"), e = part.find_last_not_of(" \t");
        if (b == std::string::npos) throw ParseError("empty coordinate in point '" + whole + "'", 0, whole);
        out.push_back(parse_rational(part.substr(b, e - b + 1)));
    }
    return out;
}

}  // namespace

GermPoint parse_point(const std::string& text) {
    auto colon = text.find(':');
    GermPoint out;
    out.base = parse_coordinates(text.substr(0, colon), text);
    if (colon != std::string::npos) out.fiber = parse_coordinates(text.substr(colon + 1), text);
    return out;
}

}  // namespace flatcheck
