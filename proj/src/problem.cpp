#include "flatcheck/problem.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace flatcheck {

using nlohmann::json;

namespace {

struct Location {
    std::size_t line = 1, column = 1;
};

Location locate(const std::string& text, std::size_t offset) {
    Location loc;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++loc.line;
            loc.column = 1;
        } else {
            ++loc.column;
        }
    }
    return loc;
}

// Position of the first occurrence of the JSON string literal `value`
// (after `from`), pointing just past the opening quote.
std::size_t find_literal(const std::string& text, const std::string& value, std::size_t from = 0) {
    std::string quoted = json(value).dump();
    std::size_t at = text.find(quoted, from);
    return at == std::string::npos ? std::string::npos : at + 1;
}

class Validator {
public:
    Validator(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& what, const std::string& key, const std::string& token,
                           const std::string& section = "") const {
        std::size_t at = key.empty() ? std::string::npos : find_literal(text_, key, section_start(section));
        Location loc = at == std::string::npos ? Location{} : locate(text_, at - 1);
        throw ProblemError(source_ + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + what,
                           loc.line, loc.column, token);
    }

    // A polynomial literal that failed to parse; points into the literal.
    [[noreturn]] void fail_literal(const std::string& context, const std::string& section, const std::string& literal,
                                   const ParseError& e) const {
        std::size_t at = find_literal(text_, literal, section_start(section));
        Location loc = at == std::string::npos ? Location{} : locate(text_, at + e.position());
        throw ProblemError(source_ + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                               context + ": " + e.what(),
                           loc.line, loc.column, e.token());
    }

    const json& member(const json& doc, const char* key, bool required = true) const {
        static const json missing;
        auto it = doc.find(key);
        if (it == doc.end()) {
            if (required) fail(std::string("missing field \"") + key + "\"", "", key);
            return missing;
        }
        return *it;
    }

    std::vector<std::string> strings(const json& value, const char* key) const {
        if (!value.is_array()) fail(std::string("\"") + key + "\" must be a list of strings", key, key);
        std::vector<std::string> out;
        for (const auto& v : value) {
            if (!v.is_string()) fail(std::string("\"") + key + "\" must be a list of strings", key, v.dump());
            out.push_back(v.get<std::string>());
        }
        return out;
    }

private:
    std::size_t section_start(const std::string& section) const {
        if (section.empty()) return 0;
        std::size_t at = find_literal(text_, section);
        return at == std::string::npos ? 0 : at;
    }

    const std::string& text_;
    std::string source_;
};

bool valid_name(const std::string& name) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        Location loc = locate(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string token = e.byte > 0 && e.byte <= text.size() ? text.substr(e.byte - 1, 1) : "";
        throw ProblemError(source + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.column) +
                               ": malformed JSON: " + e.what(),
                           loc.line, loc.column, token);
    }
    Validator v(text, source);
    if (!doc.is_object()) v.fail("problem must be a JSON object", "", "");

    ProblemFile out;
    out.base_vars = v.strings(v.member(doc, "base_vars"), "base_vars");
    out.fiber_vars = v.strings(v.member(doc, "fiber_vars"), "fiber_vars");
    std::set<std::string> names;
    for (const auto& list : {out.base_vars, out.fiber_vars})
        for (const auto& name : list) {
            if (!valid_name(name)) v.fail("invalid variable name '" + name + "'", name, name);
            if (!names.insert(name).second) v.fail("duplicate variable '" + name + "'", name, name);
        }
    if (names.size() > kMaxVars)
        v.fail("at most " + std::to_string(kMaxVars) + " variables are supported", "base_vars", "");

    const json& pres = v.member(doc, "presentation");
    if (!pres.is_array() || pres.empty())
        v.fail("\"presentation\" must be a non-empty list of rows", "presentation", "");
    std::size_t cols = std::string::npos;
    for (const auto& row : pres) {
        auto entries = v.strings(row, "presentation");
        if (cols == std::string::npos) cols = entries.size();
        if (entries.size() != cols) v.fail("presentation rows have different lengths", "presentation", row.dump());
        out.presentation.push_back(std::move(entries));
    }
    if (cols == 0) v.fail("presentation rows must not be empty", "presentation", "");

    const json& ideal = v.member(doc, "ideal_J", false);
    if (!ideal.is_null()) out.ideal = v.strings(ideal, "ideal_J");

    const json& order = v.member(doc, "order", false);
    if (!order.is_null()) {
        if (!order.is_number_integer() || order.get<long long>() < 1 || order.get<long long>() > kMaxOrder)
            v.fail("\"order\" must be an integer between 1 and " + std::to_string(kMaxOrder), "order", order.dump());
        out.order = order.get<int>();
    }
    const json& seed = v.member(doc, "seed", false);
    if (!seed.is_null()) {
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
            v.fail("\"seed\" must be a non-negative integer", "seed", seed.dump());
        out.seed = seed.get<std::uint64_t>();
    }
    const json& label = v.member(doc, "label", false);
    if (!label.is_null()) {
        if (!label.is_string()) v.fail("\"label\" must be a string", "label", label.dump());
        out.label = label.get<std::string>();
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        static const std::set<std::string> known{"base_vars", "fiber_vars", "presentation", "ideal_J",
                                                 "order",     "seed",       "label"};
        if (!known.count(it.key())) v.fail("unknown field \"" + it.key() + "\"", it.key(), it.key());
    }

    // polynomial validation and canonical form
    SplitPtr split = make_split(out.base_vars, out.fiber_vars);
    SplitPtr base = split->base_only();
    for (auto& row : out.presentation)
        for (auto& entry : row) {
            try {
                entry = parse_series(entry, split, out.order).to_string();
            } catch (const ParseError& e) {
                v.fail_literal("presentation entry", "presentation", entry, e);
            }
        }
    for (auto& gen : out.ideal) {
        Series s(split, out.order);
        try {
            s = parse_series(gen, split, out.order);
        } catch (const ParseError& e) {
            v.fail_literal("ideal generator", "ideal_J", gen, e);
        }
        for (const Term& t : s.terms())
            if (t.mono.degree_in(split->base_count(), split->size()) != 0)
                v.fail("J must use base variables only", gen, gen, "ideal_J");
        gen = parse_series(gen, base, out.order).to_string();
    }
    return out;
}

ProblemFile parse_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file " + path.string(), 0, 0, path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_text(buffer.str(), path.string());
}

std::string serialize_problem(const ProblemFile& problem) {
    json doc;
    doc["base_vars"] = problem.base_vars;
    doc["fiber_vars"] = problem.fiber_vars;
    doc["presentation"] = problem.presentation;
    doc["ideal_J"] = problem.ideal;
    doc["order"] = problem.order;
    doc["seed"] = problem.seed;
    doc["label"] = problem.label;
    return doc.dump(2) + "\n";
}

ProblemData build_problem(const ProblemFile& problem, int order) {
    int n = order > 0 ? order : problem.order;
    SplitPtr split = make_split(problem.base_vars, problem.fiber_vars);
    EngineConfig config;
    config.order = n;
    config.seed = problem.seed;
    config.max_depth = std::max<int>(config.max_depth, int(problem.fiber_vars.size()) + 1);
    Presentation pres{SeriesMatrix::parse(split, problem.presentation, n), problem.label};
    Ideal ideal = Ideal::parse(split->base_only(), problem.ideal, n);
    return ProblemData{split, std::move(pres), std::move(ideal), config};
}

}  // namespace flatcheck
