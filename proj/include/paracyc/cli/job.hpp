#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "paracyc/corr/dual_greenjulg.hpp"
#include "paracyc/corr/greenjulg.hpp"
#include "paracyc/cq/operators.hpp"
#include "paracyc/forms/verify.hpp"
#include "paracyc/hp/engine.hpp"

namespace paracyc::cli {

using json = nlohmann::json;

inline constexpr const char* kToolName = "paracyc";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchema = 1;

enum Exit { exit_ok = 0, exit_violation = 1, exit_invalid = 2 };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"verify-forms", "verify-cq", "greenjulg", "dual-greenjulg", "hpg", "hp"};
    return c;
}

inline int default_level(const std::string& command) {
    if (command == "verify-cq" || command == "hpg" || command == "hp") return 6;
    if (command == "dual-greenjulg") return 3;
    if (command == "greenjulg") return 2;
    return 4;
}

struct JobSpec {
    std::string command;
    json group = "trivial";
    json algebra = "scalars";
    int level = 0;  // 0 selects the command default
    std::string measure = "normalized";

    json echo() const {
        return {{"command", command}, {"group", group}, {"algebra", algebra}, {"level", level}, {"measure", measure}};
    }
};

// Top-level "name(arg, arg)" split; arguments may nest.
struct Call {
    std::string name;
    std::vector<std::string> args;
    bool has_parens = false;
};

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\n"), b = s.find_last_not_of(" \t\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline Call parse_call(const std::string& text) {
    std::string s = trim(text);
    Call c;
    std::size_t open = s.find('(');
    if (open == std::string::npos) {
        c.name = s;
        if (c.name.empty()) throw InputError("BadDescriptor", "empty descriptor");
        return c;
    }
    if (s.back() != ')') throw InputError("BadDescriptor", "unbalanced parentheses in '" + s + "'");
    c.name = trim(s.substr(0, open));
    c.has_parens = true;
    int depth = 0;
    std::string cur;
    for (std::size_t i = open + 1; i + 1 < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        if (ch == ')' && --depth < 0) throw InputError("BadDescriptor", "unbalanced parentheses in '" + s + "'");
        if (ch == ',' && depth == 0) {
            c.args.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (depth != 0) throw InputError("BadDescriptor", "unbalanced parentheses in '" + s + "'");
    if (!trim(cur).empty() || !c.args.empty()) c.args.push_back(trim(cur));
    for (auto& a : c.args)
        if (a.empty()) throw InputError("BadDescriptor", "empty argument in '" + s + "'");
    return c;
}

inline std::size_t parse_count(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    long v = -1;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || v < 0) throw InputError("BadDescriptor", what + ": '" + s + "' is not a non-negative integer");
    return static_cast<std::size_t>(v);
}

inline void expect_args(const Call& c, std::size_t lo, std::size_t hi) {
    if (c.args.size() < lo || c.args.size() > hi)
        throw InputError("BadDescriptor", c.name + " takes " + std::to_string(lo) + (lo == hi ? "" : ".." + std::to_string(hi)) +
                                              " arguments, got " + std::to_string(c.args.size()));
}

inline Rational parse_rational(const json& num, const json& den) {
    auto part = [](const json& j) -> Rational {
        if (j.is_number_integer()) return Rational(static_cast<long long>(j.get<std::int64_t>()));
        if (j.is_string()) {
            try {
                return Rational::parse(j.get<std::string>());
            } catch (const std::exception&) {
                throw InputError("BadRational", "cannot parse " + j.dump());
            }
        }
        throw InputError("BadRational", "expected an integer, got " + j.dump());
    };
    Rational d = part(den);
    if (d.is_zero()) throw InputError("BadRational", "zero denominator");
    return part(num) / d;
}

inline std::size_t json_index(const json& j, std::size_t bound, const std::string& what) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0 || static_cast<std::size_t>(j.get<std::int64_t>()) >= bound)
        throw InputError("OutOfRange", what + " index " + j.dump() + " outside 0.." + std::to_string(bound - 1));
    return static_cast<std::size_t>(j.get<std::int64_t>());
}

inline FiniteGroup parse_group(const json& desc) {
    if (desc.is_object()) {
        if (!desc.contains("table") || !desc["table"].is_array()) throw InputError("BadGroup", "inline group needs a \"table\" array");
        std::vector<std::vector<int>> table;
        for (auto& row : desc["table"]) {
            if (!row.is_array()) throw InputError("NotSquare", "table row is not an array");
            std::vector<int> r;
            for (auto& v : row) {
                if (!v.is_number_integer()) throw InputError("OutOfRange", "table entry " + v.dump() + " is not an integer");
                r.push_back(static_cast<int>(v.get<std::int64_t>()));
            }
            table.push_back(std::move(r));
        }
        std::vector<std::string> labels = desc.value("labels", std::vector<std::string>{});
        return FiniteGroup::from_table(table, labels, desc.value("name", std::string("inline")));
    }
    if (!desc.is_string()) throw InputError("BadGroup", "group descriptor must be a string or an object");
    Call c = parse_call(desc.get<std::string>());
    if (c.name == "trivial") {
        expect_args(c, 0, 0);
        return FiniteGroup::trivial();
    }
    if (c.name == "klein4") {
        expect_args(c, 0, 0);
        return FiniteGroup::klein4();
    }
    if (c.name == "cyclic") {
        expect_args(c, 1, 1);
        return FiniteGroup::cyclic(parse_count(c.args[0], "cyclic"));
    }
    if (c.name == "symmetric") {
        expect_args(c, 1, 1);
        return FiniteGroup::symmetric(parse_count(c.args[0], "symmetric"));
    }
    throw InputError("UnknownBuiltin", "no group named '" + c.name + "'");
}

// {"labels": [...], "mult": [[i, j, k, num, den], ...], "action": [[[row, col, num, den], ...] per element], "unit": [[i, num, den], ...]}
inline GAlgebra parse_inline_algebra(const json& desc, const FiniteGroup& g) {
    GAlgebra a;
    a.group = g;
    a.name = desc.value("name", std::string("inline"));
    if (desc.contains("labels")) {
        a.labels = desc["labels"].get<std::vector<std::string>>();
    } else if (desc.contains("dim") && desc["dim"].is_number_integer() && desc["dim"].get<std::int64_t>() > 0) {
        for (std::int64_t i = 0; i < desc["dim"].get<std::int64_t>(); ++i) a.labels.push_back("e" + std::to_string(i));
    } else {
        throw InputError("BadAlgebra", "inline algebra needs \"labels\" or a positive \"dim\"");
    }
    std::size_t n = a.dim();
    std::vector<std::vector<Entry>> terms(n * n);
    for (auto& e : desc.value("mult", json::array())) {
        if (!e.is_array() || e.size() != 5) throw InputError("BadAlgebra", "structure constant " + e.dump() + " is not [i, j, k, num, den]");
        std::size_t i = json_index(e[0], n, "mult"), j = json_index(e[1], n, "mult"), k = json_index(e[2], n, "mult");
        terms[i * n + j].emplace_back(static_cast<Index>(k), parse_rational(e[3], e[4]));
    }
    for (auto& t : terms) a.mult.push_back(normalize_terms(std::move(t)));
    if (!desc.contains("action")) {
        a.action = trivial_action(g, n);
    } else {
        const json& act = desc["action"];
        if (!act.is_array() || act.size() != g.size()) throw InputError("BadAction", "need one action matrix per group element");
        for (auto& m : act) {
            std::vector<Triplet> trips;
            for (auto& e : m) {
                if (!e.is_array() || e.size() != 4) throw InputError("BadAction", "action entry " + e.dump() + " is not [row, col, num, den]");
                trips.push_back({json_index(e[0], n, "action"), json_index(e[1], n, "action"), parse_rational(e[2], e[3])});
            }
            a.action.push_back(SparseMatrix::from_triplets(n, n, std::move(trips)));
        }
    }
    if (desc.contains("unit")) {
        std::vector<Entry> u;
        for (auto& e : desc["unit"]) {
            if (!e.is_array() || e.size() != 3) throw InputError("BadUnit", "unit entry " + e.dump() + " is not [i, num, den]");
            u.emplace_back(static_cast<Index>(json_index(e[0], n, "unit")), parse_rational(e[1], e[2]));
        }
        a.unit = normalize_terms(std::move(u));
    }
    a.validate();
    return a;
}

inline GAlgebra parse_algebra(const json& desc, const FiniteGroup& g, Measure m);

inline GAlgebra parse_algebra_call(const std::string& text, const FiniteGroup& g, Measure m) {
    Call c = parse_call(text);
    auto measure_arg = [&](std::size_t i) { return c.args.size() > i ? parse_measure(c.args[i]) : m; };
    auto nullary = [&](auto&& make) {
        expect_args(c, 0, 0);
        return make(g);
    };
    if (c.name == "scalars") return nullary(builtin::scalars);
    if (c.name == "dual-numbers") return nullary(builtin::dual_numbers);
    if (c.name == "group-algebra-adjoint") return nullary(builtin::group_algebra_adjoint);
    if (c.name == "O_G") return nullary(builtin::functions_OG);
    if (c.name == "functions-on-G-set") return nullary(builtin::functions_translation);
    if (c.name == "functions-on-two-point-set") return nullary(builtin::functions_on_two_point_set);
    if (c.name == "upper-triangular") return nullary(builtin::upper_triangular);
    if (c.name == "zero") return nullary(zero_algebra);
    if (c.name == "K_G") {
        expect_args(c, 0, 1);
        return builtin::kernels_KG(g, measure_arg(0));
    }
    if (c.name == "matrix") {
        expect_args(c, 1, 1);
        std::size_t n = parse_count(c.args[0], "matrix");
        if (n == 0) throw InputError("BadDescriptor", "matrix(0)");
        return builtin::matrix_algebra(g, n);
    }
    if (c.name == "crossed") {
        expect_args(c, 1, 2);
        return crossed_product(parse_algebra(c.args[0], g, m), measure_arg(1));
    }
    if (c.name == "tensor") {
        expect_args(c, 2, 2);
        return tensor_galgebras(parse_algebra(c.args[0], g, m), parse_algebra(c.args[1], g, m));
    }
    if (c.name == "unitarize") {
        expect_args(c, 1, 1);
        return unitarize(parse_algebra(c.args[0], g, m));
    }
    if (c.name == "forget") {
        expect_args(c, 1, 1);
        return forget_action(parse_algebra(c.args[0], g, m));
    }
    throw InputError("UnknownBuiltin", "no algebra named '" + c.name + "'");
}

inline GAlgebra parse_algebra(const json& desc, const FiniteGroup& g, Measure m) {
    if (desc.is_object()) return parse_inline_algebra(desc, g);
    if (!desc.is_string()) throw InputError("BadAlgebra", "algebra descriptor must be a string or an object");
    return parse_algebra_call(desc.get<std::string>(), g, m);
}

inline std::vector<std::pair<std::string, std::string>> builtin_catalog() {
    return {
        {"group trivial", "the trivial group"},
        {"group cyclic(n)", "Z/n"},
        {"group symmetric(n)", "S_n, 1 <= n <= 5"},
        {"group klein4", "Z/2 x Z/2"},
        {"group {\"table\": [[...]], \"labels\": [...]}", "inline multiplication table"},
        {"algebra scalars", "Q with trivial action"},
        {"algebra dual-numbers", "Q[eps]/eps^2, trivial action"},
        {"algebra group-algebra-adjoint", "Q[G] with conjugation action"},
        {"algebra O_G", "functions on G, conjugation action"},
        {"algebra functions-on-G-set", "functions on G, left translation"},
        {"algebra functions-on-two-point-set", "functions on {p0, p1}, G acting through its sign character"},
        {"algebra K_G[(measure)]", "kernels on G x G"},
        {"algebra matrix(n)", "M_n(Q), trivial action"},
        {"algebra upper-triangular", "upper triangular 2x2 matrices, trivial action"},
        {"algebra zero", "the zero algebra"},
        {"algebra crossed(A[, measure])", "crossed product A x| G"},
        {"algebra tensor(A, B)", "A (x) B with diagonal action"},
        {"algebra unitarize(A)", "A+ = A (+) Q1"},
        {"algebra forget(A)", "A with the trivial action"},
        {"algebra {\"labels\": [...], \"mult\": [[i, j, k, num, den], ...]}", "inline structure constants"},
    };
}

// Reads {"group", "algebra", "level", "measure", "command"}; absent keys keep their defaults.
inline JobSpec job_from_json(const json& j) {
    if (!j.is_object()) throw InputError("BadSpec", "job spec must be a JSON object");
    static const std::vector<std::string> keys = {"group", "algebra", "level", "measure", "command"};
    for (auto& [k, v] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw InputError("BadSpec", "unknown key \"" + k + "\"");
    JobSpec s;
    if (j.contains("command")) {
        if (!j["command"].is_string()) throw InputError("BadSpec", "\"command\" must be a string");
        s.command = j["command"];
    }
    if (j.contains("group")) s.group = j["group"];
    if (j.contains("algebra")) s.algebra = j["algebra"];
    if (j.contains("level")) {
        if (!j["level"].is_number_integer()) throw InputError("BadSpec", "\"level\" must be an integer");
        s.level = static_cast<int>(j["level"].get<std::int64_t>());
    }
    if (j.contains("measure")) {
        if (!j["measure"].is_string()) throw InputError("BadSpec", "\"measure\" must be a string");
        s.measure = j["measure"];
    }
    return s;
}

inline JobSpec read_job_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("BadSpec", "cannot read " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("BadSpec", path + ": " + e.what());
    }
    return job_from_json(j);
}

struct RunReport {
    JobSpec job;
    std::vector<std::string> notices;
    CheckLog log;
    json payload = json::object();
    std::map<std::string, double> timings;
    int exit_status = exit_ok;
    std::string error_kind, error_detail;

    json to_json(bool with_timings = true) const {
        json records = json::array();
        std::size_t passed = 0, failed = 0, skipped = 0;
        for (auto& r : log.records()) {
            json x = {{"name", r.name}, {"anchor", r.anchor}, {"scope", r.scope}, {"status", status_name(r.status)}};
            if (!r.witness.empty()) x["witness"] = r.witness;
            records.push_back(std::move(x));
            (r.status == Status::pass ? passed : r.status == Status::fail ? failed : skipped)++;
        }
        json out = {{"schema", kSchema},
                    {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
                    {"job", job.echo()},
                    {"notices", notices},
                    {"records", records},
                    {"summary", {{"checks", records.size()}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}}},
                    {"payload", payload},
                    {"exit_status", exit_status}};
        if (!error_kind.empty()) out["error"] = {{"kind", error_kind}, {"detail", error_detail}};
        if (with_timings) out["timings"] = timings;
        return out;
    }
};

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c;
    }
    return o + "\"";
}

// One row per record, then payload scalars flattened as "payload" rows and timings last.
inline std::string to_csv(const RunReport& r) {
    std::ostringstream os;
    os << "kind,name,anchor,scope,status,value\n";
    auto row = [&](const std::string& kind, const std::string& name, const std::string& anchor, const std::string& scope,
                   const std::string& status, const std::string& value) {
        os << csv_field(kind) << ',' << csv_field(name) << ',' << csv_field(anchor) << ',' << csv_field(scope) << ','
           << csv_field(status) << ',' << csv_field(value) << '\n';
    };
    json j = r.to_json();
    row("meta", "schema", "", "", "", std::to_string(kSchema));
    row("meta", "tool", "", "", "", std::string(kToolName) + " " + kToolVersion);
    row("meta", "job", "", "", "", r.job.echo().dump());
    for (auto& n : r.notices) row("notice", "", "", "", "", n);
    for (auto& x : r.log.records()) row("check", x.name, x.anchor, x.scope, status_name(x.status), x.witness);
    json flat = r.payload.flatten();
    for (auto& [k, v] : flat.items()) row("payload", k, "", "", "", v.is_string() ? v.get<std::string>() : v.dump());
    if (!r.error_kind.empty()) row("error", r.error_kind, "", "", "", r.error_detail);
    row("meta", "exit_status", "", "", "", std::to_string(r.exit_status));
    for (auto& [k, v] : r.timings) row("timing", k, "", "", "", std::to_string(v));
    return os.str();
}

inline json homology_json(const HomologyReport& h) {
    json levels = json::array();
    for (auto& l : h.levels)
        levels.push_back({{"level", l.level}, {"chain_even", l.chain_even}, {"chain_odd", l.chain_odd}, {"even", l.even}, {"odd", l.odd}});
    SuperHomology s = h.last();
    return {{"kind", h.kind},
            {"group", h.group},
            {"algebra", h.algebra},
            {"levels", levels},
            {"read_at_level", h.levels.empty() ? 0 : h.levels.back().level},
            {"even", s.even},
            {"odd", s.odd},
            {"stabilized", h.stabilized},
            {"notes", h.notes}};
}

inline GAlgebra with_unit(const GAlgebra& a, RunReport& r) {
    if (a.unit) return a;
    r.notices.push_back(a.name + " has no unit; using its unitarization");
    return unitarize(a);
}

class Timer {
public:
    explicit Timer(RunReport& r, std::string key) : r_(r), key_(std::move(key)), t0_(std::chrono::steady_clock::now()) {}
    ~Timer() { r_.timings[key_] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    RunReport& r_;
    std::string key_;
    std::chrono::steady_clock::time_point t0_;
};

inline void cmd_verify_forms(const GAlgebra& a, int N, RunReport& r) {
    FormsSuiteOptions opt;
    opt.top = N;
    Timer t(r, "forms_suite_seconds");
    run_forms_suite(a, opt, r.log);
}

inline void cmd_verify_cq(const GAlgebra& a, int N, RunReport& r) {
    {
        Timer t(r, "polynomial_seconds");
        cq_polynomial_identities(N, r.log);
    }
    require_tower_size(a, N);
    FormSpace fs(a, N);
    Timer t(r, "cq_suite_seconds");
    run_cq_suite(fs, CqSuiteOptions{N}, r.log);
    if (N < 4) r.notices.push_back("level " + std::to_string(N) + ": identities of arity above the level have an empty interior-degree range");
}

inline void cmd_greenjulg(const GAlgebra& a, RunReport& r) {
    GAlgebra R = with_unit(a, r);
    Timer t(r, "greenjulg_seconds");
    GreenJulgData d = green_julg(R);
    green_julg_checks(d, r.log);
    r.payload["dimensions"] = {{"coinvariants", {d.coinv.even.dim(), d.coinv.odd.dim()}},
                               {"invariants", {d.coinv.invariant_dim[0], d.coinv.invariant_dim[1]}},
                               {"relative_crossed_product", {d.Q0.dim(), d.Q1.dim()}},
                               {"lambda0_rank", rank(d.lambda0)},
                               {"group_order", d.g},
                               {"algebra_dim", d.nR}};
}

inline void cmd_dual_greenjulg(const GAlgebra& a, int N, RunReport& r) {
    GAlgebra A = with_unit(a, r);
    Timer t(r, "dual_greenjulg_seconds");
    DualGreenJulg d = dual_green_julg(A, N);
    dual_green_julg_checks(d, r.log);
    json coinv = json::array(), forms = json::array();
    for (int n = 0; n <= d.top; ++n) {
        coinv.push_back(d.coinv[static_cast<std::size_t>(n)].dim());
        forms.push_back(d.fsC->dim(n));
    }
    r.payload["dimensions"] = {{"coinvariant_forms_by_degree", coinv}, {"stabilized_forms_by_degree", forms}};
}

inline void cmd_hpg(const GAlgebra& a, int N, RunReport& r) {
    HomologyReport h;
    {
        Timer t(r, "hpg_seconds");
        h = hpg_second_variable(a, N);
        r.payload["homology"] = homology_json(h);
    }
    if (!a.unit) {
        r.notices.push_back("comparison with the crossed product skipped: " + a.name + " has no unit");
        return;
    }
    Timer t(r, "comparison_seconds");
    GreenJulgComparison c;
    try {
        c = greenjulg_compare(a, N, &h);
    } catch (const InputError& e) {
        if (e.kind() != "LevelTooHigh") throw;
        r.notices.push_back(std::string("comparison with the crossed product skipped: ") + e.what());
        return;
    }
    SuperHomology e = c.equivariant.last(), x = c.crossed.last();
    r.payload["comparison"] = {{"equivariant", {e.even, e.odd}},
                               {"crossed_product", {x.even, x.odd}},
                               {"crossed_product_homology", homology_json(c.crossed)},
                               {"relative_crossed_product", {c.relative.even, c.relative.odd}},
                               {"relative_agrees", c.relative_agrees},
                               {"invariant_x", {c.invariant_x[0], c.invariant_x[1]}},
                               {"relative_x", {c.relative_x[0], c.relative_x[1]}}};
    std::string scope = a.name + " over " + a.group.name() + ", level " + std::to_string(N);
    r.log.expect_true("invariant and relative X-complexes have equal dimensions", "dim X_G(R)^G = dim X(R x| G)_H", scope,
                      c.chain_dims_equal,
                      "(" + std::to_string(c.invariant_x[0]) + ", " + std::to_string(c.invariant_x[1]) + ") vs (" +
                          std::to_string(c.relative_x[0]) + ", " + std::to_string(c.relative_x[1]) + ")");
    r.log.expect_true("equivariant and crossed-product homology agree",
                      "H(theta^N Omega_G(R)^G) = HP(R x| G) at truncation", scope, c.agree,
                      "equivariant (" + std::to_string(e.even) + ", " + std::to_string(e.odd) + "), crossed product (" +
                          std::to_string(x.even) + ", " + std::to_string(x.odd) + ")");
}

inline void cmd_hp(const GAlgebra& a, int N, RunReport& r) {
    Timer t(r, "hp_seconds");
    r.payload["homology"] = homology_json(hp_ordinary(a, N));
}

inline std::string error_kind_of(const std::exception& e) {
    if (auto* ie = dynamic_cast<const InputError*>(&e)) return ie->kind();
    return "InternalError";
}

// Runs one job; never throws. Exit status 2 on invalid input, 1 on any failed identity or internal inconsistency.
inline RunReport run_job(JobSpec job) {
    RunReport r;
    r.job = job;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (job.command.empty()) throw InputError("BadSpec", "no command given");
        if (std::find(commands().begin(), commands().end(), job.command) == commands().end())
            throw InputError("UnknownCommand", "'" + job.command + "'");
        if (job.level == 0) job.level = default_level(job.command);
        r.job = job;
        if (job.level < 2) throw InputError("BadLevel", "level must be at least 2, got " + std::to_string(job.level));
        Measure m = parse_measure(job.measure);
        FiniteGroup g = parse_group(job.group);
        GAlgebra a = parse_algebra(job.algebra, g, m);
        a.validate();
        r.payload["input"] = {{"group", g.name()}, {"group_order", g.size()}, {"algebra", a.name}, {"algebra_dim", a.dim()},
                              {"unital", a.unit.has_value()}};
        const std::string& c = job.command;
        if (c == "verify-forms") cmd_verify_forms(a, job.level, r);
        else if (c == "verify-cq") cmd_verify_cq(a, job.level, r);
        else if (c == "greenjulg") cmd_greenjulg(a, r);
        else if (c == "dual-greenjulg") cmd_dual_greenjulg(a, job.level, r);
        else if (c == "hpg") cmd_hpg(a, job.level, r);
        else cmd_hp(a, job.level, r);
        r.exit_status = r.log.all_pass() ? exit_ok : exit_violation;
    } catch (const InputError& e) {
        r.error_kind = e.kind();
        r.error_detail = e.what();
        r.exit_status = exit_invalid;
    } catch (const json::exception& e) {
        r.error_kind = "BadSpec";
        r.error_detail = e.what();
        r.exit_status = exit_invalid;
    } catch (const std::exception& e) {
        r.error_kind = error_kind_of(e);
        r.error_detail = e.what();
        r.exit_status = exit_violation;
    }
    r.timings["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::string render(const RunReport& r, const std::string& format) {
    if (format == "csv") return to_csv(r);
    return r.to_json().dump(2) + "\n";
}

// Writes to a sibling temporary file and renames it into place.
inline void write_atomically(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("BadOutput", "cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw InputError("BadOutput", "write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("BadOutput", "cannot move report into " + path + ": " + ec.message());
    }
}

}  // namespace paracyc::cli
