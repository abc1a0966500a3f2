#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "paracyc/cli/job.hpp"

using namespace paracyc;
using namespace paracyc::cli;

namespace {

JobSpec job(const std::string& command, json group, json algebra, int level = 0) {
    JobSpec s;
    s.command = command;
    s.group = std::move(group);
    s.algebra = std::move(algebra);
    s.level = level;
    return s;
}

std::size_t failed(const RunReport& r) { return r.log.failures(); }

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "paracyc_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

int run_binary(const std::string& args, std::string* out = nullptr) {
    auto path = scratch("stdout.txt");
    std::string cmd = std::string(PARACYC_CLI) + " " + args + " > " + path.string() + " 2>/dev/null";
    int st = std::system(cmd.c_str());
    if (out) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        *out = ss.str();
    }
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

TEST(Descriptors, NamedGroups) {
    EXPECT_EQ(parse_group("trivial").size(), 1u);
    EXPECT_EQ(parse_group("cyclic(5)").size(), 5u);
    EXPECT_EQ(parse_group(" symmetric( 3 ) ").size(), 6u);
    EXPECT_EQ(parse_group("klein4").size(), 4u);
    EXPECT_THROW(parse_group("cyclic(x)"), InputError);
    EXPECT_THROW(parse_group("cyclic(2, 3)"), InputError);
    EXPECT_THROW(parse_group("dihedral(4)"), InputError);
}

TEST(Descriptors, InlineGroupErrors) {
    try {
        parse_group(json::parse(R"({"table": [[0, 1], [1, 1]]})"));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.kind(), "NoInverse");
    }
    try {
        parse_group(json::parse(R"({"table": [[0, 1], [1]]})"));
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.kind(), "NotSquare");
    }
    FiniteGroup z2 = parse_group(json::parse(R"({"table": [[0, 1], [1, 0]], "labels": ["e", "s"]})"));
    EXPECT_EQ(z2.size(), 2u);
    EXPECT_EQ(z2.label(1), "s");
}

TEST(Descriptors, CompositeAlgebras) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    EXPECT_EQ(parse_algebra("crossed(O_G)", z2, Measure::normalized).dim(), 4u);
    EXPECT_EQ(parse_algebra("K_G(counting)", z2, Measure::normalized).dim(), 4u);
    EXPECT_EQ(parse_algebra("tensor(dual-numbers, matrix(2))", z2, Measure::normalized).dim(), 8u);
    GAlgebra u = parse_algebra("unitarize(crossed(tensor(scalars, functions-on-two-point-set), counting))", z2, Measure::normalized);
    EXPECT_EQ(u.dim(), 5u);
    EXPECT_TRUE(u.unit.has_value());
    EXPECT_THROW(parse_algebra("crossed(O_G", z2, Measure::normalized), InputError);
    EXPECT_THROW(parse_algebra("tensor(O_G)", z2, Measure::normalized), InputError);
    EXPECT_THROW(parse_algebra("crossed(O_G, uniform)", z2, Measure::normalized), InputError);
    EXPECT_THROW(parse_algebra("polynomials", z2, Measure::normalized), InputError);
}

TEST(Descriptors, InlineAlgebraExactConstants) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    // Q x Q with idempotents e0, e1 swapped by the generator, unit e0 + e1.
    json swap = json::parse(R"({"labels": ["e0", "e1"], "mult": [[0, 0, 0, 1, 1], [1, 1, 1, 2, 2]],
                                "action": [[[0, 0, 1, 1], [1, 1, 1, 1]], [[1, 0, 1, 1], [0, 1, 1, 1]]],
                                "unit": [[0, 1, 1], [1, 1, 1]]})");
    GAlgebra a = parse_algebra(swap, z2, Measure::normalized);
    EXPECT_EQ(a.dim(), 2u);
    EXPECT_TRUE(a.unit.has_value());
    json bad = swap;
    bad["mult"][1] = json::array({1, 1, 1, 1, 2});
    try {
        parse_algebra(bad, z2, Measure::normalized);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.kind(), "NotAutomorphism");
    }
    json nonassoc = json::parse(R"({"labels": ["x", "y"], "mult": [[0, 0, 1, 1, 1], [0, 1, 0, 1, 1]]})");
    try {
        parse_algebra(nonassoc, FiniteGroup::trivial(), Measure::normalized);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(e.kind(), "NotAssociative");
    }
    json zero_den = swap;
    zero_den["mult"][0] = json::array({0, 0, 0, 1, 0});
    EXPECT_THROW(parse_algebra(zero_den, z2, Measure::normalized), InputError);
    json out_of_range = swap;
    out_of_range["mult"][0] = json::array({0, 2, 0, 1, 1});
    EXPECT_THROW(parse_algebra(out_of_range, z2, Measure::normalized), InputError);
}

TEST(JobSpecs, ReadsJsonAndRejectsUnknownKeys) {
    JobSpec s = job_from_json(json::parse(R"j({"command": "hpg", "group": "cyclic(2)", "algebra": "scalars", "level": 5})j"));
    EXPECT_EQ(s.command, "hpg");
    EXPECT_EQ(s.level, 5);
    EXPECT_EQ(s.measure, "normalized");
    EXPECT_THROW(job_from_json(json::parse(R"({"command": "hpg", "levle": 5})")), InputError);
    EXPECT_THROW(job_from_json(json::parse(R"({"level": "five"})")), InputError);
}

TEST(Commands, VerifyForms) {
    RunReport r = run_job(job("verify-forms", "cyclic(2)", "scalars", 5));
    EXPECT_EQ(r.exit_status, exit_ok);
    EXPECT_GT(r.log.records().size(), 5u);
    EXPECT_EQ(failed(r), 0u);
    RunReport d = run_job(job("verify-forms", "trivial", "dual-numbers", 5));
    EXPECT_EQ(d.exit_status, exit_ok);
}

TEST(Commands, InvalidInputExitsTwo) {
    RunReport r = run_job(job("verify-forms", json::parse(R"({"table": [[0, 1], [1, 1]]})"), "scalars", 3));
    EXPECT_EQ(r.exit_status, exit_invalid);
    EXPECT_EQ(r.error_kind, "NoInverse");
    EXPECT_EQ(run_job(job("verify-forms", "trivial", "scalars", 1)).error_kind, "BadLevel");
    EXPECT_EQ(run_job(job("frobnicate", "trivial", "scalars")).error_kind, "UnknownCommand");
    EXPECT_EQ(run_job(job("hpg", "trivial", "nothing")).error_kind, "UnknownBuiltin");
    JobSpec m = job("hpg", "trivial", "scalars");
    m.measure = "haar";
    EXPECT_EQ(run_job(m).error_kind, "BadMeasure");
}

TEST(Commands, VerifyCq) {
    RunReport r = run_job(job("verify-cq", "cyclic(2)", "group-algebra-adjoint", 6));
    EXPECT_EQ(r.exit_status, exit_ok);
    EXPECT_GE(r.log.passes(), 28u);
    RunReport s = run_job(job("verify-cq", "symmetric(3)", "scalars", 6));
    EXPECT_EQ(s.exit_status, exit_ok);
    RunReport low = run_job(job("verify-cq", "cyclic(2)", "scalars", 2));
    EXPECT_EQ(low.exit_status, exit_ok);
    ASSERT_FALSE(low.notices.empty());
    EXPECT_NE(low.notices.back().find("empty interior-degree range"), std::string::npos);
}

TEST(Commands, GreenJulgAndDual) {
    RunReport g = run_job(job("greenjulg", "cyclic(2)", "O_G"));
    EXPECT_EQ(g.exit_status, exit_ok);
    EXPECT_EQ(g.payload["dimensions"]["invariants"], g.payload["dimensions"]["relative_crossed_product"]);
    RunReport d = run_job(job("dual-greenjulg", "cyclic(2)", "unitarize(dual-numbers)", 3));
    EXPECT_EQ(d.exit_status, exit_ok);
    EXPECT_EQ(d.payload["dimensions"]["coinvariant_forms_by_degree"], json::parse("[12, 156, 1872, 22464]"));
    RunReport t = run_job(job("greenjulg", "trivial", "scalars"));
    EXPECT_EQ(t.exit_status, exit_ok);
    EXPECT_EQ(run_job(job("dual-greenjulg", "trivial", "scalars")).exit_status, exit_ok);
}

TEST(Commands, NonUnitalInputIsUnitarizedWithNotice) {
    json nil = json::parse(R"({"labels": ["eps"], "mult": []})");
    RunReport r = run_job(job("greenjulg", "cyclic(2)", nil));
    EXPECT_EQ(r.exit_status, exit_ok);
    ASSERT_EQ(r.notices.size(), 1u);
    EXPECT_NE(r.notices[0].find("unitarization"), std::string::npos);
}

TEST(Commands, HomologyAndComparison) {
    RunReport r = run_job(job("hpg", "cyclic(2)", "scalars", 6));
    EXPECT_EQ(r.exit_status, exit_ok);
    EXPECT_EQ(r.payload["homology"]["even"], 2);
    EXPECT_EQ(r.payload["homology"]["odd"], 0);
    EXPECT_EQ(r.payload["homology"]["stabilized"], true);
    EXPECT_EQ(r.payload["comparison"]["crossed_product"], json::parse("[2, 0]"));
    RunReport h = run_job(job("hp", "cyclic(2)", "group-algebra-adjoint", 6));
    EXPECT_EQ(h.exit_status, exit_ok);
    EXPECT_EQ(h.payload["homology"]["even"], 2);
    EXPECT_EQ(h.payload["homology"]["odd"], 0);
}

TEST(Reports, SchemaAndWitnesses) {
    RunReport r = run_job(job("verify-forms", "trivial", "scalars", 3));
    json j = r.to_json();
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["tool"]["version"], kToolVersion);
    EXPECT_EQ(j["job"]["command"], "verify-forms");
    for (auto& rec : j["records"]) {
        EXPECT_FALSE(rec["anchor"].get<std::string>().empty());
        if (rec["status"] == "fail") {
            EXPECT_TRUE(rec.contains("witness"));
        }
    }
    EXPECT_TRUE(j["timings"].contains("total_seconds"));
    std::string csv = to_csv(r);
    EXPECT_EQ(csv.rfind("kind,name,anchor,scope,status,value\n", 0), 0u);
    EXPECT_EQ(csv_field("a,\"b\""), "\"a,\"\"b\"\"\"");
}

TEST(Reports, DeterministicModuloTimings) {
    for (const char* cmd : {"verify-forms", "verify-cq", "greenjulg", "hpg"}) {
        JobSpec s = job(cmd, "cyclic(2)", "O_G", 4);
        std::string a = run_job(s).to_json(false).dump(), b = run_job(s).to_json(false).dump();
        EXPECT_EQ(a, b) << cmd;
    }
}

TEST(Binary, ExitCodesAndAtomicOutput) {
    auto spec = scratch("bad.json");
    std::ofstream(spec) << R"({"command": "verify-forms", "group": {"table": [[0, 1], [1, 1]]}, "algebra": "scalars"})";
    std::string out;
    EXPECT_EQ(run_binary("--spec " + spec.string(), &out), 2);
    EXPECT_NE(out.find("NoInverse"), std::string::npos);
    EXPECT_EQ(run_binary("--level 3"), 2);
    EXPECT_EQ(run_binary("verify-forms --format xml"), 2);
    auto report = scratch("report.csv");
    std::filesystem::remove(report);
    EXPECT_EQ(run_binary("verify-forms --group 'cyclic(2)' --algebra scalars --level 4 --format csv --output " + report.string()), 0);
    std::ifstream in(report);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "kind,name,anchor,scope,status,value");
    EXPECT_FALSE(std::filesystem::exists(report.string() + ".tmp"));
    EXPECT_EQ(run_binary("--list-builtins", &out), 0);
    EXPECT_NE(out.find("crossed(A[, measure])"), std::string::npos);
}
