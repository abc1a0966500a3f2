#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "paracyc/cli/job.hpp"

using namespace paracyc;
using namespace paracyc::cli;

int main(int argc, char** argv) {
    CLI::App app{"Exact verification suites and equivariant periodic cyclic homology at finite truncation"};
    std::string command, spec_path, group, algebra, measure, format = "json", output;
    int level = 0;
    bool list = false;
    app.add_option("command", command, "verify-forms | verify-cq | greenjulg | dual-greenjulg | hpg | hp");
    app.add_option("--spec", spec_path, "JSON job file {\"group\", \"algebra\", \"level\", \"measure\", \"command\"}");
    app.add_option("--group", group, "group descriptor, e.g. cyclic(2)");
    app.add_option("--algebra", algebra, "algebra descriptor, e.g. crossed(O_G) or a JSON object");
    app.add_option("--level", level, "maximal degree N (N >= 2)");
    app.add_option("--measure", measure, "counting | normalized");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--output", output, "report path, written atomically; stdout if absent");
    app.add_flag("--list-builtins", list, "list group and algebra descriptors");
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_invalid;
    }

    if (list) {
        for (auto& [name, what] : builtin_catalog()) std::cout << name << "  -  " << what << "\n";
        return exit_ok;
    }

    JobSpec job;
    RunReport early;
    try {
        if (!spec_path.empty()) job = read_job_file(spec_path);
        if (!command.empty()) job.command = command;
        if (!group.empty()) job.group = group.front() == '{' ? json::parse(group) : json(group);
        if (!algebra.empty()) job.algebra = algebra.front() == '{' ? json::parse(algebra) : json(algebra);
        if (level != 0) job.level = level;
        if (!measure.empty()) job.measure = measure;
    } catch (const InputError& e) {
        early.error_kind = e.kind();
        early.error_detail = e.what();
    } catch (const json::exception& e) {
        early.error_kind = "BadSpec";
        early.error_detail = e.what();
    }

    RunReport report;
    if (!early.error_kind.empty()) {
        report = std::move(early);
        report.job = job;
        report.exit_status = exit_invalid;
    } else {
        report = run_job(job);
    }
    if (report.exit_status == exit_invalid) std::cerr << "invalid input: " << report.error_detail << "\n";
    else if (!report.error_kind.empty()) std::cerr << "error: " << report.error_detail << "\n";

    std::string text = render(report, format);
    if (output.empty()) {
        std::cout << text;
    } else {
        try {
            write_atomically(output, text);
        } catch (const InputError& e) {
            std::cerr << e.what() << "\n";
            return exit_invalid;
        }
    }
    return report.exit_status;
}
