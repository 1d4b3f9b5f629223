// Command-line front end: runs verification suites, writes reports, and
// exposes the two derivations.

#include "CLI11.hpp"
#include "wdvv/fixtures.hpp"
#include "wdvv/lie.hpp"
#include "wdvv/solutions.hpp"
#include "wdvv/suites.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

using namespace wdvv;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int print_summary(const Report& r) {
    for (const auto& c : r.checks)
        if (c.status != Status::Pass) std::cout << status_name(c.status) << "  " << c.id << "  " << c.detail << "\n";
    std::cout << r.suite << ":";
    for (const auto& [k, n] : r.counts()) std::cout << " " << k << " " << n;
    std::cout << "  fixtures " << r.fixtures_hash << "\n";
    return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic and numeric verification of the associativity equations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    RunOptions opt;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--fixtures", opt.fixtures_dir, "Fixture directory (default: $WDVV_FIXTURES or built-in)");
        sub->add_option("--seed", opt.seed, "Sampling seed");
        sub->add_option("--digits", opt.digits, "Decimal digits for numeric checks")->check(CLI::Range(30L, 2000L));
        sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::Range(1, 256));
        sub->add_option("--filter", opt.filter, "Only table rows / check ids containing this");
    };

    std::string suite = "all", json_path = "wdvv_report.json", md_path;
    CLI::App* verify = app.add_subcommand("verify", "Run a suite and write the report");
    verify->add_option("suite", suite, "Suite")->check(CLI::IsMember(suite_names()));
    verify->add_option("--json", json_path, "JSON report path ('-' for none)");
    verify->add_option("--md", md_path, "Markdown report path");
    common(verify);

    std::string format = "json";
    CLI::App* report = app.add_subcommand("report", "Run a suite and print the report");
    report->add_option("--format", format, "json or md")->check(CLI::IsMember({"json", "md"}));
    report->add_option("--suite", suite, "Suite")->check(CLI::IsMember(suite_names()));
    common(report);

    CLI::App* derive = app.add_subcommand("derive", "Derivations");
    derive->require_subcommand(1);
    int degree = 3;
    CLI::App* determining = derive->add_subcommand("determining", "Solve the determining system");
    determining->add_option("--degree", degree, "Total degree of the polynomial ansatz")->check(CLI::Range(0, 6));
    std::string f1_out;
    CLI::App* f1 = derive->add_subcommand("f1-polys", "Derive P4 and P8 and print them as fixture records");
    f1->add_option("--out", f1_out, "Also write the records to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify || *report) {
            const Report r = run_suite(suite, opt);
            if (*report) {
                std::cout << (format == "json" ? r.json() : r.markdown());
                return r.ok() ? 0 : 1;
            }
            if (json_path != "-") write_file(json_path, r.json());
            if (!md_path.empty()) write_file(md_path, r.markdown());
            return print_summary(r);
        }
        if (*determining) {
            const auto t0 = std::chrono::steady_clock::now();
            const DeterminingResult r = solve_determining(degree);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::cout << "degree " << degree << ": " << r.unknowns << " unknowns, " << r.equations << " equations\n";
            std::cout << "solution space dimension " << r.solutions.size() << "\n";
            for (std::size_t i = 0; i < r.solutions.size(); ++i) std::cout << "  s" << i + 1 << " = " << r.solutions[i].str() << "\n";
            std::cout << "span equals reference generators:";
            for (auto k : r.reference_indices) std::cout << " v" << k + 1;
            std::cout << (r.span_equal ? "  yes" : "  no") << "\n";
            std::cout << "time " << secs << " s\n";
            return r.span_equal ? 0 : 1;
        }
        if (*f1) {
            const std::string text = serialize_fixtures(f1_polynomial_records(derive_f1_polynomials()));
            std::cout << text;
            if (!f1_out.empty()) write_file(f1_out, text);
            return 0;
        }
    } catch (const FixtureError& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
