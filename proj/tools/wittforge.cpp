#include "wittforge/cli.hpp"
#include "wittforge/error.hpp"
#include "wittforge/selftest.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace wf;

namespace {

struct Options {
    bool json = false;
    bool trace = false;
};

void print_error(const Error& e, int line) {
    const char* kind = "error";
    switch (e.kind()) {
    case ErrorKind::Syntax: kind = "syntax error"; break;
    case ErrorKind::Grading: kind = "grading error"; break;
    case ErrorKind::Domain: kind = "domain error"; break;
    case ErrorKind::Unsupported: kind = "unsupported"; break;
    case ErrorKind::Internal: kind = "internal error"; break;
    }
    std::cerr << kind;
    if (line > 0 && std::string(e.what()).rfind("line ", 0) != 0) std::cerr << " (line " << line << ")";
    std::cerr << ": " << e.what() << "\n";
}

// returns the exit code of the first failing statement, or 0
int eval_stream(std::istream& in, const Options& opt, bool interactive) {
    Evaluator ev;
    std::string text;
    int line = 0;
    int status = 0;
    if (interactive) std::cout << "> " << std::flush;
    while (std::getline(in, text)) {
        ++line;
        try {
            Statement st = parse_statement(text, line);
            if (auto r = ev.run(st)) {
                std::string out = format(*r, opt.json ? OutputMode::Json : OutputMode::Text, opt.trace);
                if (!st.let.empty() && !opt.json) out = st.let + " = " + out;
                std::cout << out << "\n";
            }
        } catch (const Error& e) {
            print_error(e, line);
            if (!interactive) return exit_code(e.kind());
            status = exit_code(e.kind());
        } catch (const std::exception& e) {
            std::cerr << "internal error (line " << line << "): " << e.what() << "\n";
            if (!interactive) return 3;
        }
        if (interactive) std::cout << "> " << std::flush;
    }
    if (interactive) std::cout << "\n";
    return interactive ? 0 : status;
}

}

int main(int argc, char** argv) {
    CLI::App app{"wittforge: mixed Witt rings of quaternion algebras with involution"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json", opt.json, "print results as JSON");
    app.add_flag("--trace", opt.trace, "print the evaluation trace");

    auto* eval = app.add_subcommand("eval", "evaluate a file of statements, one per line ('-' for stdin)");
    std::string file;
    std::string expr;
    eval->add_option("file", file, "input file");
    eval->add_option("-e,--expr", expr, "evaluate a single statement");

    app.add_subcommand("repl", "interactive evaluation");

    auto* st = app.add_subcommand("selftest", "run the property suites");
    TestConfig cfg;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> suites;
    std::optional<long> one_case;
    bool serial = false, list = false, no_shrink = false;
    st->add_option("--seed", seed, "random seed");
    st->add_option("--cases", cfg.cases, "cases per suite (default: each suite's own count)");
    st->add_option("--suite", suites, "suite to run (repeatable; default all)");
    st->add_option("--case", one_case, "run a single case index (replay)");
    st->add_option("--bound", cfg.coefficient_bound, "coefficient bound");
    st->add_option("--pool", cfg.algebra_pool_size, "algebra pool size");
    st->add_flag("--serial", serial, "run cases on one thread");
    st->add_flag("--no-shrink", no_shrink, "report counterexamples without shrinking");
    st->add_flag("--list", list, "list the registered suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("eval")) {
            if (!expr.empty()) {
                std::istringstream in(expr);
                return eval_stream(in, opt, false);
            }
            if (file.empty() || file == "-") return eval_stream(std::cin, opt, false);
            std::ifstream in(file);
            if (!in) {
                std::cerr << "cannot open " << file << "\n";
                return 2;
            }
            return eval_stream(in, opt, false);
        }
        if (app.got_subcommand("repl")) return eval_stream(std::cin, opt, true);

        if (list) {
            for (auto& n : suite_names()) std::cout << n << " (" << suite_default_cases(n) << " cases)\n";
            return 0;
        }
        if (const char* env = std::getenv("WITTFORGE_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
        if (seed) cfg.seed = *seed;
        cfg.parallel = !serial;
        cfg.shrink = !no_shrink;
        if (suites.empty()) suites = suite_names();
        std::vector<SuiteReport> reports;
        for (auto& n : suites) {
            reports.push_back(one_case ? run_case(n, cfg, *one_case) : run_suite(n, cfg));
            if (!opt.json) std::cout << report_text(reports.back()) << std::endl;
        }
        if (opt.json) std::cout << report_json(reports, cfg) << "\n";
        for (auto& r : reports)
            if (!r.ok()) return 3;
        return 0;
    } catch (const Error& e) {
        print_error(e, 0);
        return exit_code(e.kind());
    }
}
