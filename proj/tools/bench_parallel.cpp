#include "wittforge/selftest.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>

using namespace wf;

namespace {

double timed(const std::string& suite, TestConfig cfg, bool parallel, SuiteReport& out) {
    cfg.parallel = parallel;
    auto t0 = std::chrono::steady_clock::now();
    out = run_suite(suite, cfg);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const SuiteReport& a, const SuiteReport& b) {
    return a.cases == b.cases && a.passed == b.passed && a.failed == b.failed && a.skipped == b.skipped &&
           a.battery == b.battery && a.tags == b.tags && a.skip_reasons == b.skip_reasons;
}

}

int main(int argc, char** argv) {
    CLI::App app{"time the selftest case loop on one thread and on all threads"};
    TestConfig cfg;
    std::vector<std::string> suites;
    int repeat = 3;
    app.add_option("--seed", cfg.seed);
    app.add_option("--cases", cfg.cases, "cases per suite (default: each suite's own count)");
    app.add_option("--suite", suites, "suites to time (default all)");
    app.add_option("--repeat", repeat, "runs per mode; the best time is kept");
    CLI11_PARSE(app, argc, argv);
    if (suites.empty()) suites = suite_names();
    cfg.shrink = false;

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-20s %10s %10s %8s  %s\n", "suite", "serial s", "parallel s", "speedup", "reports");
    double ts = 0, tp = 0;
    bool all_same = true;
    for (auto& s : suites) {
        double bs = 1e300, bp = 1e300;
        SuiteReport rs, rp;
        for (int k = 0; k < repeat; ++k) {
            bs = std::min(bs, timed(s, cfg, false, rs));
            bp = std::min(bp, timed(s, cfg, true, rp));
        }
        bool eq = same(rs, rp);
        all_same = all_same && eq;
        ts += bs;
        tp += bp;
        std::printf("%-20s %10.3f %10.3f %8.2f  %s\n", s.c_str(), bs, bp, bs / bp, eq ? "equal" : "DIFFER");
    }
    std::printf("%-20s %10.3f %10.3f %8.2f\n", "total", ts, tp, ts / tp);
    return all_same ? 0 : 1;
}
