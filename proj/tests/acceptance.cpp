#include "wittforge/selftest.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

using namespace wf;

namespace {

// minimum passed cases per suite, and the wall-clock budget for the whole run
struct Need {
    const char* suite;
    long min_passed;
};

constexpr double budget_seconds = 300;
constexpr long min_algebras = 20;

struct Criterion {
    int number;
    const char* title;
    std::vector<Need> needs;
};

const std::vector<Criterion> criteria = {
    {1, "ring axioms", {{"associativity", 200}}},
    {2, "closed form vs Gram", {{"closed_form", 200}}},
    {3, "Goldman element", {{"goldman", 100}}},
    {4, "worked constants", {{"constants", 3}}},
    {5, "lambda identities", {{"zibrowius", 100}, {"duality", 30}, {"square", 30}}},
    {6, "symbols", {{"symbols", 100}}},
    {7, "signatures", {{"signatures", 200}, {"signature_reference", 20}}},
    {8, "crossed products", {{"crossed", 100}, {"gauge", 50}}},
    {9, "classical layer", {{"classical", 300}, {"hilbert", 500}}},
    {10, "filtration", {{"filtration", 60}, {"split_iso", 50}}},
    {11, "dimension functor", {{"rdim", 200}}},
};

// extra coverage demands, checked on the tags a suite reports
bool coverage(const SuiteReport& r, std::string& why) {
    if (r.name == "associativity") {
        std::set<std::string> algebras;
        bool orth = false, symp = false;
        for (auto& [tag, n] : r.tags) {
            auto sp = tag.rfind(' ');
            algebras.insert(tag.substr(0, sp));
            orth |= tag.ends_with("orthogonal");
            symp |= tag.ends_with("symplectic");
        }
        if ((long)algebras.size() < min_algebras) why = std::to_string(algebras.size()) + " algebras";
        else if (!orth || !symp) why = "one involution kind missing";
        return why.empty();
    }
    if (r.name == "closed_form") {
        for (const char* k : {"scalar", "pure", "anti-commuting"})
            if (!r.tags.count(k)) why = std::string("no ") + k + " cases";
        return why.empty();
    }
    if (r.name == "symbols") {
        if (!r.tags.count("orthogonal slot") || !r.tags.count("symplectic slot")) why = "one type slot missing";
        return why.empty();
    }
    if (r.name == "filtration") {
        for (const char* k : {"n=1", "n=2", "n=3"})
            if (!r.tags.count(k)) why = std::string("no ") + k + " cases";
        return why.empty();
    }
    return true;
}

}

int main() {
    TestConfig cfg;
    auto t0 = std::chrono::steady_clock::now();
    int failed = 0;
    long battery_total = 0;
    for (auto& c : criteria) {
        bool ok = true;
        std::ostringstream detail;
        for (std::size_t i = 0; i < c.needs.size(); ++i) {
            auto& need = c.needs[i];
            SuiteReport r = run_suite(need.suite, cfg);
            std::string why;
            bool good = r.failed == 0 && r.passed >= need.min_passed && coverage(r, why);
            ok = ok && good;
            battery_total += r.battery;
            detail << (i ? "; " : "") << need.suite << " " << r.passed << "/" << r.cases << " passed (need "
                   << need.min_passed << ")";
            if (r.battery) detail << ", " << r.battery << " by battery";
            if (r.skipped) detail << ", " << r.skipped << " skipped";
            if (r.failed) detail << ", " << r.failed << " FAILED, replay: " << r.first->replay;
            if (!why.empty()) detail << ", coverage short: " << why;
        }
        if (!ok) ++failed;
        std::printf("%s criterion %d %s: %s\n", ok ? "PASS" : "FAIL", c.number, c.title, detail.str().c_str());
        std::fflush(stdout);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("seed %llu, %.1f s (budget %.0f s)\n", (unsigned long long)cfg.seed, secs, budget_seconds);
    if (battery_total)
        std::printf("%ld equalities certified by the skew-hermitian invariant battery, whose completeness over Q is "
                    "assumed, not proved\n",
                    battery_total);
    if (secs > budget_seconds) {
        std::printf("over the time budget\n");
        ++failed;
    }
    return failed ? 1 : 0;
}
