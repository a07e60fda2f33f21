#pragma once
#include "wittforge/mixed.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace wf {

struct TestConfig {
    std::uint64_t seed = 20240611;
    long cases = 0;  // 0: each suite's default count
    std::map<std::string, long> per_suite;
    int coefficient_bound = 5;
    int algebra_pool_size = 20;
    bool parallel = true;
    bool shrink = true;
};

// every random choice of a case goes through a Source, so a case can be recorded and replayed
struct CaseTape {
    std::vector<Rational> values;
    std::vector<long> picks;
};

class Source {
public:
    virtual ~Source() = default;
    virtual Rational rat(int bound, bool nonzero) = 0;
    virtual long pick(long n) = 0;
    // a value computed outside the tape (pool entries); recorded so that shrinking can touch it
    virtual Rational keep(const Rational& r) = 0;
};

class GenSource : public Source {
public:
    explicit GenSource(std::uint64_t seed) : rng_(seed) {}
    Rational rat(int bound, bool nonzero) override;
    long pick(long n) override;
    Rational keep(const Rational& r) override;
    const CaseTape& tape() const { return tape_; }
private:
    std::mt19937_64 rng_;
    CaseTape tape_;
};

class ReplaySource : public Source {
public:
    explicit ReplaySource(const CaseTape& t) : tape_(t) {}
    Rational rat(int, bool) override;
    long pick(long n) override;
    Rational keep(const Rational&) override;
private:
    const CaseTape& tape_;
    std::size_t vi_ = 0, pi_ = 0;
};

std::vector<QuaternionAlgebra> algebra_pool(std::uint64_t seed, int size);

// generators
QuaternionAlgebra gen_algebra(Source& s, const std::vector<QuaternionAlgebra>& pool);
AlgebraWithInvolution gen_ambient(Source& s, const std::vector<QuaternionAlgebra>& pool, bool allow_base);
Quat gen_entry(Source& s, const AlgebraWithInvolution& A, int eps, int bound = 3);
HermForm gen_herm(Source& s, const AlgebraWithInvolution& A, int eps, int rank);
MixedGWElement gen_homogeneous(Source& s, const AlgebraWithInvolution& A, int bound);

// CLI text for an element, when the grammar can express it
std::optional<std::string> cli_literal(const MixedGWElement& x);
std::string cli_ambient(const AlgebraWithInvolution& A);

struct Counterexample {
    long index = 0;
    std::string replay;  // command line that reruns the case
    std::string expr;    // CLI expression that evaluates to false, when expressible
    std::string detail;
    int shrink_steps = 0;
};

struct SuiteReport {
    std::string name;
    long cases = 0, passed = 0, failed = 0, skipped = 0;
    long battery = 0;  // passes certified only by the invariant battery
    std::optional<Counterexample> first;
    std::vector<std::string> skip_reasons;
    std::map<std::string, long> tags;  // coverage labels of the cases that ran
    double seconds = 0;
    bool ok() const { return failed == 0; }
};

std::vector<std::string> suite_names();
long suite_default_cases(const std::string& name);
SuiteReport run_suite(const std::string& name, const TestConfig& cfg);
// a single case, as named in a replay line
SuiteReport run_case(const std::string& name, const TestConfig& cfg, long index);
std::string report_json(const std::vector<SuiteReport>& reports, const TestConfig& cfg);
std::string report_text(const SuiteReport& r);

}
