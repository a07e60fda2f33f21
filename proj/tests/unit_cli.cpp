#include "doctest.h"
#include "wittforge/cli.hpp"
#include "wittforge/error.hpp"
#include "wittforge/selftest.hpp"

#include <random>

using namespace wf;

namespace {

struct ExprGen {
    std::mt19937_64 g;
    explicit ExprGen(std::uint64_t seed) : g(seed) {}

    long small(long b) { return (long)(g() % (std::uint64_t)(2 * b + 1)) - b; }
    Rational rat() {
        long d = 1 + (long)(g() % 3);
        Rational r(small(6), d);
        r.canonicalize();
        return r;
    }
    Rational nz() {
        for (;;) {
            Rational r = rat();
            if (r != 0) return r;
        }
    }
    QuatLit quat() { return {rat(), rat(), rat(), rat()}; }

    ExprPtr leaf() {
        auto e = std::make_shared<Expr>();
        switch (g() % 6) {
        case 0:
            e->kind = Expr::Kind::Number;
            e->number = rat();
            break;
        case 1:
            e->kind = Expr::Kind::Form;
            for (int i = 0, n = 1 + (int)(g() % 3); i < n; ++i) e->entries.push_back(nz());
            break;
        case 2:
            e->kind = Expr::Kind::Pfister;
            for (int i = 0, n = 1 + (int)(g() % 2); i < n; ++i) e->entries.push_back(nz());
            break;
        case 3: {
            e->kind = Expr::Kind::Herm;
            for (int i = 0, n = 1 + (int)(g() % 2); i < n; ++i) e->herm.push_back(quat());
            auto a = std::make_shared<Expr>();
            if (g() % 2) {
                a->kind = Expr::Kind::Algebra;
                a->entries = {nz(), nz()};
            } else {
                a->kind = Expr::Kind::Ident;
                a->name = "A";
            }
            e->ambient = a;
            e->inner = g() % 2;
            if (e->inner) e->inner_u = quat();
            e->eps = (int)(g() % 3) - 1;
            break;
        }
        case 4:
            e->kind = Expr::Kind::Ident;
            e->name = g() % 2 ? "x" : "y2";
            break;
        default:
            e->kind = Expr::Kind::Crossed;
            e->entries = {nz(), nz()};
            e->name = g() % 2 ? "id" : "conj";
            e->mu = {rat(), rat(), 0, 0};
            break;
        }
        return e;
    }

    ExprPtr expr(int depth) {
        if (depth == 0) return leaf();
        auto e = std::make_shared<Expr>();
        switch (g() % 4) {
        case 0:
        case 1:
            e->kind = Expr::Kind::Binary;
            e->op = "+-*"[g() % 3];
            e->args = {expr(depth - 1), expr(depth - 1)};
            break;
        case 2:
            e->kind = Expr::Kind::Neg;
            e->args = {expr(depth - 1)};
            if (e->args[0]->kind == Expr::Kind::Number) return leaf();
            break;
        default: {
            static const std::vector<std::pair<std::string, int>> fns = {
                {"det", 1}, {"inv", 1}, {"e2", 1}, {"sign", 1}, {"rdim", 1}, {"cup", 2}, {"eq", 2}};
            e->kind = Expr::Kind::Call;
            if (g() % 4 == 0) {
                e->name = "lambda";
                auto k = std::make_shared<Expr>();
                k->number = Rational((long)(g() % 4));
                e->args = {k, expr(depth - 1)};
            } else {
                auto& f = fns[g() % fns.size()];
                e->name = f.first;
                for (int i = 0; i < f.second; ++i) e->args.push_back(expr(depth - 1));
            }
        }
        }
        return e;
    }
};

std::string run_one(const std::string& src, OutputMode mode = OutputMode::Json) {
    Evaluator ev;
    return format(ev.evaluate(*parse(src)), mode);
}

ErrorKind error_kind(const std::string& src) {
    try {
        Evaluator ev;
        ev.evaluate(*parse(src));
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error for " << src);
    return ErrorKind::Internal;
}

}

TEST_CASE("cli: print then parse is the identity on generated expressions") {
    ExprGen gen(7);
    for (int n = 0; n < 100; ++n) {
        ExprPtr e = gen.expr(1 + n % 4);
        std::string text = format_expr(*e);
        ExprPtr back = parse(text);
        CHECK_MESSAGE(expr_equal(*e, *back), text << " reparsed as " << format_expr(*back));
    }
}

TEST_CASE("cli: parse shapes") {
    auto p = parse("h<1> @ (Q(-1,-1), gamma) * h<1> @ (Q(-1,-1), gamma)");
    CHECK(p->kind == Expr::Kind::Binary);
    CHECK(p->op == '*');
    auto l = parse("lambda(2, pfis(2,3))");
    CHECK(l->kind == Expr::Kind::Call);
    CHECK(l->name == "lambda");
    CHECK(l->args[1]->kind == Expr::Kind::Pfister);
    // * binds tighter than +, and both associate to the left
    auto s = parse("<1> + <2> * <3> - <4>");
    CHECK(s->op == '-');
    CHECK(s->args[0]->op == '+');
    CHECK(s->args[0]->args[1]->op == '*');
}

TEST_CASE("cli: syntax errors carry a position") {
    try {
        parse("<1,2", 4);
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Syntax);
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
        CHECK(std::string(e.what()).find("col") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("lambda(2)"), Error);
    CHECK_THROWS_AS(parse("h<1> @ (Q(-1,-1), delta)"), Error);
    CHECK_THROWS_AS(parse("<1> <2>"), Error);
}

TEST_CASE("cli: grading errors name both slots") {
    try {
        run_one("h<1>@(Q(-1,-1),gamma) + <1,2>");
        FAIL("accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Grading);
        std::string m = e.what();
        CHECK(m.find("even") != std::string::npos);
        CHECK(m.find("symp") != std::string::npos);
    }
    CHECK(exit_code(ErrorKind::Grading) == 1);
}

TEST_CASE("cli: documented evaluations") {
    CHECK(run_one("h<1> @ (Q(-1,-1), gamma) * h<1> @ (Q(-1,-1), gamma)", OutputMode::Text) == "<2,2,2,2>");
    CHECK(run_one("sign(h<1>@(Q(-1,-1),gamma))") == R"({"kind":"signature","plus":2,"minus":-2})");
    CHECK(run_one("eq(h<i>@(Q(-1,-1),gamma) * h<j>@(Q(-1,-1),gamma), 0)", OutputMode::Text) == "true");
    CHECK(run_one("<2,-2>") == R"({"kind":"form","entries":["2","-2"]})");
    CHECK(run_one("Q(-1,-1)") == R"({"kind":"brauer","places":[2,"inf"]})");
    CHECK(run_one("<1/2>") == R"({"kind":"form","entries":["1/2"]})");
}

TEST_CASE("cli: trace records both product paths") {
    Evaluator ev;
    auto r = ev.evaluate(*parse("h<1> @ (Q(-1,-1), gamma) * h<1> @ (Q(-1,-1), gamma)"));
    bool closed = false;
    for (auto& t : r.trace)
        if (t.find("closed") != std::string::npos) closed = true;
    CHECK(closed);
}

TEST_CASE("cli: let bindings") {
    Evaluator ev;
    CHECK_FALSE(ev.run(parse_statement("# comment only")));
    auto r = ev.run(parse_statement("let H = Q(-1,-1)"));
    REQUIRE(r);
    CHECK(r->kind == ResultDoc::Kind::BrauerClass);
    ev.run(parse_statement("let x = h<1> @ (H, gamma)"));
    auto sq = ev.run(parse_statement("x * x"));
    REQUIRE(sq);
    CHECK(format(*sq, OutputMode::Text) == "<2,2,2,2>");
    CHECK_THROWS_AS(ev.run(parse_statement("undefined_name * x")), Error);
    CHECK_THROWS_AS(parse_statement("let lambda = <1>"), Error);
}

TEST_CASE("cli: domain errors") {
    CHECK(error_kind("<1,2> * 1/2") == ErrorKind::Domain);
    CHECK(exit_code(ErrorKind::Domain) == 2);
    CHECK(exit_code(ErrorKind::Internal) == 3);
}

TEST_CASE("selftest: unknown suites are rejected") {
    CHECK_THROWS_AS(run_suite("no_such_suite", TestConfig{}), Error);
    CHECK(suite_names().size() == 17);
}

TEST_CASE("selftest: reports are deterministic and independent of threading") {
    TestConfig cfg;
    cfg.cases = 20;
    for (const std::string name : {"associativity", "closed_form", "crossed", "hilbert"}) {
        cfg.parallel = true;
        auto a = run_suite(name, cfg);
        cfg.parallel = false;
        auto b = run_suite(name, cfg);
        CHECK(a.passed == b.passed);
        CHECK(a.failed == b.failed);
        CHECK(a.skipped == b.skipped);
        CHECK(a.battery == b.battery);
        CHECK(a.tags == b.tags);
        CHECK(a.skip_reasons == b.skip_reasons);
    }
}

TEST_CASE("selftest: a single case replays") {
    TestConfig cfg;
    auto r = run_case("closed_form", cfg, 5);
    CHECK(r.cases == 1);
    CHECK(r.failed == 0);
}
