#pragma once
#include "wittforge/mixed.hpp"
#include "wittforge/signatures.hpp"

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace wf {

// rational coefficients on 1, i, j, k
using QuatLit = std::array<Rational, 4>;
std::string to_string(const QuatLit& q);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Form, Pfister, Algebra, Herm, Ident, Binary, Neg, Call, Crossed };
    Kind kind = Kind::Number;
    Rational number;
    std::vector<Rational> entries;     // Form, Pfister; Algebra uses the first two
    std::vector<QuatLit> herm;         // Herm entries
    ExprPtr ambient;                   // Herm: an Algebra or an Ident bound to one
    bool inner = false;                // Herm: inner(z) instead of gamma
    QuatLit inner_u{};
    int eps = 0;                       // Herm: 0 means read off the entries
    std::string name;                  // Ident, Call, Crossed involution tag
    char op = 0;                       // Binary
    std::vector<ExprPtr> args;
    QuatLit mu{};                      // Crossed
    int line = 1, col = 1;
};

bool expr_equal(const Expr& a, const Expr& b);
std::string format_expr(const Expr& e);

struct Statement {
    std::string let;  // empty for a bare expression
    ExprPtr expr;     // null for blank or comment lines
};

ExprPtr parse(const std::string& input, int line = 1);
Statement parse_statement(const std::string& input, int line = 1);

struct ResultDoc {
    enum class Kind { Form, Mixed, Invariants, Bool, Integer, BrauerClass, SignaturePair, Number };
    Kind kind = Kind::Number;
    QuadraticForm form;
    MixedGWElement mixed;
    WittInvariants inv;
    long virtual_dim = 0;
    Verdict verdict = Verdict::Equal;
    long integer = 0;
    BrauerClass brauer;
    SignaturePair signature;
    Rational number;
    std::vector<std::string> trace;
};

enum class OutputMode { Text, Json };
std::string format(const ResultDoc& r, OutputMode mode, bool with_trace = false);

class Evaluator {
public:
    ResultDoc evaluate(const Expr& e);
    // evaluates a statement, binding it when it is a let; nullopt for blank lines
    std::optional<ResultDoc> run(const Statement& s);

    struct Value;
private:
    std::map<std::string, std::shared_ptr<Value>> env_;
};


}
