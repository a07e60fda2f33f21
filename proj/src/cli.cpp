#include "wittforge/cli.hpp"
#include "wittforge/cohomology.hpp"
#include "wittforge/crossed.hpp"
#include "wittforge/error.hpp"
#include "wittforge/lambda.hpp"

#include "json.hpp"

#include <cctype>
#include <sstream>

namespace wf {

std::string to_string(const QuatLit& q) {
    static const char* units[4] = {"", "i", "j", "k"};
    std::string out;
    for (int s = 0; s < 4; ++s) {
        const Rational& c = q[s];
        if (c == 0) continue;
        Rational a = abs(c);
        std::string term = (s > 0 && a == 1) ? units[s] : to_string(a) + units[s];
        if (c < 0) out += "-";
        else if (!out.empty()) out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

namespace {

// ---- lexer

struct Token {
    enum Type { Num, Ident, Sym, End } type = End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(const std::string& s, int line) : s_(s), line_(line) {}
    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) advance();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= s_.size() || s_[pos_] == '#') {
                out.push_back(t);
                return out;
            }
            char c = s_[pos_];
            if (std::isdigit((unsigned char)c)) {
                t.type = Token::Num;
                while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) t.text += advance();
                if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit((unsigned char)s_[pos_ + 1])) {
                    t.text += advance();
                    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) t.text += advance();
                }
            } else if (std::isalpha((unsigned char)c) || c == '_') {
                t.type = Token::Ident;
                while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) t.text += advance();
            } else if (std::string("<>,()+-*=@").find(c) != std::string::npos) {
                t.type = Token::Sym;
                t.text = advance();
            } else {
                syntax_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                             ": unexpected character '" + std::string(1, c) + "'");
            }
            out.push_back(t);
        }
    }

private:
    char advance() {
        char c = s_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_, col_ = 1;
};

// ---- parser

const std::map<std::string, int> kFunctions = {{"lambda", 2}, {"det", 1},  {"inv", 1},  {"e2", 1},
                                               {"sign", 1},   {"cup", 2},  {"rdim", 1}, {"eq", 2}};

class Parser {
public:
    Parser(const std::string& s, int line) : toks_(Lexer(s, line).run()) {}

    Statement statement() {
        Statement st;
        if (peek().type == Token::End) return st;
        if (peek().type == Token::Ident && peek().text == "let") {
            next();
            Token id = expect_ident();
            if (is_reserved(id.text)) fail(id, "cannot bind reserved name '" + id.text + "'");
            st.let = id.text;
            expect_sym("=");
        }
        st.expr = expr();
        if (peek().type != Token::End) fail(peek(), "unexpected '" + peek().text + "' after expression");
        return st;
    }

private:
    static bool is_reserved(const std::string& s) {
        return kFunctions.count(s) || s == "let" || s == "h" || s == "Q" || s == "pfis" || s == "gamma" ||
               s == "inner" || s == "crossed" || s == "eps" || s == "i" || s == "j" || s == "k";
    }

    const Token& peek(int ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at_sym(const char* s) const { return peek().type == Token::Sym && peek().text == s; }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        syntax_error("line " + std::to_string(t.line) + ", col " + std::to_string(t.col) + ": " + msg);
    }
    std::string describe(const Token& t) const { return t.type == Token::End ? "end of input" : "'" + t.text + "'"; }
    void expect_sym(const char* s) {
        if (!at_sym(s)) fail(peek(), std::string("expected '") + s + "', found " + describe(peek()));
        next();
    }
    Token expect_ident() {
        if (peek().type != Token::Ident) fail(peek(), "expected a name, found " + describe(peek()));
        return next();
    }

    std::shared_ptr<Expr> node(Expr::Kind k, const Token& at) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->line = at.line;
        e->col = at.col;
        return e;
    }

    Rational signed_rational() {
        int s = 1;
        if (at_sym("-")) {
            next();
            s = -1;
        } else if (at_sym("+")) {
            next();
        }
        if (peek().type != Token::Num) fail(peek(), "expected a rational number, found " + describe(peek()));
        return s * parse_rational(next().text);
    }

    std::vector<Rational> rational_list(const char* close) {
        std::vector<Rational> out;
        if (at_sym(close)) return out;
        out.push_back(signed_rational());
        while (at_sym(",")) {
            next();
            out.push_back(signed_rational());
        }
        return out;
    }

    static int unit_index(const std::string& s) { return s == "i" ? 1 : s == "j" ? 2 : s == "k" ? 3 : -1; }

    QuatLit entry() {
        QuatLit q{};
        bool first = true;
        for (;;) {
            int s = 1;
            if (at_sym("-")) {
                next();
                s = -1;
            } else if (at_sym("+")) {
                next();
            } else if (!first) {
                break;
            }
            Rational c = 1;
            bool have = false;
            if (peek().type == Token::Num) {
                c = parse_rational(next().text);
                have = true;
                if (at_sym("*")) {
                    next();
                    if (peek().type != Token::Ident || unit_index(peek().text) < 0)
                        fail(peek(), "expected i, j or k after '*'");
                }
            }
            int unit = 0;
            if (peek().type == Token::Ident && unit_index(peek().text) >= 0) {
                unit = unit_index(next().text);
                have = true;
            }
            if (!have) fail(peek(), "expected a quaternion entry, found " + describe(peek()));
            q[unit] += s * c;
            first = false;
        }
        return q;
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (at_sym("+") || at_sym("-")) {
            Token op = next();
            auto b = node(Expr::Kind::Binary, op);
            b->op = op.text[0];
            b->args = {lhs, term()};
            lhs = b;
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (at_sym("*")) {
            Token op = next();
            auto b = node(Expr::Kind::Binary, op);
            b->op = '*';
            b->args = {lhs, factor()};
            lhs = b;
        }
        return lhs;
    }

    ExprPtr factor() {
        if (at_sym("-")) {
            Token t = next();
            if (peek().type == Token::Num) {
                auto n = node(Expr::Kind::Number, t);
                n->number = -parse_rational(next().text);
                return n;
            }
            auto n = node(Expr::Kind::Neg, t);
            n->args = {factor()};
            return n;
        }
        return primary();
    }

    ExprPtr ambient() {
        Token t = peek();
        if (t.type == Token::Ident && t.text == "Q" && peek(1).type == Token::Sym && peek(1).text == "(") return algebra();
        Token id = expect_ident();
        if (is_reserved(id.text)) fail(id, "expected an algebra, found '" + id.text + "'");
        auto n = node(Expr::Kind::Ident, id);
        n->name = id.text;
        return n;
    }

    ExprPtr algebra() {
        Token t = next();
        auto n = node(Expr::Kind::Algebra, t);
        expect_sym("(");
        n->entries.push_back(signed_rational());
        expect_sym(",");
        n->entries.push_back(signed_rational());
        expect_sym(")");
        return n;
    }

    ExprPtr herm(const Token& t) {
        auto n = node(Expr::Kind::Herm, t);
        expect_sym("<");
        if (!at_sym(">")) {
            n->herm.push_back(entry());
            while (at_sym(",")) {
                next();
                n->herm.push_back(entry());
            }
        }
        expect_sym(">");
        expect_sym("@");
        expect_sym("(");
        n->ambient = ambient();
        expect_sym(",");
        Token tag = expect_ident();
        if (tag.text == "gamma") {
            n->inner = false;
        } else if (tag.text == "inner") {
            n->inner = true;
            expect_sym("(");
            n->inner_u = entry();
            expect_sym(")");
        } else {
            fail(tag, "expected an involution (gamma or inner(z)), found '" + tag.text + "'");
        }
        if (at_sym(",")) {
            next();
            Token e = expect_ident();
            if (e.text != "eps") fail(e, "expected eps=1 or eps=-1");
            expect_sym("=");
            Token at = peek();
            Rational v = signed_rational();
            if (v != 1 && v != -1) fail(at, "eps must be 1 or -1");
            n->eps = v == 1 ? 1 : -1;
        }
        expect_sym(")");
        return n;
    }

    ExprPtr crossed(const Token& t) {
        auto n = node(Expr::Kind::Crossed, t);
        expect_sym("(");
        n->entries.push_back(signed_rational());
        expect_sym(",");
        n->entries.push_back(signed_rational());
        expect_sym(",");
        Token tag = expect_ident();
        if (tag.text != "id" && tag.text != "conj") fail(tag, "crossed involution must be id or conj");
        n->name = tag.text;
        expect_sym(",");
        Token at = peek();
        n->mu = entry();
        if (n->mu[2] != 0 || n->mu[3] != 0) fail(at, "mu must lie in L = Q(i)");
        expect_sym(")");
        return n;
    }

    ExprPtr primary() {
        Token t = peek();
        if (t.type == Token::Num) {
            next();
            auto n = node(Expr::Kind::Number, t);
            n->number = parse_rational(t.text);
            return n;
        }
        if (at_sym("<")) {
            next();
            auto n = node(Expr::Kind::Form, t);
            n->entries = rational_list(">");
            expect_sym(">");
            return n;
        }
        if (at_sym("(")) {
            next();
            ExprPtr e = expr();
            expect_sym(")");
            return e;
        }
        if (t.type != Token::Ident) fail(t, "unexpected " + describe(t));
        bool call = peek(1).type == Token::Sym && peek(1).text == "(";
        if (t.text == "h" && peek(1).type == Token::Sym && peek(1).text == "<") {
            next();
            return herm(t);
        }
        if (t.text == "Q" && call) return algebra();
        if (t.text == "pfis" && call) {
            next();
            auto n = node(Expr::Kind::Pfister, t);
            expect_sym("(");
            n->entries = rational_list(")");
            expect_sym(")");
            return n;
        }
        if (t.text == "crossed" && call) {
            next();
            return crossed(t);
        }
        if (auto it = kFunctions.find(t.text); it != kFunctions.end()) {
            next();
            auto n = node(Expr::Kind::Call, t);
            n->name = t.text;
            expect_sym("(");
            n->args.push_back(expr());
            while (at_sym(",")) {
                next();
                n->args.push_back(expr());
            }
            expect_sym(")");
            if ((int)n->args.size() != it->second)
                fail(t, t.text + " takes " + std::to_string(it->second) + " argument(s), got " +
                            std::to_string(n->args.size()));
            return n;
        }
        if (call) fail(t, "unknown function '" + t.text + "'");
        if (is_reserved(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        next();
        auto n = node(Expr::Kind::Ident, t);
        n->name = t.text;
        return n;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string join_rationals(const std::vector<Rational>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + to_string(v[i]);
    return out;
}

int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) return 3;
    return e.op == '*' ? 2 : 1;
}

}

ExprPtr parse(const std::string& input, int line) {
    Statement s = Parser(input, line).statement();
    if (!s.let.empty()) syntax_error("line " + std::to_string(line) + ": a let binding is not an expression");
    if (!s.expr) syntax_error("line " + std::to_string(line) + ", col 1: empty expression");
    return s.expr;
}

Statement parse_statement(const std::string& input, int line) { return Parser(input, line).statement(); }

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Expr::Kind::Number: return a.number == b.number;
    case Expr::Kind::Form:
    case Expr::Kind::Pfister:
    case Expr::Kind::Algebra: return a.entries == b.entries;
    case Expr::Kind::Herm:
        return a.herm == b.herm && a.inner == b.inner && (!a.inner || a.inner_u == b.inner_u) && a.eps == b.eps &&
               expr_equal(*a.ambient, *b.ambient);
    case Expr::Kind::Ident: return a.name == b.name;
    case Expr::Kind::Crossed: return a.entries == b.entries && a.name == b.name && a.mu == b.mu;
    case Expr::Kind::Binary:
    case Expr::Kind::Neg:
    case Expr::Kind::Call:
        if (a.op != b.op || a.name != b.name || a.args.size() != b.args.size()) return false;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!expr_equal(*a.args[i], *b.args[i])) return false;
        return true;
    }
    return false;
}

std::string format_expr(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Number: return to_string(e.number);
    case Expr::Kind::Form: return "<" + join_rationals(e.entries) + ">";
    case Expr::Kind::Pfister: return "pfis(" + join_rationals(e.entries) + ")";
    case Expr::Kind::Algebra: return "Q(" + join_rationals(e.entries) + ")";
    case Expr::Kind::Ident: return e.name;
    case Expr::Kind::Herm: {
        std::string out = "h<";
        for (std::size_t i = 0; i < e.herm.size(); ++i) out += (i ? "," : "") + to_string(e.herm[i]);
        out += "> @ (" + format_expr(*e.ambient) + ", ";
        out += e.inner ? "inner(" + to_string(e.inner_u) + ")" : "gamma";
        if (e.eps) out += e.eps == 1 ? ", eps=1" : ", eps=-1";
        return out + ")";
    }
    case Expr::Kind::Crossed:
        return "crossed(" + join_rationals(e.entries) + ", " + e.name + ", " + to_string(e.mu) + ")";
    case Expr::Kind::Neg: {
        const Expr& c = *e.args[0];
        bool wrap = c.kind == Expr::Kind::Number || c.kind == Expr::Kind::Binary;
        return "-" + (wrap ? "(" + format_expr(c) + ")" : format_expr(c));
    }
    case Expr::Kind::Call: {
        std::string out = e.name + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) out += (i ? ", " : "") + format_expr(*e.args[i]);
        return out + ")";
    }
    case Expr::Kind::Binary: {
        int p = precedence(e);
        const Expr& l = *e.args[0];
        const Expr& r = *e.args[1];
        std::string ls = format_expr(l), rs = format_expr(r);
        if (precedence(l) < p) ls = "(" + ls + ")";
        if (precedence(r) <= p) rs = "(" + rs + ")";
        return ls + " " + e.op + " " + rs;
    }
    }
    return "";
}

// ---- evaluation

struct Evaluator::Value {
    enum class Kind { Number, Algebra, Element, Bool, Integer, Brauer, Signature, Invariants };
    Kind kind = Kind::Number;
    Rational number;
    QuaternionAlgebra alg;
    MixedGWElement element;
    Verdict verdict = Verdict::Equal;
    long integer = 0;
    BrauerClass brauer;
    SignaturePair signature;
    WittInvariants inv;
    long virtual_dim = 0;
    std::optional<QuadraticForm> rep;  // an honest form in the class of an Even element, when known
};

namespace {

using Value = Evaluator::Value;
using VK = Value::Kind;

const char* kind_name(VK k) {
    switch (k) {
    case VK::Number: return "number";
    case VK::Algebra: return "algebra";
    case VK::Element: return "element";
    case VK::Bool: return "bool";
    case VK::Integer: return "integer";
    case VK::Brauer: return "Brauer class";
    case VK::Signature: return "signature pair";
    case VK::Invariants: return "invariants";
    }
    return "?";
}

Quat to_quat(const QuaternionAlgebra& Q, const QuatLit& q) { return Quat(Q, q[0], q[1], q[2], q[3]); }

Value element_value(MixedGWElement x) {
    Value v;
    v.kind = VK::Element;
    v.element = std::move(x);
    return v;
}

bool only_even(const MixedGWElement& x) { return x.c01 == 0 && x.orth.empty() && x.symp.empty(); }

MixedGWElement promote(const MixedGWElement& x, const AlgebraWithInvolution& A) {
    if (x.ambient == A) return x;
    if (!x.ambient.is_base() || !only_even(x))
        domain_error("operands live over different algebras: " + to_string(x.ambient) + " and " + to_string(A));
    MixedGWElement y = mixed_zero(A);
    y.c00 = x.c00;
    return y;
}

AlgebraWithInvolution common_ambient(const MixedGWElement& x, const MixedGWElement& y) {
    if (x.ambient == y.ambient) return x.ambient;
    if (x.ambient.is_base() && only_even(x)) return y.ambient;
    if (y.ambient.is_base() && only_even(y)) return x.ambient;
    domain_error("operands live over different algebras: " + to_string(x.ambient) + " and " + to_string(y.ambient));
}

long to_long_integer(const Rational& r, const std::string& what) {
    if (r.get_den() != 1 || !r.get_num().fits_slong_p()) domain_error(what + " must be an integer, got " + to_string(r));
    return r.get_num().get_si();
}

MixedGWElement as_element(const Value& v, const AlgebraWithInvolution& A, const std::string& op) {
    if (v.kind == VK::Element) return promote(v.element, A);
    if (v.kind == VK::Number) return mixed_scale(to_long_integer(v.number, op + ": a scalar operand"), mixed_one(A));
    grading_error(op + ": expected an element, got a " + std::string(kind_name(v.kind)));
}

std::optional<Slot> nonzero_slot(const MixedGWElement& x) {
    MixedGWElement z = mixed_zero(x.ambient);
    if (holds(mixed_equal(to_witt(x), to_witt(z))) && x.c00.virtual_dim == 0 && x.c01 == 0 && x.orth.rank == 0 &&
        x.symp.rank == 0)
        return std::nullopt;
    return x.slot();
}

// the single entry of a rank-one odd element, if it is one
std::optional<Quat> rank_one_entry(const MixedGWElement& x) {
    if (x.ambient.is_base() || !x.c00.witt.empty() || x.c00.virtual_dim != 0 || x.c01 != 0) return std::nullopt;
    const OddPart* p = nullptr;
    if (x.symp.empty() && x.orth.rank == 1 && x.orth.entries.size() == 1) p = &x.orth;
    if (x.orth.empty() && x.symp.rank == 1 && x.symp.entries.size() == 1) p = &x.symp;
    if (!p) return std::nullopt;
    return p->entries[0];
}

std::string odd_slot_name(const MixedGWElement& x) {
    auto s = x.slot();
    return s ? slot_name(*s) : "inhomogeneous";
}

}

namespace {

struct Eval {
    const std::map<std::string, std::shared_ptr<Value>>& env;
    std::vector<std::string>& trace;

    Value eval(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Number: {
            Value v;
            v.number = e.number;
            return v;
        }
        case Expr::Kind::Form: {
            if (e.entries.empty()) return element_value(mixed_zero(AlgebraWithInvolution::base()));
            for (auto& a : e.entries)
                if (a == 0) domain_error("form literal: entries must be nonzero");
            Value v = element_value(from_form(AlgebraWithInvolution::base(), QuadraticForm(e.entries)));
            v.rep = QuadraticForm(e.entries);
            return v;
        }
        case Expr::Kind::Pfister: {
            for (auto& a : e.entries)
                if (a == 0) domain_error("pfis: entries must be nonzero");
            Value v = element_value(from_form(AlgebraWithInvolution::base(), pfister(e.entries)));
            v.rep = pfister(e.entries);
            return v;
        }
        case Expr::Kind::Algebra: {
            Value v;
            v.kind = VK::Algebra;
            if (e.entries[0] == 0 || e.entries[1] == 0) domain_error("Q(a,b): a and b must be nonzero");
            v.alg = QuaternionAlgebra(e.entries[0], e.entries[1]);
            return v;
        }
        case Expr::Kind::Ident: {
            auto it = env.find(e.name);
            if (it == env.end())
                syntax_error("line " + std::to_string(e.line) + ", col " + std::to_string(e.col) +
                             ": unbound name '" + e.name + "'");
            return *it->second;
        }
        case Expr::Kind::Herm: return herm(e);
        case Expr::Kind::Crossed: return crossed(e);
        case Expr::Kind::Neg: {
            Value v = eval(*e.args[0]);
            if (v.kind == VK::Number) {
                v.number = -v.number;
                return v;
            }
            if (v.kind != VK::Element) grading_error("negation of a " + std::string(kind_name(v.kind)));
            return element_value(mixed_neg(v.element));
        }
        case Expr::Kind::Binary: return binary(e);
        case Expr::Kind::Call: return call(e);
        }
        internal_error("unknown expression kind");
    }

    Value herm(const Expr& e) {
        Value a = eval(*e.ambient);
        if (a.kind != VK::Algebra) grading_error("hermitian literal: expected an algebra, got a " + std::string(kind_name(a.kind)));
        const QuaternionAlgebra& Q = a.alg;
        InvolutionSpec inv = e.inner ? InvolutionSpec::inner(to_quat(Q, e.inner_u)) : InvolutionSpec::canonical();
        auto A = AlgebraWithInvolution::quaternion(Q, inv);
        std::vector<Quat> entries;
        for (auto& q : e.herm) entries.push_back(to_quat(Q, q));
        int eps = e.eps;
        if (eps == 0) {
            eps = 1;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                int s = symmetry_sign(A, entries[i]);
                if (s == 0) domain_error("hermitian literal: entry " + to_string(e.herm[i]) +
                                         " is neither symmetric nor skew-symmetric");
                if (i == 0) eps = s;
                else if (s != eps) domain_error("hermitian literal: entries mix symmetric and skew-symmetric elements");
            }
        }
        return element_value(from_herm(HermForm(A, eps, entries)));
    }

    Value crossed(const Expr& e) {
        CrossedData data{e.entries[0], e.entries[1], e.name == "id" ? LInvolution::Identity : LInvolution::Conjugation,
                         LElem{e.mu[0], e.mu[1]}};
        CrossedAlgebra C = build_crossed(data);
        auto q = trace_form_crossed(data, 0, {1, 0});
        auto amb = C.ambient();
        auto gram = trace_form_gram(amb, Quat(C.Q, 1), Quat(C.Q, 1));
        if (!witt_equal(q, gram)) internal_error("crossed: generator formula and Gram computation disagree");
        trace.push_back("crossed: algebra " + to_string(amb) + "; generator formula and Gram path agree");
        Value v = element_value(from_form(AlgebraWithInvolution::base(), q));
        v.rep = q;
        return v;
    }

    Value binary(const Expr& e) {
        Value l = eval(*e.args[0]), r = eval(*e.args[1]);
        std::string op(1, e.op);
        if (l.kind == VK::Number && r.kind == VK::Number) {
            Value v;
            if (e.op == '+') v.number = l.number + r.number;
            else if (e.op == '-') v.number = l.number - r.number;
            else v.number = l.number * r.number;
            return v;
        }
        if ((l.kind != VK::Element && l.kind != VK::Number) || (r.kind != VK::Element && r.kind != VK::Number))
            grading_error("operator " + op + " is not defined between a " + kind_name(l.kind) + " and a " +
                          kind_name(r.kind));
        AlgebraWithInvolution A = l.kind == VK::Element && r.kind == VK::Element ? common_ambient(l.element, r.element)
                                  : l.kind == VK::Element                       ? l.element.ambient
                                                                                : r.element.ambient;
        if (e.op == '*') {
            if (l.kind == VK::Number) return element_value(mixed_scale(to_long_integer(l.number, "scalar factor"), r.element));
            if (r.kind == VK::Number) return element_value(mixed_scale(to_long_integer(r.number, "scalar factor"), l.element));
            MixedGWElement x = promote(l.element, A), y = promote(r.element, A);
            Value v = element_value(mixed_mul(x, y));
            v.rep = check_product_paths(x, y, v.element);
            if (l.rep && r.rep) v.rep = qtensor(*l.rep, *r.rep);
            return v;
        }
        MixedGWElement x = as_element(l, A, op), y = as_element(r, A, op);
        auto sx = nonzero_slot(x), sy = nonzero_slot(y);
        if (sx && sy && *sx != *sy)
            grading_error(std::string(e.op == '+' ? "sum" : "difference") + " mixes slots: " + slot_name(*sx) +
                          " on the left, " + slot_name(*sy) + " on the right (sums stay within one slot)");
        Value v = element_value(e.op == '+' ? mixed_add(x, y) : mixed_sub(x, y));
        if (e.op == '+' && l.rep && r.rep) v.rep = qsum(*l.rep, *r.rep);
        return v;
    }

    // returns the Gram form of a product of two rank-one forms
    std::optional<QuadraticForm> check_product_paths(const MixedGWElement& x, const MixedGWElement& y,
                                                     const MixedGWElement& p) {
        auto a = rank_one_entry(x), b = rank_one_entry(y);
        if (!a || !b) return std::nullopt;
        const auto& A = x.ambient;
        int ea = symmetry_sign(A, *a), eb = symmetry_sign(A, *b);
        if (ea != eb) return std::nullopt;
        QuadraticForm gram = herm_product(HermForm(A, ea, {*a}), HermForm(A, eb, {*b}));
        if (!witt_equal(to_witt(p).c00, gram)) internal_error("product: ring product and Gram path disagree");
        if (A.inv.kind == InvolutionSpec::Kind::Canonical) {
            std::optional<QuadraticForm> closed;
            if (a->is_scalar() && b->is_scalar()) closed = quaternion_closed_form_scalar(A.algebra(), a->w, b->w);
            else if (a->is_pure() && b->is_pure()) closed = quaternion_closed_form_pure(*a, *b);
            if (closed) {
                if (!witt_equal(*closed, gram)) internal_error("product: closed form and Gram path disagree");
                trace.push_back("product: closed form " + to_string(*closed) + " and Gram path agree");
                return gram;
            }
        }
        trace.push_back("product: Gram path " + to_string(gram));
        return gram;
    }

    MixedGWElement element_arg(const Expr& e, const std::string& fn) {
        Value v = eval(e);
        if (v.kind != VK::Element) grading_error(fn + ": expected an element, got a " + std::string(kind_name(v.kind)));
        return v.element;
    }

    MixedGWElement even_arg(const Expr& e, const std::string& fn) {
        MixedGWElement x = element_arg(e, fn);
        if (!only_even(x)) grading_error(fn + ": expected an element of the Even slot, got " + odd_slot_name(x));
        return x;
    }

    Value call(const Expr& e) {
        const std::string& fn = e.name;
        if (fn == "lambda") {
            Value k = eval(*e.args[0]);
            if (k.kind != VK::Number) grading_error("lambda: the degree must be a number");
            long d = to_long_integer(k.number, "lambda degree");
            if (d < 0) domain_error("lambda: the degree must be nonnegative");
            return element_value(lambda_d(element_arg(*e.args[1], fn), (std::size_t)d));
        }
        if (fn == "det") return element_value(det(element_arg(*e.args[0], fn)));
        if (fn == "inv") {
            MixedGWElement x = even_arg(*e.args[0], fn);
            if (x.c00.virtual_dim < (long)x.c00.witt.dim())
                domain_error("inv: the virtual class has no honest representative");
            Value v;
            v.kind = VK::Invariants;
            v.inv = invariants(gw_representative(x.c00));
            v.virtual_dim = x.c00.virtual_dim;
            return v;
        }
        if (fn == "e2") {
            MixedGWElement x = even_arg(*e.args[0], fn);
            Value v;
            v.kind = VK::Brauer;
            v.brauer = wf::e2(x.c00.witt);
            return v;
        }
        if (fn == "sign") {
            MixedGWElement x = element_arg(*e.args[0], fn);
            Value v;
            v.kind = VK::Signature;
            v.signature = signature_pair(to_witt(x));
            trace.push_back("sign: reference " + to_string(v.signature.reference));
            return v;
        }
        if (fn == "rdim") {
            MixedGWElement x = element_arg(*e.args[0], fn);
            RdimReport r = rdim_maps(x);
            Value v;
            v.kind = VK::Integer;
            v.integer = r.total;
            trace.push_back("rdim: Even " + std::to_string(r.graded[0]) + ", EvenSkew " + std::to_string(r.graded[1]) +
                            ", Orth " + std::to_string(r.graded[2]) + ", Symp " + std::to_string(r.graded[3]));
            return v;
        }
        if (fn == "cup") {
            MixedGWElement x = element_arg(*e.args[0], fn), y = element_arg(*e.args[1], fn);
            auto a = rank_one_entry(x), b = rank_one_entry(y);
            if (!a || !b) grading_error("cup: expected two rank-one hermitian forms <a>, <b>");
            if (!(x.ambient == y.ambient)) domain_error("cup: forms over different algebras");
            if (x.slot() != y.slot())
                grading_error("cup: the forms lie in different slots, " + odd_slot_name(x) + " and " + odd_slot_name(y));
            Value v;
            v.kind = VK::Brauer;
            v.brauer = mixed_cup(x.ambient, *a, *b);
            BrauerClass direct = wf::e2(to_witt(mixed_mul(x, y)).c00);
            if (!(direct == v.brauer)) internal_error("cup: symbol formula and e2 of the product disagree");
            trace.push_back("cup: symbol formula agrees with e2 of the product");
            return v;
        }
        if (fn == "eq") {
            Value l = eval(*e.args[0]), r = eval(*e.args[1]);
            Value v;
            v.kind = VK::Bool;
            if (l.kind == VK::Element || r.kind == VK::Element) {
                if ((l.kind != VK::Element && l.kind != VK::Number) || (r.kind != VK::Element && r.kind != VK::Number))
                    grading_error("eq: cannot compare a " + std::string(kind_name(l.kind)) + " with a " + kind_name(r.kind));
                AlgebraWithInvolution A = l.kind == VK::Element && r.kind == VK::Element
                                              ? common_ambient(l.element, r.element)
                                          : l.kind == VK::Element ? l.element.ambient
                                                                  : r.element.ambient;
                v.verdict = mixed_equal(to_witt(as_element(l, A, "eq")), to_witt(as_element(r, A, "eq")));
                if (v.verdict == Verdict::EqualByBattery) trace.push_back("eq: certified by the invariant battery");
                return v;
            }
            if (l.kind != r.kind)
                grading_error("eq: cannot compare a " + std::string(kind_name(l.kind)) + " with a " + kind_name(r.kind));
            bool same = false;
            switch (l.kind) {
            case VK::Number: same = l.number == r.number; break;
            case VK::Algebra: same = ramified_places(l.alg) == ramified_places(r.alg); break;
            case VK::Bool: same = holds(l.verdict) == holds(r.verdict); break;
            case VK::Integer: same = l.integer == r.integer; break;
            case VK::Brauer: same = l.brauer == r.brauer; break;
            case VK::Signature: same = l.signature.plus == r.signature.plus && l.signature.minus == r.signature.minus; break;
            case VK::Invariants:
                same = l.inv.dim == r.inv.dim && l.inv.signature == r.inv.signature && l.inv.disc == r.inv.disc &&
                       l.inv.hasse == r.inv.hasse;
                break;
            default: break;
            }
            v.verdict = same ? Verdict::Equal : Verdict::Unequal;
            return v;
        }
        internal_error("unknown function " + fn);
    }
};

ResultDoc to_doc(const Value& v) {
    ResultDoc r;
    switch (v.kind) {
    case VK::Number: r.kind = ResultDoc::Kind::Number; r.number = v.number; break;
    case VK::Algebra:
        r.kind = ResultDoc::Kind::BrauerClass;
        r.brauer = ramified_places(v.alg);
        break;
    case VK::Element:
        if (only_even(v.element) && v.element.c00.virtual_dim >= (long)v.element.c00.witt.dim()) {
            r.kind = ResultDoc::Kind::Form;
            r.form = v.rep && (long)v.rep->dim() == v.element.c00.virtual_dim ? *v.rep : gw_representative(v.element.c00);
        } else {
            r.kind = ResultDoc::Kind::Mixed;
        }
        r.mixed = v.element;
        break;
    case VK::Bool: r.kind = ResultDoc::Kind::Bool; r.verdict = v.verdict; break;
    case VK::Integer: r.kind = ResultDoc::Kind::Integer; r.integer = v.integer; break;
    case VK::Brauer: r.kind = ResultDoc::Kind::BrauerClass; r.brauer = v.brauer; break;
    case VK::Signature: r.kind = ResultDoc::Kind::SignaturePair; r.signature = v.signature; break;
    case VK::Invariants:
        r.kind = ResultDoc::Kind::Invariants;
        r.inv = v.inv;
        r.virtual_dim = v.virtual_dim;
        break;
    }
    return r;
}

}

ResultDoc Evaluator::evaluate(const Expr& e) {
    std::vector<std::string> trace;
    Eval ev{env_, trace};
    Value v = ev.eval(e);
    ResultDoc r = to_doc(v);
    r.trace = std::move(trace);
    return r;
}

std::optional<ResultDoc> Evaluator::run(const Statement& s) {
    if (!s.expr) return std::nullopt;
    std::vector<std::string> trace;
    Eval ev{env_, trace};
    Value v = ev.eval(*s.expr);
    ResultDoc r = to_doc(v);
    r.trace = std::move(trace);
    if (!s.let.empty()) env_[s.let] = std::make_shared<Value>(v);
    return r;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson places_json(const PlaceSet& s) {
    ojson a = ojson::array();
    for (auto& p : s) {
        if (p.is_infinite()) a.push_back("inf");
        else a.push_back(p.p);
    }
    return a;
}

ojson rationals_json(const std::vector<Rational>& v) {
    ojson a = ojson::array();
    for (auto& q : v) a.push_back(to_string(q));
    return a;
}

ojson odd_json(const OddPart& p) {
    ojson o;
    o["rank"] = p.rank;
    ojson a = ojson::array();
    for (auto& e : p.entries) a.push_back(to_string(QuatLit{e.w, e.x, e.y, e.z}));
    o["entries"] = a;
    return o;
}

std::string places_text(const PlaceSet& s) {
    std::string out = "{";
    bool first = true;
    for (auto& p : s) {
        out += (first ? "" : ",") + to_string(p);
        first = false;
    }
    return out + "}";
}

std::string odd_text(const OddPart& p) {
    std::string out = "rank " + std::to_string(p.rank);
    if (!p.entries.empty()) {
        out += " <";
        for (std::size_t i = 0; i < p.entries.size(); ++i) {
            const Quat& e = p.entries[i];
            out += (i ? "," : "") + to_string(QuatLit{e.w, e.x, e.y, e.z});
        }
        out += ">";
    }
    return out;
}

}

std::string format(const ResultDoc& r, OutputMode mode, bool with_trace) {
    if (mode == OutputMode::Json) {
        ojson j;
        switch (r.kind) {
        case ResultDoc::Kind::Form:
            j["kind"] = "form";
            j["entries"] = rationals_json(r.form.entries);
            break;
        case ResultDoc::Kind::Mixed:
            j["kind"] = "mixed";
            j["ambient"] = to_string(r.mixed.ambient);
            j["even"] = ojson{{"virtual_dim", r.mixed.c00.virtual_dim}, {"witt", rationals_json(r.mixed.c00.witt.entries)}};
            j["even_skew"] = r.mixed.c01;
            j["orth"] = odd_json(r.mixed.orth);
            j["symp"] = odd_json(r.mixed.symp);
            break;
        case ResultDoc::Kind::Invariants:
            j["kind"] = "invariants";
            j["dim"] = r.virtual_dim;
            j["signature"] = r.inv.signature;
            j["disc"] = to_string(r.inv.disc.rep);
            j["hasse"] = places_json(r.inv.hasse);
            break;
        case ResultDoc::Kind::Bool:
            j["kind"] = "bool";
            j["value"] = holds(r.verdict);
            j["exact"] = r.verdict != Verdict::EqualByBattery;
            break;
        case ResultDoc::Kind::Integer:
            j["kind"] = "integer";
            j["value"] = r.integer;
            break;
        case ResultDoc::Kind::BrauerClass:
            j["kind"] = "brauer";
            j["places"] = places_json(r.brauer.places);
            break;
        case ResultDoc::Kind::SignaturePair:
            j["kind"] = "signature";
            j["plus"] = r.signature.plus;
            j["minus"] = r.signature.minus;
            break;
        case ResultDoc::Kind::Number:
            j["kind"] = "number";
            j["value"] = to_string(r.number);
            break;
        }
        if (with_trace) j["trace"] = r.trace;
        return j.dump();
    }
    std::string out;
    switch (r.kind) {
    case ResultDoc::Kind::Form: out = "<" + join_rationals(r.form.entries) + ">"; break;
    case ResultDoc::Kind::Mixed:
        out = "[" + to_string(r.mixed.ambient) + "] even " + to_string(r.mixed.c00) + "; even-skew " +
              std::to_string(r.mixed.c01) + " H; orth " + odd_text(r.mixed.orth) + "; symp " + odd_text(r.mixed.symp);
        break;
    case ResultDoc::Kind::Invariants:
        out = "dim " + std::to_string(r.virtual_dim) + ", signature " + std::to_string(r.inv.signature) + ", disc " +
              to_string(r.inv.disc.rep) + ", hasse " + places_text(r.inv.hasse);
        break;
    case ResultDoc::Kind::Bool:
        out = holds(r.verdict) ? "true" : "false";
        if (r.verdict == Verdict::EqualByBattery) out += " (by battery)";
        break;
    case ResultDoc::Kind::Integer: out = std::to_string(r.integer); break;
    case ResultDoc::Kind::BrauerClass: out = places_text(r.brauer.places); break;
    case ResultDoc::Kind::SignaturePair:
        out = "(plus " + std::to_string(r.signature.plus) + ", minus " + std::to_string(r.signature.minus) + ")";
        break;
    case ResultDoc::Kind::Number: out = to_string(r.number); break;
    }
    if (with_trace)
        for (auto& t : r.trace) out += "\n  trace: " + t;
    return out;
}

}
