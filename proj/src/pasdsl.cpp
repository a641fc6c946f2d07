#include "orbvol/pasdsl.hpp"

#include "orbvol/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace orbvol {

FormulaError::FormulaError(Kind kind, int line, int col, const std::string& msg)
    : PreconditionError(std::to_string(line) + ":" + std::to_string(col) + ": " +
                        (kind == Kind::Sort ? "sort error: " : "syntax error: ") + msg),
      kind_(kind), line_(line), col_(col) {}

Truth operator&&(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::True && b == Truth::True) return Truth::True;
    return Truth::Unknown;
}

Truth operator||(Truth a, Truth b) {
    if (a == Truth::True || b == Truth::True) return Truth::True;
    if (a == Truth::False && b == Truth::False) return Truth::False;
    return Truth::Unknown;
}

Truth operator!(Truth a) {
    if (a == Truth::Unknown) return a;
    return a == Truth::True ? Truth::False : Truth::True;
}

std::string to_string(Truth t) {
    switch (t) {
    case Truth::True:
        return "true";
    case Truth::False:
        return "false";
    case Truth::Unknown:
        return "unknown";
    }
    return {};
}

// ---- syntax tree ----

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

struct TermNode {
    enum class Kind { Int, T, Matrix, Entry, Alpha, Neg, Add, Sub, Mul, Pow } kind = Kind::Int;
    std::int64_t value = 0; // Int literal, Alpha index, Pow exponent
    int i = 0, j = 0;       // Entry, 1-based
    std::vector<std::shared_ptr<const TermNode>> kids;
};
using TermPtr = std::shared_ptr<const TermNode>;

struct FormulaNode {
    enum class Kind { True, False, Member, Not, And, Or, Ord, Ac, Res, Restricted, MuEq, PfaffAcEq } kind = Kind::True;
    Cmp cmp = Cmp::Eq;
    Rational rational{0}; // ord bound, res index, restricted / mu_eq slope
    std::int64_t literal = 0;
    TermPtr term;
    std::vector<std::shared_ptr<const FormulaNode>> kids;
    // mu_eq
    std::vector<std::int64_t> R;
    bool has_r = false;
    std::optional<std::int64_t> pf, v;
};
using NodePtr = std::shared_ptr<const FormulaNode>;

namespace {

const char* cmp_text(Cmp c) {
    switch (c) {
    case Cmp::Eq:
        return "==";
    case Cmp::Ne:
        return "!=";
    case Cmp::Lt:
        return "<";
    case Cmp::Le:
        return "<=";
    case Cmp::Gt:
        return ">";
    case Cmp::Ge:
        return ">=";
    }
    return "";
}

// ---- lexer ----

struct Token {
    enum class Kind { Ident, Int, Op, End } kind = Kind::End;
    std::string text;
    int line = 1, col = 1;
};

std::vector<Token> tokenize(std::string_view src) {
    static const char* const ops[] = {"&&", "||", "==", "!=", "<=", ">=", "!", "<", ">", "=", "(", ")", "[",
                                      "]",  "{",  "}",  ",",  ":",  "+",  "-", "*", "^", "/"};
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') { // comment to end of line
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token tok{Token::Kind::End, "", line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            tok.kind = Token::Kind::Ident;
            tok.text = std::string(src.substr(i, j - i));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            tok.kind = Token::Kind::Int;
            tok.text = std::string(src.substr(i, j - i));
        } else {
            for (const char* op : ops)
                if (src.substr(i, std::char_traits<char>::length(op)) == op) {
                    tok.kind = Token::Kind::Op;
                    tok.text = op;
                    break;
                }
            if (tok.kind == Token::Kind::End)
                throw FormulaError(FormulaError::Kind::Syntax, line, col, std::string("unexpected character '") + c + "'");
        }
        const std::size_t n = tok.text.size();
        out.push_back(std::move(tok));
        advance(n);
    }
    out.push_back({Token::Kind::End, "", line, col});
    return out;
}

// ---- parser ----

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    NodePtr parse() {
        NodePtr root = disj();
        if (peek().kind != Token::Kind::End) fail_here("unexpected '" + peek().text + "'");
        return root;
    }

    std::vector<FormulaNode*> mu_nodes;        // mu_eq atoms without an explicit r
    std::vector<Rational> restricted_slopes;

private:
    const Token& peek() const { return toks_[pos_]; }
    bool is_op(const char* op) const { return peek().kind == Token::Kind::Op && peek().text == op; }
    bool is_ident(const char* id) const { return peek().kind == Token::Kind::Ident && peek().text == id; }
    Token next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg, FormulaError::Kind k = FormulaError::Kind::Syntax) {
        throw FormulaError(k, t.line, t.col, msg);
    }
    [[noreturn]] void fail_here(const std::string& msg) { fail(peek(), msg); }

    void expect(const char* op) {
        if (!is_op(op)) fail_here(std::string("expected '") + op + "'" + (peek().kind == Token::Kind::End ? " at end of input" : ", found '" + peek().text + "'"));
        ++pos_;
    }

    std::int64_t integer() {
        if (peek().kind != Token::Kind::Int) fail_here("expected an integer");
        const Token t = next();
        try {
            return std::stoll(t.text);
        } catch (const std::out_of_range&) {
            fail(t, "integer literal out of range");
        }
    }

    std::int64_t signed_integer() {
        const bool neg = is_op("-");
        if (neg) ++pos_;
        const std::int64_t v = integer();
        return neg ? -v : v;
    }

    Rational rational() {
        const std::int64_t a = signed_integer();
        if (!is_op("/")) return Rational(a);
        ++pos_;
        const Token t = peek();
        const std::int64_t b = integer();
        if (b == 0) fail(t, "zero denominator");
        return Rational(a, b);
    }

    std::int64_t residue_literal() {
        if (peek().kind == Token::Kind::Ident)
            fail(peek(), "residue-field literal expected, found '" + peek().text + "'", FormulaError::Kind::Sort);
        return signed_integer();
    }

    NodePtr make(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }

    NodePtr disj() {
        NodePtr lhs = conj();
        while (is_op("||")) {
            ++pos_;
            FormulaNode n;
            n.kind = FormulaNode::Kind::Or;
            n.kids = {lhs, conj()};
            lhs = make(std::move(n));
        }
        return lhs;
    }

    NodePtr conj() {
        NodePtr lhs = unary();
        while (is_op("&&")) {
            ++pos_;
            FormulaNode n;
            n.kind = FormulaNode::Kind::And;
            n.kids = {lhs, unary()};
            lhs = make(std::move(n));
        }
        return lhs;
    }

    NodePtr unary() {
        if (is_op("!")) {
            ++pos_;
            FormulaNode n;
            n.kind = FormulaNode::Kind::Not;
            n.kids = {unary()};
            return make(std::move(n));
        }
        if (is_op("(")) {
            ++pos_;
            NodePtr f = disj();
            expect(")");
            return f;
        }
        return atom();
    }

    Cmp comparison(bool order_allowed) {
        const Token t = peek();
        static const std::map<std::string, Cmp> table = {{"=", Cmp::Eq}, {"==", Cmp::Eq}, {"!=", Cmp::Ne},
                                                         {"<", Cmp::Lt}, {"<=", Cmp::Le}, {">", Cmp::Gt},
                                                         {">=", Cmp::Ge}};
        const auto it = t.kind == Token::Kind::Op ? table.find(t.text) : table.end();
        if (it == table.end()) {
            if (t.kind == Token::Kind::End || is_op("&&") || is_op("||") || is_op(")"))
                fail(t, "a value-sort term is not a formula; compare it", FormulaError::Kind::Sort);
            fail(t, "expected a comparison operator");
        }
        if (!order_allowed && it->second != Cmp::Eq && it->second != Cmp::Ne)
            fail(t, "residue-field values are only compared with = or !=", FormulaError::Kind::Sort);
        ++pos_;
        return it->second;
    }

    TermPtr field_term() {
        const Token start = peek();
        TermPtr t = term();
        if (t->kind == TermNode::Kind::Matrix) fail(start, "the matrix X is not a field element", FormulaError::Kind::Sort);
        return t;
    }

    NodePtr atom() {
        const Token t = peek();
        FormulaNode n;
        if (t.kind == Token::Kind::Ident) {
            const std::string& id = t.text;
            if (id == "true" || id == "false" || id == "member") {
                ++pos_;
                n.kind = id == "true" ? FormulaNode::Kind::True
                                      : (id == "false" ? FormulaNode::Kind::False : FormulaNode::Kind::Member);
                return make(std::move(n));
            }
            if (id == "ord") {
                ++pos_;
                expect("(");
                n.term = term(); // ord(X) is allowed
                expect(")");
                n.kind = FormulaNode::Kind::Ord;
                n.cmp = comparison(true);
                n.rational = rational();
                return make(std::move(n));
            }
            if (id == "ac" || id == "res") {
                ++pos_;
                n.kind = id == "ac" ? FormulaNode::Kind::Ac : FormulaNode::Kind::Res;
                if (n.kind == FormulaNode::Kind::Res) {
                    expect("[");
                    n.rational = rational();
                    expect("]");
                }
                expect("(");
                n.term = field_term();
                expect(")");
                n.cmp = comparison(false);
                n.literal = residue_literal();
                return make(std::move(n));
            }
            if (id == "restricted") {
                ++pos_;
                expect("(");
                n.kind = FormulaNode::Kind::Restricted;
                n.rational = rational();
                expect(")");
                restricted_slopes.push_back(n.rational);
                return make(std::move(n));
            }
            if (id == "pfaff_ac_eq") {
                ++pos_;
                expect("(");
                n.kind = FormulaNode::Kind::PfaffAcEq;
                n.literal = residue_literal();
                expect(")");
                return make(std::move(n));
            }
            if (id == "mu_eq") {
                ++pos_;
                return mu_eq();
            }
        }
        // Anything else in formula position is a value-sort term.
        (void)term();
        fail(t, "a value-sort term is not a formula", FormulaError::Kind::Sort);
    }

    NodePtr mu_eq() {
        FormulaNode n;
        n.kind = FormulaNode::Kind::MuEq;
        expect("(");
        expect("{");
        bool have_R = false;
        for (bool first = true; first || is_op(","); first = false) {
            if (!first) ++pos_;
            if (peek().kind != Token::Kind::Ident) fail_here("expected a key (R, r, pf or v)");
            const Token key = next();
            expect(":");
            if (key.text == "R") {
                expect("[");
                n.R.push_back(signed_integer());
                while (is_op(",")) {
                    ++pos_;
                    n.R.push_back(signed_integer());
                }
                expect("]");
                if (n.R.front() != 1) fail(key, "R must be monic (leading coefficient 1)");
                have_R = true;
            } else if (key.text == "r") {
                n.rational = rational();
                n.has_r = true;
            } else if (key.text == "pf") {
                n.pf = residue_literal();
            } else if (key.text == "v") {
                n.v = residue_literal();
            } else {
                fail(key, "unknown key '" + key.text + "'");
            }
        }
        expect("}");
        expect(")");
        if (!have_R) fail_here("mu_eq needs R");
        auto p = std::make_shared<FormulaNode>(std::move(n));
        if (!p->has_r) mu_nodes.push_back(p.get());
        return p;
    }

    TermPtr make_term(TermNode::Kind k, std::vector<TermPtr> kids, std::int64_t value = 0) {
        auto n = std::make_shared<TermNode>();
        n->kind = k;
        n->kids = std::move(kids);
        n->value = value;
        return n;
    }

    void require_field(const TermPtr& t, const Token& at) {
        if (t->kind == TermNode::Kind::Matrix) fail(at, "the matrix X is not a field element", FormulaError::Kind::Sort);
    }

    TermPtr term() {
        const Token start = peek();
        TermPtr lhs = prod();
        while (is_op("+") || is_op("-")) {
            const Token op = next();
            require_field(lhs, start);
            TermPtr rhs = prod();
            require_field(rhs, op);
            lhs = make_term(op.text == "+" ? TermNode::Kind::Add : TermNode::Kind::Sub, {lhs, rhs});
        }
        return lhs;
    }

    TermPtr prod() {
        const Token start = peek();
        TermPtr lhs = factor();
        while (is_op("*")) {
            const Token op = next();
            require_field(lhs, start);
            TermPtr rhs = factor();
            require_field(rhs, op);
            lhs = make_term(TermNode::Kind::Mul, {lhs, rhs});
        }
        return lhs;
    }

    TermPtr factor() {
        if (is_op("-")) {
            const Token op = next();
            TermPtr f = factor();
            require_field(f, op);
            return make_term(TermNode::Kind::Neg, {f});
        }
        const Token start = peek();
        TermPtr b = base();
        if (is_op("^")) {
            ++pos_;
            require_field(b, start);
            const std::int64_t e = integer();
            return make_term(TermNode::Kind::Pow, {b}, e);
        }
        return b;
    }

    TermPtr base() {
        const Token t = peek();
        if (t.kind == Token::Kind::Int) return make_term(TermNode::Kind::Int, {}, integer());
        if (is_op("(")) {
            ++pos_;
            TermPtr inner = term();
            expect(")");
            return inner;
        }
        if (t.kind != Token::Kind::Ident) fail_here(t.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
        ++pos_;
        if (t.text == "t") return make_term(TermNode::Kind::T, {});
        if (t.text == "X") return make_term(TermNode::Kind::Matrix, {});
        if (t.text == "alpha") {
            expect("[");
            const std::int64_t j = integer();
            expect("]");
            expect("(");
            if (!is_ident("X")) fail_here("alpha[j] applies to the matrix X");
            ++pos_;
            expect(")");
            if (j < 1) fail(t, "alpha index starts at 1");
            return make_term(TermNode::Kind::Alpha, {}, j);
        }
        if (t.text.size() == 3 && t.text[0] == 'x' && std::isdigit(static_cast<unsigned char>(t.text[1])) &&
            std::isdigit(static_cast<unsigned char>(t.text[2])) && t.text[1] != '0' && t.text[2] != '0') {
            auto n = std::make_shared<TermNode>();
            n->kind = TermNode::Kind::Entry;
            n->i = t.text[1] - '0';
            n->j = t.text[2] - '0';
            return n;
        }
        if (t.text == "ord" || t.text == "ac" || t.text == "res")
            fail(t, t.text + "(...) is not a field-valued term", FormulaError::Kind::Sort);
        fail(t, "unknown identifier '" + t.text + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// ---- printing ----

void print_term(std::ostream& os, const TermNode& t) {
    using K = TermNode::Kind;
    switch (t.kind) {
    case K::Int:
        os << t.value;
        break;
    case K::T:
        os << "t";
        break;
    case K::Matrix:
        os << "X";
        break;
    case K::Entry:
        os << "x" << t.i << t.j;
        break;
    case K::Alpha:
        os << "alpha[" << t.value << "](X)";
        break;
    case K::Neg:
        os << "(-";
        print_term(os, *t.kids[0]);
        os << ")";
        break;
    case K::Add:
    case K::Sub:
    case K::Mul:
        os << "(";
        print_term(os, *t.kids[0]);
        os << (t.kind == K::Add ? " + " : t.kind == K::Sub ? " - " : " * ");
        print_term(os, *t.kids[1]);
        os << ")";
        break;
    case K::Pow:
        os << "(";
        print_term(os, *t.kids[0]);
        os << ")^" << t.value;
        break;
    }
}

void print_formula(std::ostream& os, const FormulaNode& n) {
    using K = FormulaNode::Kind;
    switch (n.kind) {
    case K::True:
        os << "true";
        break;
    case K::False:
        os << "false";
        break;
    case K::Member:
        os << "member";
        break;
    case K::Not:
        os << "!";
        print_formula(os, *n.kids[0]);
        break;
    case K::And:
    case K::Or:
        os << "(";
        print_formula(os, *n.kids[0]);
        os << (n.kind == K::And ? " && " : " || ");
        print_formula(os, *n.kids[1]);
        os << ")";
        break;
    case K::Ord:
        os << "ord(";
        print_term(os, *n.term);
        os << ") " << cmp_text(n.cmp) << " " << to_string(n.rational);
        break;
    case K::Ac:
    case K::Res:
        if (n.kind == K::Ac)
            os << "ac(";
        else
            os << "res[" << to_string(n.rational) << "](";
        print_term(os, *n.term);
        os << ") " << cmp_text(n.cmp) << " " << n.literal;
        break;
    case K::Restricted:
        os << "restricted(" << to_string(n.rational) << ")";
        break;
    case K::PfaffAcEq:
        os << "pfaff_ac_eq(" << n.literal << ")";
        break;
    case K::MuEq:
        os << "mu_eq({R: [";
        for (std::size_t i = 0; i < n.R.size(); ++i) os << (i ? ", " : "") << n.R[i];
        os << "], r: " << to_string(n.rational);
        if (n.pf) os << ", pf: " << *n.pf;
        if (n.v) os << ", v: " << *n.v;
        os << "})";
        break;
    }
}

std::size_t count_atoms(const FormulaNode& n) {
    using K = FormulaNode::Kind;
    if (n.kind == K::Not || n.kind == K::And || n.kind == K::Or) {
        std::size_t s = 0;
        for (const auto& k : n.kids) s += count_atoms(*k);
        return s;
    }
    return 1;
}

// ---- evaluation ----

// Valuation known to lie in [lo, hi]; infinity encoded by the flags.
struct ValRange {
    Rational lo{0}, hi{0};
    bool lo_inf = false, hi_inf = false;

    static ValRange of(const LaurentNumber& x) {
        ValRange v;
        switch (x.zero_state()) {
        case ZeroState::Zero:
            v.lo_inf = v.hi_inf = true;
            break;
        case ZeroState::Nonzero:
            v.lo = v.hi = *x.ord();
            break;
        case ZeroState::Indistinguishable:
            v.lo = x.ord_lower_bound();
            v.hi_inf = true;
            break;
        }
        return v;
    }

    static ValRange min(const ValRange& a, const ValRange& b) {
        ValRange v;
        if (a.lo_inf) {
            v.lo = b.lo;
            v.lo_inf = b.lo_inf;
        } else if (b.lo_inf) {
            v.lo = a.lo;
        } else {
            v.lo = std::min(a.lo, b.lo);
        }
        if (a.hi_inf) {
            v.hi = b.hi;
            v.hi_inf = b.hi_inf;
        } else if (b.hi_inf) {
            v.hi = a.hi;
        } else {
            v.hi = std::min(a.hi, b.hi);
        }
        return v;
    }

    // is every value in the range ">= a" (resp. "> a")
    bool lo_ge(const Rational& a) const { return lo_inf || lo >= a; }
    bool lo_gt(const Rational& a) const { return lo_inf || lo > a; }
    bool hi_lt(const Rational& a) const { return !hi_inf && hi < a; }
    bool hi_le(const Rational& a) const { return !hi_inf && hi <= a; }

    Truth compare(Cmp c, const Rational& a) const {
        auto decide = [](bool yes, bool no) { return yes ? Truth::True : (no ? Truth::False : Truth::Unknown); };
        switch (c) {
        case Cmp::Ge:
            return decide(lo_ge(a), hi_lt(a));
        case Cmp::Gt:
            return decide(lo_gt(a), hi_le(a));
        case Cmp::Le:
            return decide(hi_le(a), lo_gt(a));
        case Cmp::Lt:
            return decide(hi_lt(a), lo_ge(a));
        case Cmp::Eq:
            return decide(!lo_inf && !hi_inf && lo == a && hi == a, lo_gt(a) || hi_lt(a));
        case Cmp::Ne:
            return !decide(!lo_inf && !hi_inf && lo == a && hi == a, lo_gt(a) || hi_lt(a));
        }
        return Truth::Unknown;
    }
};

class Evaluator {
public:
    Evaluator(const AlgebraType& type, const Matrix<LaurentNumber>& x, Uniformizer u) : type_(type), x_(x), u_(u) {
        if (!x_.square() || static_cast<int>(x_.rows()) != type_.d)
            throw PreconditionError("eval: matrix size does not match " + type_.str());
    }

    Truth formula(const FormulaNode& n) {
        using K = FormulaNode::Kind;
        switch (n.kind) {
        case K::True:
            return Truth::True;
        case K::False:
            return Truth::False;
        case K::Not:
            return !formula(*n.kids[0]);
        case K::And: {
            const Truth a = formula(*n.kids[0]);
            if (a == Truth::False) return a;
            return a && formula(*n.kids[1]);
        }
        case K::Or: {
            const Truth a = formula(*n.kids[0]);
            if (a == Truth::True) return a;
            return a || formula(*n.kids[1]);
        }
        default:
            try {
                return atom(n);
            } catch (const PrecisionExhausted&) {
                return Truth::Unknown;
            }
        }
    }

private:
    Truth atom(const FormulaNode& n) {
        using K = FormulaNode::Kind;
        switch (n.kind) {
        case K::Member:
            return membership(x_, form_matrix(type_)) ? Truth::True : Truth::False;
        case K::Ord: {
            if (n.term->kind == TermNode::Kind::Matrix) {
                ValRange v = ValRange::of(x_.data().front());
                for (const auto& e : x_.data()) v = ValRange::min(v, ValRange::of(e));
                return v.compare(n.cmp, n.rational);
            }
            return ValRange::of(term(*n.term)).compare(n.cmp, n.rational);
        }
        case K::Ac:
        case K::Res: {
            const LaurentNumber v = term(*n.term);
            const FqExt r = n.kind == K::Ac ? v.ac(u_) : v.res(n.rational, u_);
            const bool eq = r == r.field().from_int(n.literal);
            return (eq == (n.cmp == Cmp::Eq)) ? Truth::True : Truth::False;
        }
        case K::Restricted: {
            const auto c = classify(n.rational);
            return c && c->accepted() ? Truth::True : Truth::False;
        }
        case K::MuEq: {
            const auto c = classify(n.rational);
            if (!c || !c->accepted()) return Truth::False;
            const std::uint32_t q = x_(0, 0).q();
            std::vector<std::int64_t> alphas(n.R.begin() + 1, n.R.end());
            SPoint want{type_, n.rational, fq_monic(q, alphas), std::nullopt, std::nullopt};
            if (n.pf) want.pf = Fq(q, *n.pf);
            if (n.v) want.v = Fq(q, *n.v);
            return mu(LieElement(type_, x_), n.rational, u_) == want ? Truth::True : Truth::False;
        }
        case K::PfaffAcEq: {
            if (type_.family != Family::SOeven) return Truth::False;
            const Matrix<LaurentNumber> jx = lift_int_matrix(form_matrix(type_), x_(0, 0).field()) * x_;
            const FqExt a = pfaffian(jx).ac(u_);
            return a == a.field().from_int(n.literal) ? Truth::True : Truth::False;
        }
        default:
            break;
        }
        throw PreconditionError("eval: unexpected node");
    }

    // nullopt when X is not in the algebra
    std::optional<Classification> classify(const Rational& r) {
        if (!membership(x_, form_matrix(type_))) return std::nullopt;
        return is_restricted(LieElement(type_, x_), r, u_);
    }

    LaurentNumber term(const TermNode& t) {
        using K = TermNode::Kind;
        const ExtField& F = x_(0, 0).field();
        switch (t.kind) {
        case K::Int:
            return LaurentNumber::from_int(F, t.value);
        case K::T:
            return LaurentNumber::monomial(F.from_int(u_.scale), 1);
        case K::Entry:
            if (t.i > type_.d || t.j > type_.d)
                throw PreconditionError("x" + std::to_string(t.i) + std::to_string(t.j) + " is outside a " +
                                        std::to_string(type_.d) + "x" + std::to_string(type_.d) + " matrix");
            return x_(static_cast<std::size_t>(t.i - 1), static_cast<std::size_t>(t.j - 1));
        case K::Alpha:
            if (t.value > type_.d) throw PreconditionError("alpha index beyond the matrix size");
            if (!charpoly_) charpoly_ = char_poly(x_, LaurentNumber::from_int(F, 1));
            return charpoly_->alpha(static_cast<int>(t.value));
        case K::Neg:
            return -term(*t.kids[0]);
        case K::Add:
            return term(*t.kids[0]) + term(*t.kids[1]);
        case K::Sub:
            return term(*t.kids[0]) - term(*t.kids[1]);
        case K::Mul:
            return term(*t.kids[0]) * term(*t.kids[1]);
        case K::Pow:
            return term(*t.kids[0]).pow(t.value);
        case K::Matrix:
            break;
        }
        throw PreconditionError("eval: matrix used as a field element");
    }

    const AlgebraType& type_;
    const Matrix<LaurentNumber>& x_;
    Uniformizer u_;
    std::optional<LPoly> charpoly_;
};

} // namespace

std::string Formula::str() const {
    std::ostringstream os;
    print_formula(os, *root_);
    return os.str();
}

std::size_t Formula::atom_count() const { return count_atoms(*root_); }

Formula parse_formula(std::string_view src) {
    Parser p(src);
    NodePtr root = p.parse();
    if (!p.mu_nodes.empty()) {
        std::vector<Rational> slopes = p.restricted_slopes;
        std::sort(slopes.begin(), slopes.end());
        slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());
        if (slopes.size() != 1)
            throw FormulaError(FormulaError::Kind::Sort, 1, 1,
                               "mu_eq without r needs exactly one restricted(r) in the formula");
        for (FormulaNode* n : p.mu_nodes) {
            n->rational = slopes.front();
            n->has_r = true;
        }
    }
    return Formula(std::move(root));
}

Truth eval(const Formula& f, const AlgebraType& type, const Matrix<LaurentNumber>& x, Uniformizer u) {
    return Evaluator(type, x, u).formula(f.root());
}

Truth eval(const Formula& f, const LieElement& x, Uniformizer u) { return eval(f, x.type(), x.matrix(), u); }

Truth eval(const Formula& f, const LieElement& x, int K, Uniformizer u) {
    return eval(f, x.truncated(K), u);
}

// ---- lattice enumeration ----

LatticeEnumerator::LatticeEnumerator(AlgebraType type, std::uint32_t q, int K)
    : type_(type), q_(q), K_(K), basis_(algebra_basis(type)) {
    require_prime(q_);
    if (K_ < 1) throw PreconditionError("K must be at least 1");
    const double total = std::pow(static_cast<double>(q_), static_cast<double>(K_) * static_cast<double>(basis_.size()));
    if (total > 1e15) throw BudgetExceeded("g(O/t^K) has more than 10^15 points");
    for (std::size_t i = 0; i < basis_.size() * static_cast<std::size_t>(K_); ++i) size_ *= q_;
}

std::vector<std::uint32_t> LatticeEnumerator::digits(std::uint64_t index) const {
    std::vector<std::uint32_t> d(basis_.size() * static_cast<std::size_t>(K_));
    for (auto& v : d) {
        v = static_cast<std::uint32_t>(index % q_);
        index /= q_;
    }
    return d;
}

std::uint64_t LatticeEnumerator::index_of(const std::vector<std::uint32_t>& digits) const {
    std::uint64_t idx = 0;
    for (std::size_t i = digits.size(); i-- > 0;) idx = idx * q_ + digits[i] % q_;
    return idx;
}

Matrix<LaurentNumber> LatticeEnumerator::element(std::uint64_t index) const {
    const std::size_t d = static_cast<std::size_t>(type_.d);
    const std::size_t K = static_cast<std::size_t>(K_);
    std::vector<std::int64_t> acc(d * d * K, 0);
    const auto dg = digits(index);
    for (std::size_t b = 0; b < basis_.size(); ++b)
        for (std::size_t l = 0; l < K; ++l) {
            const std::int64_t c = dg[b * K + l];
            if (c == 0) continue;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (basis_[b](i, j)) acc[(i * d + j) * K + l] += c * basis_[b](i, j);
        }
    Matrix<LaurentNumber> x(d, d, LaurentNumber::zero(ExtField::get(q_, 1)).truncated(K_));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const auto first = acc.begin() + static_cast<std::ptrdiff_t>((i * d + j) * K);
            x(i, j) = LaurentNumber::from_ints(q_, 0, std::vector<std::int64_t>(first, first + static_cast<std::ptrdiff_t>(K)), K_);
        }
    return x;
}

// ---- level probing ----

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

LevelProbe level_probe(const Formula& f, const AlgebraType& type, std::uint32_t q, int K,
                       std::optional<std::uint64_t> trials, std::uint64_t seed) {
    const LatticeEnumerator lat(type, q, K);
    const std::size_t nb = static_cast<std::size_t>(type.dim());
    const std::size_t Kz = static_cast<std::size_t>(K);
    LevelProbe out;
    out.seed = seed;
    // Largest M with a witnessed disagreement between elements congruent mod t^M.
    int worst = -1;

    if (!trials) {
        if (lat.size() > 10'000'000) throw BudgetExceeded("exhaustive level probe over more than 10^7 elements");
        out.exhaustive = true;
        std::vector<Truth> values(lat.size());
        for (std::uint64_t i = 0; i < lat.size(); ++i) {
            values[i] = eval(f, type, lat.element(i), {});
            if (values[i] == Truth::Unknown) ++out.unknown;
        }
        out.samples = lat.size();
        for (int M = K - 1; M >= 0 && worst < 0; --M) {
            std::unordered_map<std::uint64_t, Truth> seen;
            for (std::uint64_t i = 0; i < lat.size() && worst < 0; ++i) {
                if (values[i] == Truth::Unknown) continue;
                auto dg = lat.digits(i);
                for (std::size_t b = 0; b < nb; ++b)
                    for (std::size_t l = static_cast<std::size_t>(M); l < Kz; ++l) dg[b * Kz + l] = 0;
                const auto [it, fresh] = seen.emplace(lat.index_of(dg), values[i]);
                if (!fresh && it->second != values[i]) worst = M;
            }
        }
    } else {
        std::uint64_t counter = 0;
        auto draw = [&](std::uint64_t bound) { return splitmix64(seed, counter++) % bound; };
        for (std::uint64_t trial = 0; trial < *trials; ++trial) {
            std::vector<std::uint32_t> a(nb * Kz), b(nb * Kz);
            for (auto& v : a) v = static_cast<std::uint32_t>(draw(q));
            const int M = static_cast<int>(draw(static_cast<std::uint64_t>(K)));
            for (std::size_t s = 0; s < a.size(); ++s)
                b[s] = (s % Kz) < static_cast<std::size_t>(M) ? a[s] : static_cast<std::uint32_t>(draw(q));
            const Truth va = eval(f, type, lat.element(lat.index_of(a)), {});
            const Truth vb = eval(f, type, lat.element(lat.index_of(b)), {});
            ++out.samples;
            if (va == Truth::Unknown || vb == Truth::Unknown) {
                ++out.unknown;
                continue;
            }
            if (va != vb) worst = std::max(worst, M);
        }
    }
    out.level = worst + 1;
    if (out.level >= K)
        throw BudgetExceeded("level probe: the predicate is not constant modulo t^" + std::to_string(K - 1) +
                             "; raise K");
    return out;
}

} // namespace orbvol
