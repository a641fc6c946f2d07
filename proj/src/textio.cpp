#include "orbvol/textio.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

namespace orbvol {

namespace {

// Sparse bivariate polynomial in (lambda, t) over F_q; t may carry negative exponents.
struct BiPoly {
    std::uint32_t q = 0;
    std::map<std::pair<int, int>, std::int64_t> terms; // (lambda deg, t deg) -> coeff in [0, q)

    static BiPoly constant(std::uint32_t q, std::int64_t v) {
        BiPoly b{q, {}};
        b.add_term(0, 0, v);
        return b;
    }
    void add_term(int l, int t, std::int64_t v) {
        std::int64_t& slot = terms[{l, t}];
        slot = ((slot + v) % static_cast<std::int64_t>(q) + q) % q;
        if (slot == 0) terms.erase({l, t});
    }
    BiPoly operator+(const BiPoly& o) const {
        BiPoly r = *this;
        for (auto& [k, v] : o.terms) r.add_term(k.first, k.second, v);
        return r;
    }
    BiPoly operator-() const {
        BiPoly r{q, {}};
        for (auto& [k, v] : terms) r.add_term(k.first, k.second, -v);
        return r;
    }
    BiPoly operator*(const BiPoly& o) const {
        BiPoly r{q, {}};
        for (auto& [a, va] : terms)
            for (auto& [b, vb] : o.terms) r.add_term(a.first + b.first, a.second + b.second, va * vb % q);
        return r;
    }
    bool is_t_monomial() const { return terms.size() == 1 && terms.begin()->first.first == 0; }
};

class Parser {
public:
    Parser(std::string_view src, std::uint32_t q) : src_(src), q_(q) {}

    BiPoly parse() {
        BiPoly v = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw PreconditionError("polynomial literal, column " + std::to_string(pos_ + 1) + ": " + msg);
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    bool eat(std::string_view s) {
        skip_ws();
        if (src_.substr(pos_, s.size()) == s) {
            pos_ += s.size();
            return true;
        }
        return false;
    }
    bool at_variable() {
        skip_ws();
        auto rest = src_.substr(pos_);
        if (rest.starts_with("\xCE\xBB") || rest.starts_with("lambda")) return true;
        if (!rest.empty() && (rest[0] == 'x' || rest[0] == 'L')) return true;
        return false;
    }
    bool starts_factor() {
        skip_ws();
        if (pos_ >= src_.size()) return false;
        char c = src_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 't' || at_variable();
    }

    BiPoly expr() {
        BiPoly acc;
        if (eat("-"))
            acc = -term();
        else {
            eat("+");
            acc = term();
        }
        while (true) {
            if (eat("+"))
                acc = acc + term();
            else if (eat("-"))
                acc = acc + (-term());
            else
                return acc;
        }
    }
    BiPoly term() {
        BiPoly acc = power();
        while (true) {
            if (eat("*"))
                acc = acc * power();
            else if (starts_factor())
                acc = acc * power();
            else
                return acc;
        }
    }
    BiPoly power() {
        BiPoly base = atom();
        if (!eat("^")) return base;
        skip_ws();
        bool neg = false;
        if (eat("-")) neg = true;
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an exponent");
        int e = std::stoi(std::string(src_.substr(start, pos_ - start)));
        if (neg) {
            if (!base.is_t_monomial()) fail("negative exponent only allowed on a monomial in t");
            auto [key, v] = *base.terms.begin();
            BiPoly r{q_, {}};
            r.add_term(0, -key.second * e, Fq(q_, v).inverse().pow(e).value());
            return r;
        }
        BiPoly r = BiPoly::constant(q_, 1);
        for (int i = 0; i < e; ++i) r = r * base;
        return r;
    }
    BiPoly atom() {
        skip_ws();
        if (eat("(")) {
            BiPoly v = expr();
            if (!eat(")")) fail("expected ')'");
            return v;
        }
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            std::int64_t v = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                v = (v * 10 + (src_[pos_++] - '0')) % q_;
            return BiPoly::constant(q_, v);
        }
        if (eat("\xCE\xBB") || eat("lambda") || eat("x") || eat("L")) {
            BiPoly r{q_, {}};
            r.add_term(1, 0, 1);
            return r;
        }
        if (eat("t")) {
            BiPoly r{q_, {}};
            r.add_term(0, 1, 1);
            return r;
        }
        if (pos_ >= src_.size()) fail("unexpected end of input");
        fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    }

    std::string_view src_;
    std::uint32_t q_;
    std::size_t pos_ = 0;
};

std::string coefficient_magnitude(std::int64_t mag, int tdeg, int ldeg, const char* tvar) {
    std::vector<std::string> parts;
    if (mag != 1 || (tdeg == 0 && ldeg == 0)) parts.push_back(std::to_string(mag));
    if (tdeg != 0) parts.push_back(tdeg == 1 ? std::string(tvar) : std::string(tvar) + "^" + std::to_string(tdeg));
    if (ldeg != 0) parts.push_back(ldeg == 1 ? "\xCE\xBB" : "\xCE\xBB^" + std::to_string(ldeg));
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
    return out;
}

void append_term(std::ostringstream& os, bool& first, bool negative, const std::string& body) {
    if (first)
        os << (negative ? "-" : "");
    else
        os << (negative ? " - " : " + ");
    os << body;
    first = false;
}

} // namespace

LPoly parse_lpoly(std::string_view text, std::uint32_t q) {
    require_prime(q);
    BiPoly b = Parser(text, q).parse();
    const ExtField& F = ExtField::get(q, 1);
    std::map<int, LaurentNumber> by_l;
    for (auto& [k, v] : b.terms) {
        if (k.first < 0) throw PreconditionError("negative power of the polynomial variable");
        auto it = by_l.find(k.first);
        LaurentNumber term = LaurentNumber::monomial(F.from_int(v), k.second);
        if (it == by_l.end())
            by_l.emplace(k.first, term);
        else
            it->second += term;
    }
    int deg = by_l.empty() ? -1 : by_l.rbegin()->first;
    std::vector<LaurentNumber> c(static_cast<std::size_t>(deg + 1), LaurentNumber::zero(F));
    for (auto& [l, v] : by_l) c[static_cast<std::size_t>(l)] = v;
    return LPoly(LaurentNumber::zero(F), std::move(c));
}

FqPoly parse_fqpoly(std::string_view text, std::uint32_t q) {
    require_prime(q);
    BiPoly b = Parser(text, q).parse();
    int deg = -1;
    for (auto& [k, v] : b.terms) {
        if (k.second != 0) throw PreconditionError("polynomial over F_q cannot contain t");
        deg = std::max(deg, k.first);
    }
    std::vector<std::int64_t> c(static_cast<std::size_t>(deg + 1), 0);
    for (auto& [k, v] : b.terms) c[static_cast<std::size_t>(k.first)] = v;
    return fq_poly(q, c);
}

LaurentNumber parse_laurent(std::string_view text, std::uint32_t q) {
    require_prime(q);
    // A trailing "+ O(t^k)" marks a truncated value.
    static const std::regex big_o(R"((?:^|\+)\s*O\(\s*t\s*(?:\^\s*(-?\d+))?\s*\)\s*$)");
    std::string body(text);
    std::optional<std::int64_t> prec;
    std::smatch m;
    if (std::regex_search(body, m, big_o)) {
        prec = m[1].matched ? std::stoll(m[1].str()) : 1;
        body = body.substr(0, static_cast<std::size_t>(m.position(0)));
    }
    const ExtField& F = ExtField::get(q, 1);
    LaurentNumber out = LaurentNumber::zero(F);
    if (body.find_first_not_of(" \t") != std::string::npos) {
        BiPoly b = Parser(body, q).parse();
        for (auto& [k, v] : b.terms) {
            if (k.first != 0) throw PreconditionError("expected an expression in t only");
            out += LaurentNumber::monomial(F.from_int(v), k.second);
        }
    }
    return prec ? out.truncated(*prec) : out;
}

Matrix<LaurentNumber> parse_matrix(std::string_view text, std::uint32_t q) {
    std::vector<std::vector<std::string>> rows;
    int depth = 0, paren = 0;
    std::string cell;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '[') {
            if (++depth > 2) throw PreconditionError("matrix literal, column " + std::to_string(i + 1) + ": nested too deep");
            if (depth == 2) rows.emplace_back();
        } else if (ch == ']') {
            if (depth == 2) {
                if (cell.find_first_not_of(" \t") == std::string::npos)
                    throw PreconditionError("matrix literal, column " + std::to_string(i + 1) + ": empty entry");
                rows.back().push_back(cell);
                cell.clear();
            }
            if (--depth < 0) throw PreconditionError("matrix literal, column " + std::to_string(i + 1) + ": unbalanced ']'");
        } else if (depth == 2) {
            if (ch == '(') ++paren;
            if (ch == ')') --paren;
            if (ch == ',' && paren == 0) {
                rows.back().push_back(cell);
                cell.clear();
            } else {
                cell += ch;
            }
        } else if (!std::isspace(static_cast<unsigned char>(ch)) && ch != ',') {
            throw PreconditionError("matrix literal, column " + std::to_string(i + 1) + ": unexpected '" + ch + "'");
        }
    }
    if (depth != 0 || rows.empty()) throw PreconditionError("matrix literal: expected [[...], ...]");
    const std::size_t d = rows.size();
    Matrix<LaurentNumber> m(d, d, parse_laurent("0", q));
    for (std::size_t i = 0; i < d; ++i) {
        if (rows[i].size() != d) throw PreconditionError("matrix literal: row " + std::to_string(i + 1) + " has the wrong length");
        for (std::size_t j = 0; j < d; ++j) m(i, j) = parse_laurent(rows[i][j], q);
    }
    return m;
}

std::string format_poly(const FqPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        const Fq c = p.coeff(k);
        if (c.is_zero()) continue;
        const std::int64_t sv = c.signed_value();
        append_term(os, first, sv < 0, coefficient_magnitude(sv < 0 ? -sv : sv, 0, k, "t"));
    }
    return os.str();
}

std::string format_poly(const LPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        const LaurentNumber& c = p.coeff(k);
        if (c.zero_state() == ZeroState::Zero) continue;
        const char* tvar = c.e() == 1 ? "t" : "s";
        if (c.is_monomial() && c.field().degree() == 1) {
            const std::int64_t sv = Fq(c.q(), c.coeffs().front().coeff(0)).signed_value();
            append_term(os, first, sv < 0, coefficient_magnitude(sv < 0 ? -sv : sv, static_cast<int>(c.start()), k, tvar));
            continue;
        }
        std::string body = "(" + c.pretty() + ")";
        if (k != 0) body += k == 1 ? "*\xCE\xBB" : "*\xCE\xBB^" + std::to_string(k);
        append_term(os, first, false, body);
    }
    return os.str();
}

} // namespace orbvol
