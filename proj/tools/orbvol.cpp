// orbvol: command-line front end for batch experiments.

#include "orbvol/params.hpp"
#include "orbvol/pasdsl.hpp"
#include "orbvol/quotfourier.hpp"
#include "orbvol/textio.hpp"
#include "orbvol/volumes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace orbvol;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct RunConfig {
    std::string algebra = "sp:2";
    std::string r;
    std::uint32_t q = 3;
    int K = 0; // 0: command default
    std::string mode = "exhaustive";
    std::uint64_t seed = 0;
    std::uint64_t samples = 20000;
    unsigned jobs = 1;
    std::uint32_t uniformizer = 1;
    std::string out;
    bool no_timestamp = false;
    std::string formula, formula_file;
    std::string poly, elem, fixture, pair, corrupt = "none";
    std::int64_t a = 1, b = 1;
    std::optional<std::int64_t> eps;
    std::uint64_t trials = 100;
};

struct Outcome {
    Json params = Json::object();
    Json rows = Json::array();
    std::string text;
    int code = kPass;
};

std::uint32_t least_nonsquare(std::uint32_t q) {
    for (std::uint32_t c = 2; c < q; ++c)
        if (!Fq(q, c).sqrt()) return c;
    throw PreconditionError("F_" + std::to_string(q) + " has no nonsquare");
}

Rational rational_or(const std::string& s, const Rational& fallback) { return s.empty() ? fallback : parse_rational(s); }

// Fixtures: [[0, a], [eps a, 0]] at depth 0 and [[0, b], [t b, 0]] at the barycenter.
struct Element {
    LieElement x;
    Rational r_default{0};
};

Element load_element(const RunConfig& cfg) {
    const std::uint32_t q = cfg.q;
    const AlgebraType SL2 = AlgebraType::sp(2);
    auto num = [&](std::int64_t v) { return parse_laurent(std::to_string(v), q); };
    if (!cfg.fixture.empty() && !cfg.elem.empty()) throw PreconditionError("--fixture and --elem are exclusive");
    if (cfg.fixture == "sl2-depth0") {
        if (cfg.a % q == 0) throw PreconditionError("sl2-depth0 needs a unit a");
        const std::int64_t eps = cfg.eps.value_or(least_nonsquare(q));
        Matrix<LaurentNumber> m(2, 2, num(0));
        m(0, 1) = num(cfg.a);
        m(1, 0) = num(eps * cfg.a);
        return {LieElement(SL2, m), 0};
    }
    if (cfg.fixture == "sl2-barycenter") {
        if (cfg.b % q == 0) throw PreconditionError("sl2-barycenter needs a unit b");
        Matrix<LaurentNumber> m(2, 2, num(0));
        m(0, 1) = num(cfg.b);
        m(1, 0) = parse_laurent(std::to_string(cfg.b) + "t", q);
        return {LieElement(SL2, m), Rational(1, 2)};
    }
    if (!cfg.fixture.empty()) throw PreconditionError("unknown fixture '" + cfg.fixture + "' (sl2-depth0, sl2-barycenter)");
    if (cfg.elem.empty()) throw PreconditionError("an element is required: --elem or --fixture");
    return {LieElement(AlgebraType::parse(cfg.algebra), parse_matrix(cfg.elem, q)), 0};
}

Json spoint_json(const SPoint& y) {
    Json j;
    j["y"] = y.str();
    j["R"] = format_poly(y.R);
    if (y.pf) j["pf"] = y.pf->signed_value();
    if (y.v) j["v"] = y.v->signed_value();
    return j;
}

// ---- commands ----

Outcome cmd_reduce(const RunConfig& cfg) {
    Outcome o;
    const Rational r = rational_or(cfg.r, 0);
    const FqPoly R = r_reduction(parse_lpoly(cfg.poly, cfg.q), r, Uniformizer{cfg.uniformizer});
    o.params = {{"q", cfg.q}, {"r", to_string(r)}, {"poly", cfg.poly}};
    o.rows.push_back({{"result", format_poly(R)}});
    o.text = format_poly(R) + "\n";
    return o;
}

Outcome cmd_lift(const RunConfig& cfg) {
    Outcome o;
    const Rational r = rational_or(cfg.r, 0);
    const LPoly P = r_lift(parse_fqpoly(cfg.poly, cfg.q), r, Uniformizer{cfg.uniformizer});
    o.params = {{"q", cfg.q}, {"r", to_string(r)}, {"poly", cfg.poly}};
    o.rows.push_back({{"result", format_poly(P)}});
    o.text = format_poly(P) + "\n";
    return o;
}

Outcome cmd_classify(const RunConfig& cfg) {
    Outcome o;
    const Element e = load_element(cfg);
    const Rational r = rational_or(cfg.r, e.r_default);
    const Classification c = is_restricted(e.x, r, Uniformizer{cfg.uniformizer});
    o.params = {{"algebra", e.x.type().str()}, {"q", cfg.q}, {"r", to_string(r)}, {"elem", e.x.str()}};
    Json row{{"accepted", c.accepted()}};
    if (c.accepted()) {
        row["R"] = format_poly(c.witness->R);
        row["P"] = format_poly(c.witness->P);
        row["m"] = c.witness->m;
        o.text = "restricted: R = " + format_poly(c.witness->R) + ", m = " + std::to_string(c.witness->m) + "\n";
    } else {
        row["reason"] = c.reason;
        o.text = "rejected: " + c.reason + "\n";
    }
    o.rows.push_back(row);
    return o;
}

Outcome cmd_mu(const RunConfig& cfg) {
    Outcome o;
    const Element e = load_element(cfg);
    const Rational r = rational_or(cfg.r, e.r_default);
    const SPoint y = mu(e.x, r, Uniformizer{cfg.uniformizer});
    o.params = {{"algebra", e.x.type().str()}, {"q", cfg.q}, {"r", to_string(r)}, {"elem", e.x.str()}};
    o.rows.push_back(spoint_json(y));
    o.text = y.str() + "\n";
    return o;
}

Outcome cmd_enum_params(const RunConfig& cfg) {
    Outcome o;
    const AlgebraType type = AlgebraType::parse(cfg.algebra);
    const Rational r = rational_or(cfg.r, 0);
    const auto pts = enumerate_S(type, r, cfg.q);
    o.params = {{"algebra", type.str()}, {"q", cfg.q}, {"r", to_string(r)}};
    for (const auto& y : pts) {
        o.rows.push_back(spoint_json(y));
        o.text += y.str() + "\n";
    }
    o.text += std::to_string(pts.size()) + " points\n";
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cmd_volume(const RunConfig& cfg) {
    Outcome o;
    const AlgebraType type = AlgebraType::parse(cfg.algebra);
    const int K = cfg.K ? cfg.K : 2;
    o.params = {{"algebra", type.str()}, {"q", cfg.q}, {"K", K}, {"mode", cfg.mode}, {"seed", cfg.seed}};

    if (cfg.formula.empty() && cfg.formula_file.empty()) {
        // fiber mode: volumes and normalized values of every mu-fiber
        if (cfg.r.empty()) throw PreconditionError("volume needs --formula, --formula-file or --r");
        const Rational r = parse_rational(cfg.r);
        const FiberTable t = fiber_table(type, r, cfg.q, K, cfg.jobs, Uniformizer{cfg.uniformizer});
        o.params["r"] = to_string(r);
        std::ostringstream os;
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            const Rational v = t.volume(i);
            const NormalizedValue n = stable_orbital(t, t.points[i]);
            o.rows.push_back({{"algebra", type.str()}, {"r", to_string(r)}, {"q", cfg.q}, {"K", K},
                              {"y", t.points[i].str()}, {"lower", to_string(v)}, {"upper", to_string(v)},
                              {"normalized", n.str()}, {"seed", cfg.seed}});
            os << t.points[i].str() << "  vol = " << to_string(v) << "  normalized = " << n.str() << "\n";
        }
        os << "restricted mass " << to_string(Rational(t.restricted) / Rational(t.total)) << "\n";
        o.text = os.str();
        return o;
    }

    std::string src = cfg.formula, origin = "formula";
    if (!cfg.formula_file.empty()) {
        if (!cfg.formula.empty()) throw PreconditionError("--formula and --formula-file are exclusive");
        src = read_file(cfg.formula_file);
        origin = cfg.formula_file;
    }
    const Formula f = [&] {
        try {
            return parse_formula(src);
        } catch (const FormulaError& e) {
            throw PreconditionError(origin + ":" + e.what());
        }
    }();
    VolumeOptions opt;
    if (cfg.mode == "exhaustive")
        opt.mode = VolumeMode::Exhaustive;
    else if (cfg.mode == "montecarlo")
        opt.mode = VolumeMode::MonteCarlo;
    else
        throw PreconditionError("unknown mode '" + cfg.mode + "' (exhaustive, montecarlo)");
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.jobs = cfg.jobs;
    opt.u = Uniformizer{cfg.uniformizer};
    const VolumeReport rep = volume(f, type, cfg.q, K, opt);
    o.params["formula"] = f.str();
    Json row{{"algebra", type.str()}, {"r", cfg.r}, {"q", cfg.q}, {"K", K}, {"y", ""},
             {"lower", to_string(rep.lower)}, {"upper", to_string(rep.upper)},
             {"normalized", ""}, {"seed", rep.seed}, {"samples", rep.samples}};
    std::ostringstream os;
    os << "formula " << f.str() << "\n";
    os << "lower " << to_string(rep.lower) << "\nupper " << to_string(rep.upper) << "\n";
    if (rep.mode == VolumeMode::MonteCarlo) {
        std::ostringstream est;
        est << std::setprecision(6) << rep.estimate << " +- " << rep.radius;
        row["estimate"] = est.str();
        os << "estimate " << est.str() << " (99%, " << rep.samples << " samples, seed " << rep.seed << ")\n";
    }
    o.rows.push_back(row);
    o.text = os.str();
    return o;
}

Outcome cmd_fl_check(const RunConfig& cfg) {
    Outcome o;
    const auto slash = cfg.pair.find('/');
    if (slash == std::string::npos) throw PreconditionError("--pair expects g/h or g/h1+h2");
    const AlgebraType g = AlgebraType::parse(cfg.pair.substr(0, slash));
    std::vector<AlgebraType> h;
    std::string rest = cfg.pair.substr(slash + 1);
    for (std::size_t pos = 0;;) {
        const auto plus = rest.find('+', pos);
        h.push_back(AlgebraType::parse(rest.substr(pos, plus - pos)));
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    const Rational r = rational_or(cfg.r, 0);
    const int K = cfg.K ? cfg.K : (r == 0 ? 1 : static_cast<int>(to_int64(floor(r))) + 2);
    Corruption corrupt = Corruption::None;
    if (cfg.corrupt == "delta")
        corrupt = Corruption::DropDeltaFactor;
    else if (cfg.corrupt == "group")
        corrupt = Corruption::DropGroupFactor;
    else if (cfg.corrupt != "none")
        throw PreconditionError("unknown corruption '" + cfg.corrupt + "' (none, delta, group)");

    const FlCheck chk = fl_check(g, h, r, cfg.q, K, cfg.jobs, corrupt);
    o.params = {{"pair", cfg.pair}, {"q", cfg.q}, {"r", to_string(r)}, {"K", K}, {"corrupt", cfg.corrupt}};
    std::ostringstream os;
    for (const auto& row : chk.rows) {
        Json j{{"y", row.y}, {"lhs", row.lhs.str()}, {"rhs", row.rhs.str()}};
        j["torus"] = row.torus_order ? Json(*row.torus_order) : Json(nullptr);
        j["pass"] = row.pass;
        o.rows.push_back(j);
        os << (row.pass ? "PASS  " : "FAIL  ") << row.y << "  lhs = " << row.lhs.str() << "  rhs = " << row.rhs.str();
        if (row.torus_order) os << "  |T(F_q)| = " << *row.torus_order;
        os << "\n";
    }
    os << chk.rows.size() << " points, " << (chk.all_pass() ? "all pass" : "FAILURES") << "\n";
    o.text = os.str();
    o.code = chk.all_pass() ? kPass : kFail;
    return o;
}

void add_check(Outcome& o, const std::string& name, std::uint64_t cases, std::uint64_t failures) {
    o.rows.push_back({{"check", name}, {"cases", cases}, {"failures", failures}, {"pass", failures == 0}});
    o.text += std::string(failures == 0 ? "PASS  " : "FAIL  ") + name + "  (" + std::to_string(cases) + " cases, " +
              std::to_string(failures) + " failures)\n";
    if (failures) o.code = kFail;
}

FiniteFunction random_function(const QuotientSpace& s, std::uint64_t seed, std::uint64_t trial) {
    FiniteFunction f = FiniteFunction::zero(s);
    for (std::size_t i = 0; i < s.size(); ++i)
        f.values[i] = CycInt(s.q(), static_cast<std::int64_t>(splitmix64(seed, trial * s.size() + i) % 7) - 3);
    return f;
}

bool all_ord_at_least(const std::vector<LaurentNumber>& c, int k) {
    for (const auto& v : c)
        if (!v.is_zero() && *v.ord_s() < k) return false;
    return true;
}

std::uint64_t quadric_count(std::uint32_t q, std::int64_t c) {
    std::uint64_t n = 0;
    const std::int64_t Q = q;
    for (std::int64_t x = 0; x < Q; ++x)
        for (std::int64_t y = 0; y < Q; ++y)
            for (std::int64_t z = 0; z < Q; ++z)
                if (((z * z + x * y - c) % Q + Q) % Q == 0) ++n;
    return n;
}

Outcome cmd_fourier_check(const RunConfig& cfg) {
    Outcome o;
    const AlgebraType type = AlgebraType::parse(cfg.algebra);
    const bool bary = cfg.fixture == "sl2-barycenter";
    if (bary && !(type == AlgebraType::sp(2))) throw PreconditionError("the barycenter fixture lives in sl(2)");
    const QuotientSpace s = bary ? QuotientSpace::moy_prasad(type, cfg.q, BuildingPoint::Sl2Barycenter, Rational(1, 2))
                                 : QuotientSpace::moy_prasad(type, cfg.q, BuildingPoint::Hyperspecial, 0);
    if (s.size() > 20000) throw BudgetExceeded("quotient " + s.label() + " has " + std::to_string(s.size()) + " points");
    o.params = {{"algebra", type.str()}, {"q", cfg.q}, {"quotient", s.label()}, {"trials", cfg.trials}, {"seed", cfg.seed}};

    // F(F phi)(X) = |quotient| phi(-X)
    std::uint64_t bad = 0;
    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        const auto phi = random_function(s, cfg.seed, trial);
        const auto back = finite_ft(finite_ft(phi));
        bool ok = back.space == s;
        for (std::size_t x = 0; ok && x < s.size(); ++x)
            ok = back.values[x] == phi.values[s.negate(x)] * static_cast<std::int64_t>(s.size());
        if (!ok) ++bad;
    }
    add_check(o, "double transform", cfg.trials, bad);

    // transform of 1_{Z + g(O)} on t^-1 g(O) / t g(O)
    const QuotientSpace w = QuotientSpace::window(type, cfg.q, -1, 1);
    if (!bary && w.size() <= 2000) {
        const QuotientSpace wd = w.dual();
        const CoordLattice gO{std::vector<int>(static_cast<std::size_t>(type.dim()), 0)};
        const LaurentNumber tinv = LaurentNumber::monomial(ExtField::get(cfg.q, 1).one(), -1);
        const Rational point_mass = Rational(1) / pow(Rational(cfg.q), type.dim()); // vol(t g(O))
        std::uint64_t cases = 0;
        bad = 0;
        for (std::size_t zi = 0; zi < s.size(); ++zi) {
            const auto Z = s.representative(zi).map([&](const LaurentNumber& v) { return v * tinv; });
            auto f = coset_indicator(w, Z, gO);
            f.scale = point_mass;
            auto expected = FiniteFunction::zero(wd); // vol(g(O)) = 1
            for (std::size_t x = 0; x < wd.size(); ++x) {
                const auto X = wd.representative(x);
                if (all_ord_at_least(wd.coordinates(X), 1))
                    expected.values[x] = CycInt::zeta_pow(cfg.q, trace_pairing(X, Z).value());
            }
            ++cases;
            if (!(finite_ft(f) == expected)) ++bad;
        }
        add_check(o, "coset indicator", cases, bad);
    }

    if (!cfg.fixture.empty()) {
        RunConfig fc = cfg;
        const Element e = load_element(fc);
        const std::size_t orb = s.orbit(s.reduce(e.x.matrix())).size();
        std::uint64_t expect = 0;
        if (bary) {
            expect = (cfg.q - 1) / 2; // s -> s^2 on F_q^*
        } else {
            const std::int64_t eps = cfg.eps.value_or(least_nonsquare(cfg.q));
            expect = quadric_count(cfg.q, eps * cfg.a * cfg.a);
        }
        o.params["orbit_size"] = orb;
        add_check(o, "fixture orbit size", 1, orb == expect ? 0 : 1);
    }
    return o;
}

bool nilpotent(const Matrix<Fq>& n) {
    Matrix<Fq> p = n;
    for (std::size_t k = 1; k < n.rows(); ++k) p = p * n;
    for (std::size_t i = 0; i < n.rows(); ++i)
        for (std::size_t j = 0; j < n.cols(); ++j)
            if (!p(i, j).is_zero()) return false;
    return true;
}

Outcome cmd_gauss_check(const RunConfig& cfg) {
    Outcome o;
    RunConfig ec = cfg;
    if (ec.fixture.empty() && ec.elem.empty()) ec.fixture = "sl2-depth0";
    const Element e = load_element(ec);
    const AlgebraType& type = e.x.type();
    const int K = cfg.K ? cfg.K : 2;
    const QuotientSpace s = QuotientSpace::moy_prasad(type, cfg.q, BuildingPoint::Hyperspecial, 0);
    o.params = {{"algebra", type.str()}, {"q", cfg.q}, {"K", K}, {"X", e.x.str()}};

    // Y in g(O): the orbit sum over the reduction of X
    const std::size_t xi = s.reduce(e.x.matrix());
    const auto orbit = s.orbit(xi);
    const auto ft = finite_ft(orbit_indicator(s, xi));
    std::uint64_t bad = 0, group = 0;
    for (std::size_t yi = 0; yi < s.size(); ++yi) {
        const LieElement Y(type, s.representative(yi));
        const GaussValue g = gauss_integral(e.x, Y, K);
        group = g.group_order;
        if (g.group_order % orbit.size() != 0 ||
            !(g.sum == ft.values[yi] * static_cast<std::int64_t>(g.group_order / orbit.size())))
            ++bad;
    }
    o.params["group_order"] = group;
    add_check(o, "orbit formula on g(O)", s.size(), bad);

    // Y = t^-1 N + Y0 with N nonzero nilpotent: vanishes
    const LaurentNumber tinv = LaurentNumber::monomial(ExtField::get(cfg.q, 1).one(), -1);
    std::uint64_t cases = 0;
    bad = 0;
    for (std::size_t ni = 1; ni < s.size(); ++ni) {
        const auto N = s.representative(ni);
        if (!nilpotent(N.map([](const LaurentNumber& v) { return Fq(v.q(), v.coeff_s(0).coeff(0)); }))) continue;
        const auto lead = N.map([&](const LaurentNumber& v) { return v * tinv; });
        for (std::size_t yi = 0; yi < s.size(); ++yi) {
            const LieElement Y(type, lead + s.representative(yi));
            ++cases;
            if (!gauss_integral(e.x, Y, K).sum.is_zero()) ++bad;
        }
    }
    add_check(o, "vanishing on nilpotent t^-1 g(O) cosets", cases, bad);
    return o;
}

std::string iso_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string csv_cell(const Json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : v.is_null() ? "" : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void write_report(const RunConfig& cfg, const std::string& command, const Outcome& o, double seconds) {
    if (cfg.out.empty()) return;
    std::ofstream out(cfg.out);
    if (!out) throw PreconditionError("cannot write " + cfg.out);
    const bool csv = cfg.out.size() >= 4 && cfg.out.compare(cfg.out.size() - 4, 4, ".csv") == 0;
    if (csv) {
        std::vector<std::string> cols;
        for (const auto& row : o.rows)
            for (const auto& [k, v] : row.items())
                if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        if (!cfg.no_timestamp) cols.push_back("runtime");
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << "\n";
        for (const auto& row : o.rows) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                out << (i ? "," : "");
                if (cols[i] == "runtime" && !cfg.no_timestamp)
                    out << seconds;
                else if (row.contains(cols[i]))
                    out << csv_cell(row[cols[i]]);
            }
            out << "\n";
        }
        return;
    }
    Json j;
    j["command"] = command;
    j["params"] = o.params;
    j["rows"] = o.rows;
    j["pass"] = o.code == kPass;
    if (!cfg.no_timestamp) {
        j["timestamp"] = iso_now();
        j["runtime_s"] = seconds;
    }
    out << j.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Restricted elements, finite Fourier transforms and definable volumes over F_q((t))"};
    app.require_subcommand(1);
    RunConfig cfg;
    if (const char* env = std::getenv("ORBVOL_JOBS")) {
        try {
            cfg.jobs = static_cast<unsigned>(std::max(1L, std::stol(env)));
        } catch (const std::exception&) {
            std::cerr << "ORBVOL_JOBS must be a positive integer\n";
            return kUsage;
        }
    }

    auto prime = CLI::Validator(
        [](std::string& s) -> std::string {
            try {
                const auto v = std::stoul(s);
                return is_prime(static_cast<std::uint32_t>(v)) ? "" : "q must be prime";
            } catch (const std::exception&) {
                return "q must be an integer";
            }
        },
        "PRIME");

    auto common = [&](CLI::App* sub) {
        sub->add_option("--q", cfg.q, "residue field size")->check(prime);
        sub->add_option("--r", cfg.r, "slope as L/N");
        sub->add_option("--out", cfg.out, "write a .json or .csv report");
        sub->add_flag("--no-timestamp", cfg.no_timestamp, "omit timestamp and runtime from reports");
        sub->add_option("--uniformizer", cfg.uniformizer, "use c t as the uniformizer")->check(CLI::Range(1u, 1u << 30));
    };
    auto element = [&](CLI::App* sub) {
        sub->add_option("--algebra", cfg.algebra, "sp:2c, so:2c+1, so:2c or sl:2");
        sub->add_option("--elem", cfg.elem, "matrix literal [[a, b], [c, d]]");
        sub->add_option("--fixture", cfg.fixture, "sl2-depth0 or sl2-barycenter");
        sub->add_option("--a", cfg.a, "sl2-depth0 entry a");
        sub->add_option("--eps", cfg.eps, "sl2-depth0 entry eps (default: least nonsquare)");
        sub->add_option("--b", cfg.b, "sl2-barycenter entry b");
    };
    auto parallel = [&](CLI::App* sub) {
        sub->add_option("--jobs", cfg.jobs, "worker threads (default ORBVOL_JOBS or 1)")->check(CLI::Range(1u, 256u));
    };

    auto* reduce = app.add_subcommand("reduce", "print the r-reduction of a polynomial");
    common(reduce);
    reduce->add_option("--poly", cfg.poly, "polynomial in λ and t")->required();
    auto* lift = app.add_subcommand("lift", "print the standard lift of an r-reduced polynomial");
    common(lift);
    lift->add_option("--poly", cfg.poly, "polynomial in λ over F_q")->required();

    auto* classify = app.add_subcommand("classify", "decide whether an element is restricted");
    common(classify);
    element(classify);
    auto* mu_cmd = app.add_subcommand("mu", "print the parameter point of a restricted element");
    common(mu_cmd);
    element(mu_cmd);
    auto* enum_cmd = app.add_subcommand("enum-params", "list the parameter space S_{g,r}(F_q)");
    common(enum_cmd);
    enum_cmd->add_option("--algebra", cfg.algebra)->required();

    auto* vol = app.add_subcommand("volume", "volume of a definable set, or the fiber table at --r");
    common(vol);
    parallel(vol);
    vol->add_option("--algebra", cfg.algebra);
    vol->add_option("--K", cfg.K, "truncation level")->check(CLI::Range(1, 64));
    auto* fopt = vol->add_option("--formula", cfg.formula);
    vol->add_option("--formula-file", cfg.formula_file)->excludes(fopt);
    vol->add_option("--mode", cfg.mode)->check(CLI::IsMember({"exhaustive", "montecarlo"}));
    vol->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
    vol->add_option("--seed", cfg.seed);

    auto* fl = app.add_subcommand("fl-check", "stable face of the fundamental lemma");
    common(fl);
    parallel(fl);
    fl->add_option("--pair", cfg.pair, "g/h or g/h1+h2")->required();
    fl->add_option("--K", cfg.K)->check(CLI::Range(1, 64));
    fl->add_option("--corrupt", cfg.corrupt, "negative control: none, delta or group");

    auto* fc = app.add_subcommand("fourier-check", "Fourier inversion and coset transforms on a finite quotient");
    common(fc);
    fc->add_option("--algebra", cfg.algebra);
    fc->add_option("--fixture", cfg.fixture);
    fc->add_option("--a", cfg.a);
    fc->add_option("--eps", cfg.eps);
    fc->add_option("--b", cfg.b);
    fc->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    fc->add_option("--seed", cfg.seed);

    auto* gc = app.add_subcommand("gauss-check", "Gauss integral orbit formula and vanishing");
    common(gc);
    element(gc);
    gc->add_option("--K", cfg.K)->check(CLI::Range(1, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    }

    const std::pair<CLI::App*, Outcome (*)(const RunConfig&)> table[] = {
        {reduce, cmd_reduce}, {lift, cmd_lift}, {classify, cmd_classify}, {mu_cmd, cmd_mu},
        {enum_cmd, cmd_enum_params}, {vol, cmd_volume}, {fl, cmd_fl_check}, {fc, cmd_fourier_check},
        {gc, cmd_gauss_check},
    };
    for (const auto& [sub, run] : table) {
        if (!sub->parsed()) continue;
        try {
            const auto start = std::chrono::steady_clock::now();
            const Outcome o = run(cfg);
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::cout << o.text;
            write_report(cfg, sub->get_name(), o, seconds);
            return o.code;
        } catch (const PreconditionError& e) {
            std::cerr << e.what() << "\n";
        } catch (const PrecisionExhausted& e) {
            std::cerr << "precision exhausted: " << e.what() << "\n";
        } catch (const BudgetExceeded& e) {
            std::cerr << "budget exceeded: " << e.what() << "\n";
        }
        return kUsage;
    }
    return kUsage;
}
