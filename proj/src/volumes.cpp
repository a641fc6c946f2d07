#include "orbvol/volumes.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace orbvol {

std::string to_string(VolumeMode m) { return m == VolumeMode::Exhaustive ? "exhaustive" : "montecarlo"; }

namespace {

// Runs fn(begin, end, chunk) over [0, n) split into `jobs` contiguous chunks.
// Chunk results are merged by the caller in chunk order, so the outcome does
// not depend on scheduling.
template <class Fn>
void parallel_chunks(std::uint64_t n, unsigned jobs, Fn fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::uint64_t>(1, n / 64))));
    if (jobs == 1) {
        fn(0, n, 0u);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned c = 0; c < jobs; ++c) {
        const std::uint64_t b = n * c / jobs, e = n * (c + 1) / jobs;
        pool.emplace_back([&, b, e, c] {
            try {
                fn(b, e, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    pool.clear(); // joins
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

unsigned chunk_count(std::uint64_t n, unsigned jobs) {
    return std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::uint64_t>(1, n / 64))));
}

BigInt qpow(std::uint32_t q, std::int64_t e) {
    BigInt v = 1;
    for (std::int64_t i = 0; i < e; ++i) v *= q;
    return v;
}

struct Tally {
    std::uint64_t yes = 0, unknown = 0;
};

} // namespace

VolumeReport volume(const Formula& f, const AlgebraType& type, std::uint32_t q, int K, const VolumeOptions& opt) {
    const LatticeEnumerator lat(type, q, K);
    VolumeReport rep;
    rep.mode = opt.mode;
    rep.K = K;
    rep.seed = opt.seed;
    const std::size_t slots = static_cast<std::size_t>(type.dim()) * static_cast<std::size_t>(K);

    const bool exhaustive = opt.mode == VolumeMode::Exhaustive;
    if (exhaustive && lat.size() > kExhaustiveBudget)
        throw BudgetExceeded("exhaustive volume over q^(K dim) = " + std::to_string(lat.size()) + " points (limit 10^7)");
    const std::uint64_t n = exhaustive ? lat.size() : opt.samples;
    if (n == 0) throw PreconditionError("Monte Carlo volume needs at least one sample");

    std::vector<Tally> tallies(chunk_count(n, opt.jobs));
    parallel_chunks(n, opt.jobs, [&](std::uint64_t b, std::uint64_t e, unsigned c) {
        Tally t;
        std::vector<std::uint32_t> digits(slots);
        for (std::uint64_t i = b; i < e; ++i) {
            std::uint64_t idx = i;
            if (!exhaustive) {
                for (std::size_t s = 0; s < slots; ++s)
                    digits[s] = static_cast<std::uint32_t>(splitmix64(opt.seed, i * slots + s) % q);
                idx = lat.index_of(digits);
            }
            switch (eval(f, type, lat.element(idx), opt.u)) {
            case Truth::True:
                ++t.yes;
                break;
            case Truth::Unknown:
                ++t.unknown;
                break;
            case Truth::False:
                break;
            }
        }
        tallies[c] = t;
    });
    Tally total;
    for (const auto& t : tallies) {
        total.yes += t.yes;
        total.unknown += t.unknown;
    }
    if (total.unknown == n) throw PrecisionExhausted("the formula is undecidable on every point at K = " + std::to_string(K));
    rep.samples = n;
    rep.lower = Rational(total.yes) / Rational(n);
    rep.upper = Rational(total.yes + total.unknown) / Rational(n);
    if (!exhaustive) {
        rep.estimate = static_cast<double>(total.yes) / static_cast<double>(n);
        rep.radius = kZ99 * std::sqrt(rep.estimate * (1 - rep.estimate) / static_cast<double>(n));
    } else {
        rep.estimate = static_cast<double>(rep.lower);
    }
    return rep;
}

BigInt order_polynomial(const AlgebraType& type, std::uint32_t q) {
    const int c = type.c;
    BigInt v = 1;
    if (type.family == Family::SOeven) {
        v = qpow(q, static_cast<std::int64_t>(c) * (c - 1)) * (qpow(q, c) - 1);
        for (int i = 1; i < c; ++i) v *= qpow(q, 2 * i) - 1;
    } else {
        v = qpow(q, static_cast<std::int64_t>(c) * c);
        for (int i = 1; i <= c; ++i) v *= qpow(q, 2 * i) - 1;
    }
    return v;
}

BigInt group_order(const AlgebraType& type, std::uint32_t q) {
    const BigInt formula = order_polynomial(type, q);
    if (formula > 300'000) return formula;
    const BigInt counted = enumerate_group(type, q).size();
    if (counted != formula)
        throw std::logic_error("group order mismatch for " + type.str() + ": enumerated " + counted.str() +
                               ", formula " + formula.str());
    return counted;
}

std::uint64_t centralizer_order(const AlgebraType& type, const Matrix<Fq>& x) {
    std::uint64_t n = 0;
    for (const auto& g : enumerate_group(type, x(0, 0).q()))
        if (g * x == x * g) ++n;
    return n;
}

NormalizationData normalization(const AlgebraType& type, std::uint32_t q) {
    NormalizationData d;
    d.group_order = group_order(type, q);
    d.dim = type.dim();
    d.rank = type.rank();
    d.delta = d.dim - d.rank;
    d.group_factor = Rational(d.group_order) / Rational(qpow(q, d.dim));
    return d;
}

// ---- fibers ----

Rational FiberTable::volume(std::size_t i) const {
    return Rational(counts.at(i)) / Rational(total);
}

std::optional<std::size_t> FiberTable::find(const SPoint& y) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] == y) return i;
    return std::nullopt;
}

FiberTable fiber_table(const AlgebraType& type, const Rational& r, std::uint32_t q, int K, unsigned jobs, Uniformizer u) {
    const LatticeEnumerator lat(type, q, K);
    if (lat.size() > kExhaustiveBudget)
        throw BudgetExceeded("fiber table over q^(K dim) = " + std::to_string(lat.size()) + " points (limit 10^7)");
    FiberTable t;
    t.type = type;
    t.r = r;
    t.q = q;
    t.K = K;
    t.points = enumerate_S(type, r, q);
    t.total = lat.size();
    std::map<std::string, std::size_t> key;
    for (std::size_t i = 0; i < t.points.size(); ++i) key.emplace(t.points[i].str(), i);

    struct Part {
        std::vector<std::uint64_t> counts;
        std::vector<std::optional<std::uint64_t>> first;
        std::uint64_t restricted = 0, unknown = 0;
    };
    std::vector<Part> parts(chunk_count(lat.size(), jobs));
    parallel_chunks(lat.size(), jobs, [&](std::uint64_t b, std::uint64_t e, unsigned c) {
        Part p;
        p.counts.assign(t.points.size(), 0);
        p.first.assign(t.points.size(), std::nullopt);
        for (std::uint64_t i = b; i < e; ++i) {
            try {
                const LieElement x(type, lat.element(i));
                if (!is_restricted(x, r, u).accepted()) continue;
                const SPoint y = mu(x, r, u);
                const auto it = key.find(y.str());
                if (it == key.end()) throw std::logic_error("mu landed outside the parameter space: " + y.str());
                ++p.counts[it->second];
                if (!p.first[it->second]) p.first[it->second] = i;
                ++p.restricted;
            } catch (const PrecisionExhausted&) {
                ++p.unknown;
            }
        }
        parts[c] = std::move(p);
    });
    t.counts.assign(t.points.size(), 0);
    t.first_index.assign(t.points.size(), std::nullopt);
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            t.counts[i] += p.counts[i];
            if (!t.first_index[i]) t.first_index[i] = p.first[i];
        }
        t.restricted += p.restricted;
        t.unknown += p.unknown;
    }
    return t;
}

NormalizedValue stable_orbital(const FiberTable& table, const SPoint& y, Corruption c) {
    if (!(y.algebra == table.type) || y.r != table.r)
        throw PreconditionError("stable_orbital: point " + y.str() + " does not belong to the table for " + table.type.str());
    if (table.unknown > 0)
        throw PrecisionExhausted("stable_orbital: " + std::to_string(table.unknown) + " points undecidable at K = " +
                                 std::to_string(table.K) + "; raise K");
    const auto i = table.find(y);
    const Rational vol = i ? table.volume(*i) : Rational(0);
    const NormalizationData nd = normalization(table.type, table.q);
    const Rational coeff = c == Corruption::DropGroupFactor ? vol : vol / nd.group_factor;
    const Rational expo = c == Corruption::DropDeltaFactor ? Rational(0) : table.r * nd.delta / 2;
    return NormalizedValue(coeff, expo, table.q);
}

NormalizedValue stable_orbital(const SPoint& y, std::uint32_t q, int K, unsigned jobs) {
    return stable_orbital(fiber_table(y.algebra, y.r, q, K, jobs), y);
}

// ---- fundamental lemma, stable face ----

bool FlCheck::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const FlRow& r) { return r.pass; });
}

namespace {

std::optional<std::uint64_t> torus_of(const FiberTable& t, std::size_t i) {
    if (t.r != 0 || !t.first_index[i]) return std::nullopt;
    const LatticeEnumerator lat(t.type, t.q, t.K);
    const Matrix<LaurentNumber> x = lat.element(*t.first_index[i]);
    const Matrix<Fq> xbar = x.map([](const LaurentNumber& v) { return Fq(v.q(), v.coeff_s(0).coeff(0)); });
    return centralizer_order(t.type, xbar);
}

} // namespace

FlCheck fl_check(const AlgebraType& g, const std::vector<AlgebraType>& h, const Rational& r, std::uint32_t q, int K,
                 unsigned jobs, Corruption corrupt) {
    FlCheck out;
    const FiberTable tg = fiber_table(g, r, q, K, jobs);
    if (h.size() == 1) {
        if (!(h[0] == g)) throw PreconditionError("fl_check: a single h must equal g");
        const FiberTable th = fiber_table(h[0], r, q, K, jobs);
        for (std::size_t i = 0; i < tg.points.size(); ++i) {
            FlRow row;
            row.y = tg.points[i].str();
            row.lhs = stable_orbital(tg, tg.points[i], corrupt);
            row.rhs = stable_orbital(th, th.points.at(i));
            row.torus_order = torus_of(tg, i);
            row.pass = row.lhs == row.rhs;
            out.rows.push_back(std::move(row));
        }
        return out;
    }
    if (h.size() != 2 || !is_endoscopic_pair(g, h[0], h[1]))
        throw PreconditionError("fl_check: h must be g or an endoscopic pair h1 x h2 for " + g.str());
    const FiberTable t1 = fiber_table(h[0], r, q, K, jobs);
    const FiberTable t2 = fiber_table(h[1], r, q, K, jobs);
    for (const SPoint& y1 : t1.points)
        for (const SPoint& y2 : t2.points) {
            const SPairPoint pair{y1, y2};
            if (!in_S_gh(g, pair)) continue;
            const SPoint y = image(g, pair);
            FlRow row;
            row.y = y.str();
            row.lhs = stable_orbital(tg, y, corrupt);
            row.rhs = stable_orbital(t1, y1) * stable_orbital(t2, y2);
            if (const auto i = tg.find(y)) row.torus_order = torus_of(tg, *i);
            row.pass = row.lhs == row.rhs;
            out.rows.push_back(std::move(row));
        }
    return out;
}

} // namespace orbvol
