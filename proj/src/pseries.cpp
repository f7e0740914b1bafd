#include "trikernel/pseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace trikernel {

namespace {
// Working window (in exponent units) used when an operation on exact inputs
// has an infinite result. Callers wanting more must truncate inputs first.
constexpr long kExactWindow = 256;

// mpq_class arithmetic assumes canonical operands; normalize everything that
// enters through the public construction surface.
Rat canon(const Rat& r) {
    Rat c = r;
    c.canonicalize();
    return c;
}
} // namespace

PuiseuxSeries PuiseuxSeries::zero(int q, long trunc) {
    PuiseuxSeries s;
    s.q_ = q;
    s.trunc_ = trunc;
    return s;
}

PuiseuxSeries PuiseuxSeries::constant(const Rat& c) {
    PuiseuxSeries s;
    Rat v = canon(c);
    if (v != 0) s.c_[0] = v;
    return s;
}

PuiseuxSeries PuiseuxSeries::monomial(const Rat& c, long num, long den) {
    PuiseuxSeries s;
    s.q_ = static_cast<int>(den);
    Rat v = canon(c);
    if (v != 0) s.c_[num] = v;
    return s;
}

PuiseuxSeries PuiseuxSeries::from_terms(int q, long trunc,
                                        std::initializer_list<std::pair<long, Rat>> terms) {
    PuiseuxSeries s;
    s.q_ = q;
    s.trunc_ = trunc;
    for (const auto& [k, c] : terms) {
        Rat v = canon(c);
        if (v != 0) s.c_[k] = v;
    }
    return s;
}

Rat PuiseuxSeries::coeff(long num, long den) const {
    long long idx_num = static_cast<long long>(num) * q_;
    if (idx_num % den != 0) return Rat(0);
    long idx = static_cast<long>(idx_num / den);
    auto it = c_.find(idx);
    return it == c_.end() ? Rat(0) : it->second;
}

PuiseuxSeries PuiseuxSeries::with_ramification(int q2) const {
    if (q2 == q_) return *this;
    if (q2 % q_ != 0) throw InvalidArgument("ramification must refine the current one");
    long f = q2 / q_;
    PuiseuxSeries r;
    r.q_ = q2;
    r.trunc_ = is_exact() ? kInfTrunc : trunc_ * f;
    for (const auto& [k, c] : c_) r.c_[k * f] = c;
    return r;
}

PuiseuxSeries PuiseuxSeries::truncated(long units) const {
    PuiseuxSeries r;
    r.q_ = q_;
    r.trunc_ = std::min(trunc_, units);
    for (const auto& [k, c] : c_)
        if (k < r.trunc_) r.c_[k] = c;
    return r;
}

PuiseuxSeries PuiseuxSeries::as_exact() const {
    PuiseuxSeries r = *this;
    r.trunc_ = kInfTrunc;
    return r;
}

std::pair<PuiseuxSeries, PuiseuxSeries> aligned(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    int q = std::lcm(a.q_, b.q_);
    return {a.with_ramification(q), b.with_ramification(q)};
}

PuiseuxSeries PuiseuxSeries::operator-() const {
    PuiseuxSeries r = *this;
    for (auto& [k, c] : r.c_) c = -c;
    return r;
}

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    auto [x, y] = aligned(a, b);
    PuiseuxSeries r;
    r.q_ = x.q_;
    r.trunc_ = std::min(x.trunc_, y.trunc_);
    r.c_ = std::move(x.c_);
    for (const auto& [k, c] : y.c_) {
        auto it = r.c_.emplace(k, Rat(0)).first;
        it->second += c;
        if (it->second == 0) r.c_.erase(it);
    }
    for (auto it = r.c_.begin(); it != r.c_.end();)
        it = (it->first >= r.trunc_) ? r.c_.erase(it) : std::next(it);
    return r;
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    auto [x, y] = aligned(a, b);
    PuiseuxSeries r;
    r.q_ = x.q_;
    long t1 = y.is_exact() ? PuiseuxSeries::kInfTrunc : x.valuation() + y.trunc_;
    long t2 = x.is_exact() ? PuiseuxSeries::kInfTrunc : y.valuation() + x.trunc_;
    r.trunc_ = std::min({t1, t2, PuiseuxSeries::kInfTrunc});
    for (const auto& [ka, ca] : x.c_) {
        if (!y.c_.empty() && ka + y.c_.begin()->first >= r.trunc_) break;
        for (const auto& [kb, cb] : y.c_) {
            long k = ka + kb;
            if (k >= r.trunc_) break;
            auto it = r.c_.emplace(k, Rat(0)).first;
            it->second += ca * cb;
            if (it->second == 0) r.c_.erase(it);
        }
    }
    return r;
}

PuiseuxSeries operator*(const PuiseuxSeries& a, const Rat& b) {
    PuiseuxSeries r = a;
    if (b == 0) {
        r.c_.clear();
        return r;
    }
    for (auto& [k, c] : r.c_) c *= b;
    return r;
}

PuiseuxSeries operator/(const PuiseuxSeries& a, const Rat& b) {
    if (b == 0) throw DivisionByZeroSeries("division by zero rational");
    Rat inv_b = 1 / b;
    return a * inv_b;
}

PuiseuxSeries PuiseuxSeries::inverse() const {
    if (c_.empty()) throw DivisionByZeroSeries("inverse of a series with no known terms");
    long v = valuation();
    Rat lead = c_.begin()->second;
    if (is_exact() && c_.size() == 1) {
        PuiseuxSeries r;
        r.q_ = q_;
        Rat inv_lead = 1 / lead;
        r.c_[-v] = inv_lead;
        return r;
    }
    long window; // how many unit-part coefficients we can determine
    if (is_exact()) {
        long span = c_.rbegin()->first - v;
        window = std::max(2 * span + 32, kExactWindow);
    } else {
        window = trunc_ - v;
    }
    std::vector<Rat> u(static_cast<size_t>(window), Rat(0));
    for (const auto& [k, c] : c_) {
        long off = k - v;
        if (off < window) u[static_cast<size_t>(off)] = c / lead;
    }
    std::vector<Rat> e(static_cast<size_t>(window), Rat(0));
    e[0] = 1;
    for (long m = 1; m < window; ++m) {
        Rat s(0);
        for (long j = 1; j <= m; ++j)
            if (u[static_cast<size_t>(j)] != 0 && e[static_cast<size_t>(m - j)] != 0)
                s += u[static_cast<size_t>(j)] * e[static_cast<size_t>(m - j)];
        e[static_cast<size_t>(m)] = -s;
    }
    PuiseuxSeries r;
    r.q_ = q_;
    r.trunc_ = window - v;
    for (long m = 0; m < window; ++m) {
        if (e[static_cast<size_t>(m)] == 0) continue;
        long k = m - v;
        if (k < r.trunc_) r.c_[k] = e[static_cast<size_t>(m)] / lead;
    }
    return r;
}

PuiseuxSeries operator/(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    return a * b.inverse();
}

PuiseuxSeries PuiseuxSeries::pow_int(long n) const {
    if (n == 0) return constant(1);
    if (n < 0) return inverse().pow_int(-n);
    PuiseuxSeries acc = constant(1);
    PuiseuxSeries base = *this;
    long e = n;
    while (true) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e == 0) break;
        base = base * base;
    }
    return acc;
}

bool PuiseuxSeries::operator==(const PuiseuxSeries& other) const {
    auto [x, y] = aligned(*this, other);
    return x.trunc_ == y.trunc_ && x.c_ == y.c_;
}

bool PuiseuxSeries::agrees_with(const PuiseuxSeries& other) const {
    auto [x, y] = aligned(*this, other);
    long T = std::min(x.trunc_, y.trunc_);
    auto below = [T](const std::map<long, Rat>& m) {
        std::map<long, Rat> r;
        for (const auto& [k, c] : m)
            if (k < T) r.emplace(k, c);
        return r;
    };
    return below(x.c_) == below(y.c_);
}

double PuiseuxSeries::eval_double(double t) const {
    double s = 0.0;
    for (const auto& [k, c] : c_)
        s += to_double(c) * std::pow(t, static_cast<double>(k) / q_);
    return s;
}

void PuiseuxSeries::set_term(long k, const Rat& c) {
    Rat v = canon(c);
    if (v == 0)
        c_.erase(k);
    else
        c_[k] = v;
}

std::string PuiseuxSeries::pretty(const std::string& var) const {
    if (c_.empty())
        return is_exact() ? "0"
                          : "O(" + var + "^(" + std::to_string(trunc_) + "/" +
                                std::to_string(q_) + "))";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : c_) {
        Rat a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (k == 0) {
            os << a.get_str();
            continue;
        }
        if (a != 1) os << a.get_str() << "*";
        long g = std::gcd(std::labs(k), static_cast<long>(q_));
        long en = k / g, ed = q_ / g;
        os << var;
        if (!(en == 1 && ed == 1)) {
            if (ed == 1)
                os << "^" << en;
            else
                os << "^(" << en << "/" << ed << ")";
        }
    }
    if (!is_exact()) {
        long g = std::gcd(trunc_, static_cast<long>(q_));
        long en = trunc_ / g, ed = q_ / g;
        os << " + O(" << var << "^";
        if (ed == 1)
            os << en;
        else
            os << "(" << en << "/" << ed << ")";
        os << ")";
    }
    return os.str();
}

PuiseuxSeries sqrt_series(const PuiseuxSeries& a, bool allow_ramification_extension) {
    if (a.known_zero()) {
        if (a.is_exact()) return a;
        return PuiseuxSeries::zero(a.ramification(), a.trunc() / 2);
    }
    PuiseuxSeries x = a;
    if (x.valuation() % 2 != 0) {
        if (!allow_ramification_extension)
            throw NonSquareLeading("odd valuation with ramification extension disabled");
        x = x.with_ramification(2 * x.ramification());
    }
    const long v = x.valuation();
    const int q = x.ramification();
    Rat lead = x.terms().begin()->second;
    auto sl = exact_sqrt(lead);
    if (!sl)
        throw NonSquareLeading("leading coefficient " + lead.get_str() +
                               " is not a rational square");

    const bool exact_in = x.is_exact();
    if (exact_in) {
        long span = x.terms().rbegin()->first - v;
        x = x.truncated(v + std::max(2 * span + 32, kExactWindow));
    }
    const long Ts = x.trunc() - v / 2;  // result truncation
    const long need = Ts - v / 2;       // coefficients beyond the valuation

    // Newton iteration s <- (s + x/s)/2. The partial sum is treated as an
    // exact polynomial between rounds; correctness doubles per round.
    PuiseuxSeries s = PuiseuxSeries::monomial(*sl, v / 2, q).with_ramification(q);
    long correct = 1;
    while (correct < need) {
        correct = std::min(2 * correct, need);
        PuiseuxSeries sx = s.as_exact();
        s = ((sx + x / sx) / Rat(2)).truncated(v / 2 + correct);
    }
    if (exact_in) {
        PuiseuxSeries se = s.as_exact();
        PuiseuxSeries chk = se * se - a;
        if (chk.known_zero() && chk.is_exact()) return se;
    }
    return s.truncated(Ts);
}

PuiseuxSeries solve_fixed_point(const std::function<PuiseuxSeries(const PuiseuxSeries&)>& F,
                                const PuiseuxSeries& seed, int q, long trunc_units,
                                int max_iter) {
    if (max_iter <= 0) max_iter = static_cast<int>(trunc_units) + 16;
    PuiseuxSeries clamp = PuiseuxSeries::zero(q, trunc_units);
    PuiseuxSeries s = seed.with_ramification(q).truncated(trunc_units);
    for (int it = 0; it < max_iter; ++it) {
        PuiseuxSeries next = (clamp + F(s.as_exact()).with_ramification(q)).truncated(trunc_units);
        if (next.agrees_with(s) && next.trunc() >= trunc_units && s.trunc() >= trunc_units)
            return next;
        s = next;
    }
    throw NoConvergence("fixed-point iteration did not stabilize within " +
                        std::to_string(max_iter) + " rounds");
}

std::pair<PuiseuxSeries, PuiseuxSeries> solve_quadratic_roots(const PuiseuxSeries& A,
                                                              const PuiseuxSeries& B,
                                                              const PuiseuxSeries& C) {
    PuiseuxSeries disc = B * B - A * C * Rat(4);
    PuiseuxSeries s = sqrt_series(disc);
    PuiseuxSeries twoA = A * Rat(2);
    PuiseuxSeries r_minus = ((-B) - s) / twoA;
    PuiseuxSeries r_plus = ((-B) + s) / twoA;
    for (const PuiseuxSeries* r : {&r_minus, &r_plus}) {
        PuiseuxSeries res = A * (*r) * (*r) + B * (*r) + C;
        if (!res.known_zero())
            throw Error("QuadraticRootResidual",
                        "root does not satisfy its equation: " + res.pretty());
    }
    return {r_minus, r_plus};
}

std::vector<SeriesQuadruple> to_quadruples(const PuiseuxSeries& s) {
    std::vector<SeriesQuadruple> out;
    for (const auto& [k, c] : s.terms())
        out.push_back({c.get_num().get_str(), c.get_den().get_str(), k, s.ramification()});
    return out;
}

} // namespace trikernel
