#ifndef TRIKERNEL_PSERIES_HPP
#define TRIKERNEL_PSERIES_HPP

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "trikernel/rational.hpp"

namespace trikernel {

// Truncated Puiseux series sum_k c_k t^{k/q} with exact rational coefficients.
//
// Exponents are stored as integers over an explicit ramification q, so all
// alignment and truncation bookkeeping stays integral. `trunc` is the first
// unknown exponent (in units of t^{1/q}): the series equals the stored terms
// plus O(t^{trunc/q}). Exact values (constants, monomials) carry an
// effectively infinite truncation. Stored coefficients are never zero.
class PuiseuxSeries {
public:
    static constexpr long kInfTrunc = 1L << 40;

    PuiseuxSeries() : q_(1), trunc_(kInfTrunc) {}
    // exact constant
    explicit PuiseuxSeries(const Rat& c) : q_(1), trunc_(kInfTrunc) {
        Rat v = c;
        v.canonicalize();
        if (v != 0) c_[0] = v;
    }

    static PuiseuxSeries zero(int q = 1, long trunc = kInfTrunc);
    static PuiseuxSeries constant(const Rat& c);
    // c * t^{num/den}
    static PuiseuxSeries monomial(const Rat& c, long num, long den = 1);
    static PuiseuxSeries variable() { return monomial(1, 1); }
    static PuiseuxSeries from_terms(int q, long trunc,
                                    std::initializer_list<std::pair<long, Rat>> terms);

    int ramification() const { return q_; }
    long trunc() const { return trunc_; }
    bool is_exact() const { return trunc_ >= kInfTrunc / 2; }
    // Valuation in units of t^{1/q}; equals trunc() for a (known-)zero series.
    long valuation() const { return c_.empty() ? trunc_ : c_.begin()->first; }
    bool known_zero() const { return c_.empty(); }
    const std::map<long, Rat>& terms() const { return c_; }

    // Coefficient of t^{num/den}. Exponents finer than the ramification are 0.
    Rat coeff(long num, long den = 1) const;

    PuiseuxSeries with_ramification(int q2) const;
    PuiseuxSeries truncated(long units) const; // in own q units

    PuiseuxSeries operator-() const;
    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator/(const PuiseuxSeries& a, const PuiseuxSeries& b);
    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const Rat& b) { return a + constant(b); }
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const Rat& b) { return a - constant(b); }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const Rat& b);
    friend PuiseuxSeries operator/(const PuiseuxSeries& a, const Rat& b);

    PuiseuxSeries inverse() const; // DivisionByZeroSeries when no known terms
    PuiseuxSeries pow_int(long n) const;

    // Exact equality of the known parts up to the common truncation.
    bool agrees_with(const PuiseuxSeries& other) const;
    // Structural equality: same terms and same truncation (after alignment).
    bool operator==(const PuiseuxSeries& other) const;

    // Copy with the truncation marker removed; used by Newton-style loops
    // where the partial sum is re-fed as an exact polynomial.
    PuiseuxSeries as_exact() const;

    double eval_double(double t) const;
    std::string pretty(const std::string& var = "t") const;

    void set_term(long k, const Rat& c); // exponent in units of 1/q

private:
    int q_;
    long trunc_;
    std::map<long, Rat> c_;

    friend std::pair<PuiseuxSeries, PuiseuxSeries> aligned(const PuiseuxSeries&,
                                                           const PuiseuxSeries&);
};

// Square root with positive leading coefficient. The leading coefficient must
// be the square of a rational (NonSquareLeading otherwise, in particular when
// it is negative). An odd valuation doubles the ramification when
// `allow_ramification_extension` is set.
PuiseuxSeries sqrt_series(const PuiseuxSeries& a, bool allow_ramification_extension = true);

// Unique solution of s = F(s) when F is a t-adic contraction: every iteration
// must fix at least one more coefficient. Iterates from `seed` until the
// known part stabilizes below `trunc_units` (in units of 1/q).
PuiseuxSeries solve_fixed_point(const std::function<PuiseuxSeries(const PuiseuxSeries&)>& F,
                                const PuiseuxSeries& seed, int q, long trunc_units,
                                int max_iter = 0);

// Roots of A s^2 + B s + C = 0, returned as (minus branch, plus branch) of
// (-B -+ sqrt(B^2 - 4AC)) / (2A). The residual of each root is checked to
// vanish through the available truncation.
std::pair<PuiseuxSeries, PuiseuxSeries> solve_quadratic_roots(const PuiseuxSeries& A,
                                                              const PuiseuxSeries& B,
                                                              const PuiseuxSeries& C);

// Finite Laurent polynomial in an auxiliary variable z with coefficients in T.
// (1/2pi i) * integral over the unit circle = coefficient of z^{-1}.
template <class T>
class ZSeries {
public:
    ZSeries() = default;
    explicit ZSeries(std::map<int, T> c) : c_(std::move(c)) { prune(); }

    static ZSeries z_power(int k, const T& coeff) {
        ZSeries s;
        s.c_[k] = coeff;
        s.prune();
        return s;
    }

    const std::map<int, T>& terms() const { return c_; }
    bool empty() const { return c_.empty(); }

    T coeff(int k) const {
        auto it = c_.find(k);
        return it == c_.end() ? T() : it->second;
    }
    T residue() const { return coeff(-1); }

    void add_term(int k, const T& v) {
        auto it = c_.emplace(k, T()).first;
        it->second = it->second + v;
        if (is_zero(it->second)) c_.erase(it);
    }

    friend ZSeries operator+(const ZSeries& a, const ZSeries& b) {
        ZSeries r = a;
        for (const auto& [k, v] : b.c_) r.add_term(k, v);
        return r;
    }
    friend ZSeries operator-(const ZSeries& a, const ZSeries& b) {
        ZSeries r = a;
        for (const auto& [k, v] : b.c_) r.add_term(k, T() - v);
        return r;
    }
    friend ZSeries operator*(const ZSeries& a, const ZSeries& b) {
        ZSeries r;
        for (const auto& [ka, va] : a.c_)
            for (const auto& [kb, vb] : b.c_) r.add_term(ka + kb, va * vb);
        return r;
    }
    ZSeries scaled(const T& s) const {
        ZSeries r;
        for (const auto& [k, v] : c_) r.add_term(k, v * s);
        return r;
    }
    // d/dz, term-wise.
    ZSeries dz() const {
        ZSeries r;
        for (const auto& [k, v] : c_)
            if (k != 0) r.add_term(k - 1, v * T(k));
        return r;
    }
    // multiplication by z^m
    ZSeries shifted(int m) const {
        ZSeries r;
        for (const auto& [k, v] : c_) r.c_.emplace(k + m, v);
        return r;
    }
    bool operator==(const ZSeries& o) const { return c_ == o.c_; }

private:
    static bool is_zero(const T& v) { return v == T(); }
    void prune() {
        for (auto it = c_.begin(); it != c_.end();)
            it = is_zero(it->second) ? c_.erase(it) : std::next(it);
    }
    std::map<int, T> c_;
};

using ZRat = ZSeries<Rat>;

// Serialization quadruples [numerator, denominator, exponent numerator,
// ramification], one per stored term.
struct SeriesQuadruple {
    std::string num, den;
    long exp_num;
    int ram;
};
std::vector<SeriesQuadruple> to_quadruples(const PuiseuxSeries& s);

} // namespace trikernel

#endif
