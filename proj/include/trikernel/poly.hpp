#ifndef TRIKERNEL_POLY_HPP
#define TRIKERNEL_POLY_HPP

#include <cstddef>
#include <vector>

namespace trikernel {

// Dense univariate polynomial over a ring T, coefficients ascending.
template <class T>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<T>& coeffs() const { return c_; }

    T coeff(size_t k) const { return k < c_.size() ? c_[k] : T(); }
    void set_coeff(size_t k, const T& v) {
        if (k >= c_.size()) c_.resize(k + 1, T());
        c_[k] = v;
        trim();
    }

    // Horner evaluation; U must be constructible from T.
    template <class U>
    U eval(const U& x) const {
        U acc = U();
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + U(c_[i]);
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<T> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<int>(i));
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T());
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T());
        for (size_t i = 0; i < a.c_.size(); ++i) r[i] = r[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] - b.c_[i];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c_.empty() || b.c_.empty()) return Poly();
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T());
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const T& s) {
        std::vector<T> r = a.c_;
        for (auto& v : r) v = v * s;
        return Poly(std::move(r));
    }
    bool operator==(const Poly& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == T()) c_.pop_back();
    }
    std::vector<T> c_;
};

// Synthetic division of a double polynomial by (x - root); the remainder is
// dropped (callers deflate at numerically computed roots).
inline Poly<double> poly_deflate(const Poly<double>& p, double root) {
    long deg = p.degree();
    if (deg < 1) return Poly<double>();
    std::vector<double> q(static_cast<size_t>(deg), 0.0);
    double acc = p.coeff(static_cast<size_t>(deg));
    for (long k = deg - 1; k >= 0; --k) {
        q[static_cast<size_t>(k)] = acc;
        acc = p.coeff(static_cast<size_t>(k)) + acc * root;
    }
    return Poly<double>(std::move(q));
}

} // namespace trikernel

#endif
