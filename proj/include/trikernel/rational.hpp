#ifndef TRIKERNEL_RATIONAL_HPP
#define TRIKERNEL_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "trikernel/errors.hpp"

namespace trikernel {

using Int = mpz_class;
using Rat = mpq_class;

inline double to_double(const Rat& r) { return r.get_d(); }
inline double to_double(const Int& n) { return n.get_d(); }

// Exact square root of a rational, if it is the square of a rational.
inline std::optional<Rat> exact_sqrt(const Rat& r) {
    if (sgn(r) < 0) return std::nullopt;
    if (sgn(r) == 0) return Rat(0);
    const Int& num = r.get_num();
    const Int& den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) ||
        !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Int sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    return Rat(sn, sd);
}

// Parses "p/q" or a plain integer/decimal string into a rational.
inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rat r;
        if (r.set_str(s, 10) != 0) throw InvalidArgument("cannot parse rational '" + s + "'");
        r.canonicalize();
        return r;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rat r;
        if (r.set_str(s, 10) != 0) throw InvalidArgument("cannot parse rational '" + s + "'");
        r.canonicalize();
        return r;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    bool neg = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        neg = digits[0] == '-';
        digits = digits.substr(1);
    }
    if (digits.empty()) throw InvalidArgument("cannot parse rational '" + s + "'");
    Int num(digits, 10);
    Int den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(neg ? Int(-num) : num, den);
    r.canonicalize();
    return r;
}

} // namespace trikernel

#endif
