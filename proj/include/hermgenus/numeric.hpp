#ifndef HERMGENUS_NUMERIC_HPP
#define HERMGENUS_NUMERIC_HPP

#include <gmpxx.h>
#include <string>
#include <vector>
#include <climits>

#include "errors.hpp"

namespace hermgenus {

using Int = mpz_class;
using Rat = mpq_class;

// Sentinel for the valuation of 0.
constexpr long kValInfinity = LONG_MAX / 2;

inline Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int pow_int(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

// floor division and the matching nonnegative remainder
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int fmod_int(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline long v_p(const Int& a, const Int& p) {
    if (a == 0) return kValInfinity;
    Int x = abs_int(a);
    long v = 0;
    while (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

inline long v_p(const Rat& a, const Int& p) {
    if (a == 0) return kValInfinity;
    return v_p(Int(a.get_num()), p) - v_p(Int(a.get_den()), p);
}

// gcd of rationals: the generator of the Z-module they span
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    Int num = gcd_int(Int(a.get_num()) * Int(b.get_den()), Int(b.get_num()) * Int(a.get_den()));
    Rat r(num, Int(a.get_den()) * Int(b.get_den()));
    r.canonicalize();
    return abs(r);
}

inline bool is_prime_long(long n) {
    if (n < 2) return false;
    Int m(n);
    return mpz_probab_prime_p(m.get_mpz_t(), 40) != 0;
}

inline bool is_squarefree_long(long n) {
    if (n == 0) return false;
    if (n < 0) n = -n;
    for (long q = 2; q * q <= n; ++q) {
        if (n % (q * q) == 0) return false;
    }
    return true;
}

// Legendre symbol (a|p), p an odd prime
inline int legendre(const Int& a, const Int& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

inline std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
        throw input_error("malformed rational: '" + s + "'");
    if (r.get_den() == 0) throw input_error("zero denominator in rational: '" + s + "'");
    r.canonicalize();
    return r;
}

inline std::vector<long> prime_factors_long(Int n) {
    std::vector<long> out;
    n = abs_int(n);
    if (n <= 1) return out;
    for (Int q = 2; q * q <= n; ++q) {
        if (mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t())) {
            out.push_back(q.get_si());
            while (mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t()))
                mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), q.get_mpz_t());
        }
    }
    if (n > 1) out.push_back(n.get_si());
    return out;
}

} // namespace hermgenus

#endif
