#ifndef HERMGENUS_IDEAL_HPP
#define HERMGENUS_IDEAL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "field.hpp"
#include "zmat.hpp"

namespace hermgenus {

/* A fractional ideal of O in canonical form: den*I has the Hermite-reduced
 * Z-basis { n, r + s*omega } with s | n, s | r, 0 <= r < n, and
 * gcd(den, n, r, s) = 1.  Equal ideals have identical representations. */
struct FracIdeal {
    QuadField F;
    Int den = 1;
    Int n = 1, r = 0, s = 1;

    bool operator==(const FracIdeal& o) const {
        return F == o.F && den == o.den && n == o.n && r == o.r && s == o.s;
    }
    bool operator!=(const FracIdeal& o) const { return !(*this == o); }

    // Z-basis of the ideal itself (denominators folded back in)
    FieldElement basis1() const;  // n/den
    FieldElement basis2() const;  // (r + s*omega)/den

    bool is_integral() const { return den == 1; }
    Rat norm() const {
        Rat v(n * s, den * den);
        v.canonicalize();
        return v;
    }
};

FracIdeal whole_ring(const QuadField& F);

/* Smallest O-ideal containing the generators (at least one nonzero). */
FracIdeal ideal_from_generators(const std::vector<FieldElement>& gens);

/* Ideal spanned over Z by the given elements; the span must already be
 * O-stable (checked).  Used when the generators come from an O-module. */
FracIdeal ideal_from_z_span(const QuadField& F, const std::vector<FieldElement>& gens);

FracIdeal mul(const FracIdeal& I, const FracIdeal& J);
FracIdeal inv(const FracIdeal& I);
FracIdeal conj_ideal(const FracIdeal& I);
FracIdeal scale_ideal(const Rat& c, const FracIdeal& I);
FracIdeal add_ideal(const FracIdeal& I, const FracIdeal& J);
FracIdeal pow_ideal(const FracIdeal& I, long e);
FracIdeal principal_ideal(const FieldElement& x);

bool ideal_contains(const FracIdeal& I, const FieldElement& x);
bool ideal_subset(const FracIdeal& I, const FracIdeal& J);  // I subset of J

enum class PrimeKind { split, inert, ramified };

struct PrimeIdeal {
    long p = 0;
    PrimeKind kind = PrimeKind::inert;
    int residue_degree = 1;
    long omega_root = 0;  // root of the minimal polynomial of omega mod p (split/ramified)
    int index = 0;        // 0 or 1 for split, distinguishing the conjugates
    FracIdeal ideal;

    Int norm() const { return pow_int(Int(p), residue_degree); }
    bool operator==(const PrimeIdeal& o) const { return p == o.p && index == o.index; }
};

// primes of O above p, split pairs ordered by canonical HNF (smaller r first)
std::vector<PrimeIdeal> prime_decomposition(const QuadField& F, long p);

PrimeIdeal conj_prime(const PrimeIdeal& P);

// the different ideal D = (sqrt(disc))
FracIdeal different(const QuadField& F);

long valuation(const FracIdeal& I, const PrimeIdeal& P);
long val_element(const FieldElement& x, const PrimeIdeal& P);  // kValInfinity for 0

/* Generator if principal (canonically signed), nullopt otherwise.  Decided by
 * Gauss reduction of the rank-2 Z-lattice den*I under the norm form. */
std::optional<FieldElement> is_principal(const FracIdeal& I);

/* An element generating I locally at p: val matches at every prime above p. */
FieldElement local_generator(const FracIdeal& I, long p);

/* For coprime integral ideals U + W = O, elements u in U, w in W, u + w = 1. */
std::pair<FieldElement, FieldElement> express_one(const FracIdeal& U, const FracIdeal& W);

/* Integer coefficients writing target in the Z-span of gens, if possible. */
std::optional<std::vector<Int>> express_in_z_span(const std::vector<FieldElement>& gens,
                                                  const FieldElement& target);

// torsion units of O (all units, since d < 0): +-1, +-i for d=-1, powers of zeta_6 for d=-3
std::vector<FieldElement> unit_group(const QuadField& F);

} // namespace hermgenus

#endif
