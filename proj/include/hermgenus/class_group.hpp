#ifndef HERMGENUS_CLASS_GROUP_HPP
#define HERMGENUS_CLASS_GROUP_HPP

#include <map>
#include <tuple>
#include <vector>

#include "ideal.hpp"

namespace hermgenus {

/* Positive definite binary quadratic form of the field discriminant, used as
 * the canonical label of an ideal class. */
struct QForm {
    Int a, b, c;
    bool operator<(const QForm& o) const {
        return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
    bool operator==(const QForm& o) const { return a == o.a && b == o.b && c == o.c; }
};

QForm form_of_ideal(const FracIdeal& I);
QForm reduce_form(QForm f, long disc);
FracIdeal ideal_of_form(const QuadField& F, const QForm& f);

/* The class group C, with discrete logarithms through reduced forms.
 * Coordinates live in prod Z/d_i over the invariant factors d_1 | d_2 | ... */
struct ClassGroup {
    QuadField F;
    Int h = 1;
    std::vector<Int> invariant_factors;        // the d_i > 1
    std::vector<PrimeIdeal> generating_primes;
    std::map<QForm, std::vector<Int>> dlog;            // reduced form -> coords
    std::map<std::vector<Int>, FracIdeal> representatives;  // coords -> reduced ideal

    std::vector<Int> zero_coords() const {
        return std::vector<Int>(invariant_factors.size(), 0);
    }
    std::vector<Int> add(const std::vector<Int>& x, const std::vector<Int>& y) const;
    std::vector<Int> neg(const std::vector<Int>& x) const;
    std::vector<Int> coords_of(const FracIdeal& I) const;
    long order_of(const std::vector<Int>& coords) const;
    FracIdeal representative(const std::vector<Int>& coords) const;
};

ClassGroup class_group(const QuadField& F);

/* C0 = subgroup generated by the classes of ramified primes, with coset
 * representatives A_1 = O, A_2, ... of C/C0. */
struct C0Subgroup {
    std::vector<std::vector<Int>> members;  // sorted coordinate vectors
    std::vector<std::vector<Int>> coset_coords;
    std::vector<FracIdeal> coset_reps;      // coset_reps[0] = O

    bool contains(const std::vector<Int>& coords) const;
    // index i with [I] in [A_i]*C0
    int coset_index(const ClassGroup& C, const std::vector<Int>& coords) const;
};

C0Subgroup c0_subgroup(const ClassGroup& C);

} // namespace hermgenus

#endif
