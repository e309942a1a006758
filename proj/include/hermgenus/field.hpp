#ifndef HERMGENUS_FIELD_HPP
#define HERMGENUS_FIELD_HPP

#include <string>
#include <utility>

#include "numeric.hpp"

namespace hermgenus {

/* The imaginary quadratic field E = Q(sqrt(d)) with ring of integers
 * O = Z[omega], omega = (1+sqrt(d))/2 when d = 1 mod 4 and sqrt(d) otherwise. */
struct QuadField {
    long d = 0;      // squarefree, negative
    long disc = 0;   // d if d = 1 mod 4, else 4d
    bool half_omega = false;  // true iff omega = (1+sqrt(d))/2

    // omega satisfies x^2 - trace_omega*x + norm_omega = 0
    long trace_omega() const { return half_omega ? 1 : 0; }
    Int norm_omega() const { return half_omega ? Int((1 - Int(d)) / 4) : Int(-Int(d)); }

    bool operator==(const QuadField& o) const { return d == o.d; }
    bool operator!=(const QuadField& o) const { return d != o.d; }
};

QuadField make_field(long d);

/* a + b*sqrt(d) with exact rational a, b. */
struct FieldElement {
    QuadField F;
    Rat a, b;

    FieldElement() = default;
    FieldElement(const QuadField& field, Rat ra, Rat rb)
        : F(field), a(std::move(ra)), b(std::move(rb)) {
        a.canonicalize();
        b.canonicalize();
    }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    FieldElement conj() const { return FieldElement(F, a, -b); }
    Rat norm() const { return a * a - Rat(F.d) * b * b; }
    Rat trace() const { return 2 * a; }

    // coordinates over the integral basis {1, omega}
    std::pair<Rat, Rat> omega_coords() const {
        if (F.half_omega) return {a - b, 2 * b};
        return {a, b};
    }
    static FieldElement from_omega(const QuadField& F, const Rat& u, const Rat& v) {
        if (F.half_omega) return FieldElement(F, u + v / 2, v / 2);
        return FieldElement(F, u, v);
    }

    // x in O  <=>  Tr(x) and Nr(x) are rational integers
    bool is_integral() const {
        return trace().get_den() == 1 && norm().get_den() == 1;
    }

    bool operator==(const FieldElement& o) const {
        return F == o.F && a == o.a && b == o.b;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
};

FieldElement omega(const QuadField& F);
FieldElement sqrt_d(const QuadField& F);
FieldElement from_rat(const QuadField& F, const Rat& r);
FieldElement from_int(const QuadField& F, long n);

FieldElement operator+(const FieldElement& x, const FieldElement& y);
FieldElement operator-(const FieldElement& x, const FieldElement& y);
FieldElement operator-(const FieldElement& x);
FieldElement operator*(const FieldElement& x, const FieldElement& y);
FieldElement operator*(const Rat& r, const FieldElement& x);
FieldElement inv(const FieldElement& x);
FieldElement operator/(const FieldElement& x, const FieldElement& y);
FieldElement pow_elt(const FieldElement& x, long e);

// deterministic ordering used when a canonical representative must be picked
int cmp_elements(const FieldElement& x, const FieldElement& y);

std::string to_string(const FieldElement& x);

} // namespace hermgenus

#endif
