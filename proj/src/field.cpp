#include "hermgenus/field.hpp"

namespace hermgenus {

QuadField make_field(long d) {
    if (d >= 0) throw input_error("d must be negative (imaginary quadratic field)");
    if (!is_squarefree_long(d)) throw input_error("d must be squarefree");
    QuadField F;
    F.d = d;
    long dm4 = ((d % 4) + 4) % 4;
    F.half_omega = (dm4 == 1);
    F.disc = F.half_omega ? d : 4 * d;
    return F;
}

FieldElement omega(const QuadField& F) {
    if (F.half_omega) return FieldElement(F, Rat(1, 2), Rat(1, 2));
    return FieldElement(F, 0, 1);
}

FieldElement sqrt_d(const QuadField& F) { return FieldElement(F, 0, 1); }

FieldElement from_rat(const QuadField& F, const Rat& r) { return FieldElement(F, r, 0); }

FieldElement from_int(const QuadField& F, long n) { return FieldElement(F, Rat(n), 0); }

static void check_same_field(const FieldElement& x, const FieldElement& y) {
    if (x.F != y.F) throw precondition_error("field elements from different fields");
}

FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    check_same_field(x, y);
    return FieldElement(x.F, x.a + y.a, x.b + y.b);
}

FieldElement operator-(const FieldElement& x, const FieldElement& y) {
    check_same_field(x, y);
    return FieldElement(x.F, x.a - y.a, x.b - y.b);
}

FieldElement operator-(const FieldElement& x) { return FieldElement(x.F, -x.a, -x.b); }

FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    check_same_field(x, y);
    // (a + b sqrt d)(a' + b' sqrt d) = aa' + bb'd + (ab' + a'b) sqrt d
    return FieldElement(x.F, x.a * y.a + x.b * y.b * Rat(x.F.d), x.a * y.b + x.b * y.a);
}

FieldElement operator*(const Rat& r, const FieldElement& x) {
    return FieldElement(x.F, r * x.a, r * x.b);
}

FieldElement inv(const FieldElement& x) {
    if (x.is_zero()) throw precondition_error("division by zero field element");
    Rat n = x.norm();
    return FieldElement(x.F, x.a / n, -x.b / n);
}

FieldElement operator/(const FieldElement& x, const FieldElement& y) { return x * inv(y); }

FieldElement pow_elt(const FieldElement& x, long e) {
    FieldElement base = e < 0 ? inv(x) : x;
    unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
    FieldElement r = from_int(x.F, 1);
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

int cmp_elements(const FieldElement& x, const FieldElement& y) {
    int c = cmp(x.a, y.a);
    if (c) return c;
    return cmp(x.b, y.b);
}

std::string to_string(const FieldElement& x) {
    if (x.b == 0) return rat_to_string(x.a);
    std::string s;
    if (x.a != 0) s += rat_to_string(x.a);
    if (x.b > 0 && !s.empty()) s += "+";
    if (x.b == -1) s += "-";
    else if (x.b != 1) s += rat_to_string(x.b) + "*";
    s += "sqrt(" + std::to_string(x.F.d) + ")";
    return s;
}

} // namespace hermgenus
