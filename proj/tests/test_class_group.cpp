#include <doctest.h>

#include "hermgenus/class_group.hpp"

using namespace hermgenus;

namespace {

/* Independent oracle: number of reduced primitive positive definite binary
 * quadratic forms of the given discriminant. */
long reduced_forms_count(long disc) {
    long count = 0;
    for (Int a = 1; 4 * a * a <= Int(-disc) * 4 / 3 + 4; ++a) {
        if (3 * a * a > -disc) break;
        for (Int b = -a; b <= a; ++b) {
            Int num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            Int c = num / (4 * a);
            if (c < a) continue;
            if (b < 0 && (c == a || -b == a)) continue;  // boundary: b >= 0
            if (gcd_int(a, gcd_int(abs_int(b), c)) != 1) continue;
            ++count;
        }
    }
    return count;
}

} // namespace

TEST_CASE("class groups of small fields") {
    ClassGroup C17 = class_group(make_field(-17));
    CHECK(C17.h == 4);
    REQUIRE(C17.invariant_factors.size() == 1);
    CHECK(C17.invariant_factors[0] == 4);

    CHECK(class_group(make_field(-1)).h == 1);
    CHECK(class_group(make_field(-3)).h == 1);

    ClassGroup C5 = class_group(make_field(-5));
    CHECK(C5.h == 2);
    REQUIRE(C5.invariant_factors.size() == 1);
    CHECK(C5.invariant_factors[0] == 2);
}

TEST_CASE("discrete logs round-trip through representatives") {
    ClassGroup C = class_group(make_field(-17));
    for (const auto& [coords, ideal] : C.representatives) {
        CHECK(C.coords_of(ideal) == coords);
    }
    // [P3] generates the Z/4Z class group
    auto P3 = prime_decomposition(C.F, 3)[0];
    CHECK(C.order_of(C.coords_of(P3.ideal)) == 4);
}

TEST_CASE("C0 subgroup for d = -17 has order 2 and index 2") {
    ClassGroup C = class_group(make_field(-17));
    C0Subgroup c0 = c0_subgroup(C);
    CHECK(c0.members.size() == 2);
    CHECK(c0.coset_reps.size() == 2);
    CHECK(c0.coset_reps[0] == whole_ring(C.F));

    auto P3 = prime_decomposition(C.F, 3)[0];
    CHECK_FALSE(c0.contains(C.coords_of(P3.ideal)));
    auto P2 = prime_decomposition(C.F, 2)[0];
    CHECK(c0.contains(C.coords_of(P2.ideal)));
    auto P17 = prime_decomposition(C.F, 17)[0];
    CHECK(c0.contains(C.coords_of(P17.ideal)));
    CHECK(C.coords_of(P17.ideal) == C.zero_coords());
}

TEST_CASE("trivial C0 for class number one") {
    ClassGroup C = class_group(make_field(-1));
    C0Subgroup c0 = c0_subgroup(C);
    CHECK(c0.members.size() == 1);
    CHECK(c0.coset_reps.size() == 1);
    CHECK(c0.coset_reps[0] == whole_ring(C.F));
}

TEST_CASE("class numbers match the reduced-forms oracle for all squarefree -200 <= d < 0") {
    for (long d = -1; d >= -200; --d) {
        if (!is_squarefree_long(d)) continue;
        QuadField F = make_field(d);
        ClassGroup C = class_group(F);
        CHECK_MESSAGE(C.h == reduced_forms_count(F.disc), "d = ", d);
        Int prod = 1;
        for (const auto& f : C.invariant_factors) prod *= f;
        CHECK(prod == C.h);
    }
}

TEST_CASE("ideal-level Hilbert 90: [A conj(A)^-1] trivial iff [A] in C0") {
    for (long d : {-17L, -5L, -21L, -30L, -23L}) {
        ClassGroup C = class_group(make_field(d));
        C0Subgroup c0 = c0_subgroup(C);
        for (const auto& [coords, ideal] : C.representatives) {
            FracIdeal A = coords == C.zero_coords() ? whole_ring(C.F) : ideal;
            auto cls = C.coords_of(mul(A, inv(conj_ideal(A))));
            bool trivial = cls == C.zero_coords();
            CHECK(trivial == c0.contains(coords));
        }
    }
}
