#include <doctest.h>

#include "hermgenus/ideal.hpp"

using namespace hermgenus;

namespace {
FracIdeal make(const QuadField& F, long den, long n, long r, long s) {
    FracIdeal I;
    I.F = F;
    I.den = den;
    I.n = n;
    I.r = r;
    I.s = s;
    return I;
}
} // namespace

TEST_CASE("ideal_from_generators canonical forms") {
    QuadField F = make_field(-17);
    FracIdeal P17 = ideal_from_generators({sqrt_d(F)});
    CHECK(P17 == make(F, 1, 17, 0, 1));
    CHECK(P17.norm() == 17);

    FracIdeal P2 = ideal_from_generators({from_int(F, 2), FieldElement(F, 1, 1)});
    CHECK(P2 == make(F, 1, 2, 1, 1));
    CHECK(P2.norm() == 2);

    CHECK(ideal_from_generators({from_int(F, 1)}) == whole_ring(F));
    CHECK_THROWS_AS(ideal_from_generators({from_int(F, 0)}), precondition_error);
}

TEST_CASE("ideal multiplication, inverse and conjugate") {
    QuadField F = make_field(-17);
    FracIdeal P2 = ideal_from_generators({from_int(F, 2), FieldElement(F, 1, 1)});
    CHECK(mul(P2, P2) == ideal_from_generators({from_int(F, 2)}));

    auto threes = prime_decomposition(F, 3);
    REQUIRE(threes.size() == 2);
    FracIdeal P3 = threes[0].ideal;
    CHECK(mul(P3, inv(P3)) == whole_ring(F));

    FracIdeal P17 = ideal_from_generators({sqrt_d(F)});
    CHECK(conj_ideal(P17) == P17);

    // Nr(IJ) = Nr(I)Nr(J), conj multiplicative, I*conj(I) = Nr(I)*O
    FracIdeal I = mul(P3, inv(P2));
    FracIdeal J = mul(P17, P3);
    CHECK(mul(I, J).norm() == I.norm() * J.norm());
    CHECK(conj_ideal(mul(I, J)) == mul(conj_ideal(I), conj_ideal(J)));
    CHECK(mul(I, conj_ideal(I)) == scale_ideal(I.norm(), whole_ring(F)));
}

TEST_CASE("prime decomposition at split, inert and ramified primes") {
    QuadField F = make_field(-17);

    auto p2 = prime_decomposition(F, 2);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].kind == PrimeKind::ramified);
    CHECK(p2[0].ideal == make(F, 1, 2, 1, 1));

    auto p3 = prime_decomposition(F, 3);
    REQUIRE(p3.size() == 2);
    CHECK(p3[0].kind == PrimeKind::split);
    // canonical first prime is (3, 1+sqrt(-17))
    CHECK(p3[0].ideal == make(F, 1, 3, 1, 1));
    CHECK(p3[1].ideal == make(F, 1, 3, 2, 1));
    CHECK(conj_prime(p3[0]) == p3[1]);
    CHECK(mul(p3[0].ideal, p3[1].ideal) == ideal_from_generators({from_int(F, 3)}));

    auto p5 = prime_decomposition(F, 5);
    REQUIRE(p5.size() == 1);
    CHECK(p5[0].kind == PrimeKind::inert);
    CHECK(p5[0].norm() == 25);
}

TEST_CASE("the different and valuations") {
    QuadField F17 = make_field(-17);
    FracIdeal D = different(F17);
    auto P2 = prime_decomposition(F17, 2)[0];
    auto P17 = prime_decomposition(F17, 17)[0];
    auto P3 = prime_decomposition(F17, 3)[0];
    CHECK(valuation(D, P2) == 2);
    CHECK(valuation(D, P17) == 1);
    CHECK(valuation(D, P3) == 0);
    CHECK(D == mul(pow_ideal(P2.ideal, 2), P17.ideal));

    QuadField F5 = make_field(-5);
    FracIdeal D5 = different(F5);
    CHECK(valuation(D5, prime_decomposition(F5, 2)[0]) == 2);
    CHECK(valuation(D5, prime_decomposition(F5, 5)[0]) == 1);

    QuadField F1 = make_field(-1);
    CHECK(valuation(different(F1), prime_decomposition(F1, 2)[0]) == 2);

    CHECK(valuation(ideal_from_generators({from_int(F17, 2)}), P2) == 2);
    CHECK(valuation(whole_ring(F17), P3) == 0);
    CHECK(val_element(sqrt_d(F17), P17) == 1);
    // negative valuations through the denominator
    CHECK(valuation(inv(P2.ideal), P2) == -1);
}

TEST_CASE("principality via Gauss reduction") {
    QuadField F = make_field(-17);
    auto P17 = prime_decomposition(F, 17)[0];
    auto gen = is_principal(P17.ideal);
    REQUIRE(gen.has_value());
    CHECK(*gen == sqrt_d(F));

    auto P2 = prime_decomposition(F, 2)[0];
    CHECK_FALSE(is_principal(P2.ideal).has_value());

    auto one = is_principal(whole_ring(F));
    REQUIRE(one.has_value());
    CHECK(*one == from_int(F, 1));

    // fractional: P17 * P2^-1 is not principal, P17 * O/17 is
    CHECK_FALSE(is_principal(mul(P17.ideal, inv(P2.ideal))).has_value());
    auto g = is_principal(scale_ideal(Rat(1, 17), P17.ideal));
    REQUIRE(g.has_value());
    CHECK(principal_ideal(*g) == scale_ideal(Rat(1, 17), P17.ideal));
}

TEST_CASE("membership and subset tests") {
    QuadField F = make_field(-17);
    auto P2 = prime_decomposition(F, 2)[0];
    CHECK(ideal_contains(P2.ideal, FieldElement(F, 1, 1)));
    CHECK_FALSE(ideal_contains(P2.ideal, from_int(F, 1)));
    CHECK(ideal_subset(mul(P2.ideal, P2.ideal), P2.ideal));
    CHECK_FALSE(ideal_subset(P2.ideal, mul(P2.ideal, P2.ideal)));
}

TEST_CASE("local generators match valuations at every prime above p") {
    QuadField F = make_field(-17);
    auto threes = prime_decomposition(F, 3);
    FracIdeal P3 = threes[0].ideal;
    FieldElement g = local_generator(P3, 3);
    CHECK(val_element(g, threes[0]) == 1);
    CHECK(val_element(g, threes[1]) == 0);

    FracIdeal I = mul(P3, inv(conj_ideal(P3)));
    FieldElement h = local_generator(I, 3);
    CHECK(val_element(h, threes[0]) == 1);
    CHECK(val_element(h, threes[1]) == -1);
}

TEST_CASE("express_one on coprime ideals") {
    QuadField F = make_field(-17);
    auto p3 = prime_decomposition(F, 3);
    auto [u, w] = express_one(p3[0].ideal, p3[1].ideal);
    CHECK(ideal_contains(p3[0].ideal, u));
    CHECK(ideal_contains(p3[1].ideal, w));
    CHECK(u + w == from_int(F, 1));
}

TEST_CASE("unit groups of the exceptional fields") {
    CHECK(unit_group(make_field(-1)).size() == 4);
    CHECK(unit_group(make_field(-3)).size() == 6);
    CHECK(unit_group(make_field(-17)).size() == 2);
    for (long d : {-1L, -3L, -17L})
        for (const auto& u : unit_group(make_field(d))) CHECK(u.norm() == 1);
}
