#include <doctest.h>

#include "hermgenus/local.hpp"
#include "test_util.hpp"

using namespace hermgenus;
using namespace hermgenus::testutil;

namespace {

SpacePtr example_space() {
    QuadField F = make_field(-17);
    EMat g = {{from_int(F, 102), sqrt_d(F)}, {-sqrt_d(F), from_int(F, 0)}};
    return make_space(F, g);
}

SpacePtr identity_space(const QuadField& F, int m) {
    EMat g(m, EVec(m, from_int(F, 0)));
    for (int i = 0; i < m; ++i) g[i][i] = from_int(F, 1);
    return make_space(F, g);
}

SpacePtr diag_space(const QuadField& F, long a, long b) {
    EMat g = {{from_int(F, a), from_int(F, 0)}, {from_int(F, 0), from_int(F, b)}};
    return make_space(F, g);
}

} // namespace

TEST_CASE("local splitting data") {
    QuadField F = make_field(-17);
    LocalData l2 = local_data(F, 2);
    CHECK(l2.kind == PrimeKind::ramified);
    CHECK(l2.e == 2);
    CHECK(l2.e_prime == 1);
    LocalData l17 = local_data(F, 17);
    CHECK(l17.e == 1);
    CHECK(l17.e_prime == 0);
    LocalData l3 = local_data(F, 3);
    CHECK(l3.kind == PrimeKind::split);
    CHECK(l3.e == 0);
    CHECK(l3.e_prime == 0);

    QuadField F2 = make_field(-2);
    CHECK(local_data(F2, 2).e == 3);  // d = 2 mod 4
    QuadField F7 = make_field(-7);
    CHECK(local_data(F7, 2).kind == PrimeKind::split);  // -7 = 1 mod 8
}

TEST_CASE("Jordan decomposition of the example lattice") {
    HermLattice L = free_lattice(example_space());

    auto at2 = jordan_decomposition(L, 2);
    REQUIRE(at2.size() == 1);
    CHECK(at2[0].scale_val == 0);
    CHECK(at2[0].rank == 2);
    CHECK(at2[0].norm_val == 2);
    CHECK(at2[0].is_H_type);  // L_2 is H(0)

    auto at17 = jordan_decomposition(L, 17);
    REQUIRE(at17.size() == 1);
    CHECK(at17[0].scale_val == 1);
    CHECK(at17[0].rank == 2);
    CHECK(at17[0].norm_val == 2);
    CHECK(at17[0].is_H_type);  // L_17 is H(1)

    auto at3 = jordan_decomposition(L, 3);
    REQUIRE(at3.size() == 1);
    CHECK(at3[0].rank == 2);
    CHECK_FALSE(at3[0].is_H_type);
}

TEST_CASE("Jordan decomposition shapes") {
    QuadField F = make_field(-17);
    HermLattice I3 = free_lattice(identity_space(F, 3));
    for (long p : {2L, 3L, 5L, 17L}) {
        auto blocks = jordan_decomposition(I3, p);
        REQUIRE(blocks.size() == 1);
        CHECK(blocks[0].scale_val == 0);
        CHECK(blocks[0].rank == 3);
    }
    HermLattice D = free_lattice(diag_space(F, 1, 3));
    auto blocks = jordan_decomposition(D, 3);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].scale_val == 0);
    CHECK(blocks[0].rank == 1);
    CHECK(blocks[1].scale_val == 1);
    CHECK(blocks[1].rank == 1);
}

TEST_CASE("modularity") {
    HermLattice L = free_lattice(example_space());
    CHECK(is_modular_at(L, 2));
    CHECK(is_modular_at(L, 3));
    CHECK(is_modular_at(L, 17));
    QuadField F = make_field(-17);
    CHECK_FALSE(is_modular_at(free_lattice(diag_space(F, 1, 3)), 3));
    EMat g1 = {{from_int(F, 6)}};
    CHECK(is_modular_at(free_lattice(make_space(F, g1)), 2));
    CHECK(is_modular_at(free_lattice(make_space(F, g1)), 3));
}

TEST_CASE("Jordan invariants do not depend on the pseudo-basis presentation") {
    std::mt19937_64 rng(31);
    for (long d : {-17L, -5L}) {
        QuadField F = make_field(d);
        SpacePtr V = random_space(rng, F, 3);
        HermLattice L = random_lattice(rng, V);
        for (long p : {2L, 3L, 5L}) {
            auto blocks = jordan_decomposition(L, p);
            HermLattice L2 = rewrite_pseudo(rng, L);
            auto blocks2 = jordan_decomposition(L2, p);
            REQUIRE(blocks.size() == blocks2.size());
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                CHECK(blocks[i].scale_val == blocks2[i].scale_val);
                CHECK(blocks[i].rank == blocks2[i].rank);
                CHECK(blocks[i].norm_val == blocks2[i].norm_val);
                CHECK(blocks[i].is_H_type == blocks2[i].is_H_type);
            }
        }
    }
}

TEST_CASE("E1 membership") {
    QuadField F = make_field(-17);
    LocalData l17 = local_data(F, 17);
    LocalData l2 = local_data(F, 2);
    FieldElement minus1 = from_int(F, -1);
    CHECK_FALSE(is_E1_element(minus1, l17));  // v(-2) = 0 < 1
    CHECK(is_E1_element(minus1, l2));         // v_P2(-2) = 2 >= e = 2
    CHECK(is_E1_element(from_int(F, 1), l17));
    CHECK_THROWS_AS(is_E1_element(from_int(F, 2), l17), precondition_error);
    CHECK_THROWS_AS(is_E1_element(minus1, local_data(F, 3)), precondition_error);

    // -1 = u / conj(u) for the local unit u = sqrt(-17) at 2
    FieldElement u = sqrt_d(F);
    CHECK(u / u.conj() == minus1);

    // elements u / conj(u) with u a local unit always land in E1
    std::mt19937_64 rng(37);
    for (long d : {-17L, -5L, -2L}) {
        QuadField G = make_field(d);
        for (long p : prime_factors_long(Int(G.disc))) {
            LocalData ld = local_data(G, p);
            for (int t = 0; t < 12; ++t) {
                FieldElement x = random_element(rng, G, 6);
                if (x.is_zero() || val_element(x, ld.primes[0]) != 0) continue;
                CHECK(is_E1_element(x / x.conj(), ld));
            }
        }
    }
}

TEST_CASE("determinant groups via Theorem main") {
    HermLattice L = free_lattice(example_space());
    CHECK(det_group(L, 2) == DetGroupLabel::E1);
    CHECK(det_group(L, 17) == DetGroupLabel::E1);
    CHECK(det_group(L, 3) == DetGroupLabel::E0);
    CHECK(det_group(L, 5) == DetGroupLabel::E0);

    QuadField F = make_field(-17);
    HermLattice I3 = free_lattice(identity_space(F, 3)); // odd rank
    CHECK(det_group(I3, 2) == DetGroupLabel::E0);
    CHECK(det_group(I3, 17) == DetGroupLabel::E0);

    // parity: H(1) at p=2 (e=2) is not of H type; H(0) at p=17 (e=1) is not
    auto P2 = prime_decomposition(F, 2)[0];
    auto P17 = prime_decomposition(F, 17)[0];
    CHECK(det_group(build_H_lattice(F, P2, 1, 1), 2) == DetGroupLabel::E0);
    CHECK(det_group(build_H_lattice(F, P2, 0, 1), 2) == DetGroupLabel::E1);
    CHECK(det_group(build_H_lattice(F, P17, 0, 1), 17) == DetGroupLabel::E0);
    CHECK(det_group(build_H_lattice(F, P17, 1, 1), 17) == DetGroupLabel::E1);
}

TEST_CASE("corollary direction: scale P^e' inside norm forces E0") {
    std::mt19937_64 rng(41);
    for (long d : {-17L, -5L, -7L}) {
        QuadField F = make_field(d);
        for (long p : prime_factors_long(Int(F.disc))) {
            LocalData ld = local_data(F, p);
            const PrimeIdeal& P = ld.primes[0];
            for (int t = 0; t < 6; ++t) {
                SpacePtr V = random_space(rng, F, 2);
                HermLattice L = random_lattice(rng, V);
                long vs = valuation(scale(L), P), vn = valuation(norm_ideal(L), P);
                if (vs + ld.e_prime >= vn)
                    CHECK(det_group(L, p) == DetGroupLabel::E0);
            }
        }
    }
}

TEST_CASE("rho on H-lattices: H(3) -> H(1), H(2) -> H(0), H(0) and H(1) fixed") {
    QuadField F = make_field(-17);
    for (long p : {2L, 17L}) {
        auto P = prime_decomposition(F, p)[0];
        for (long i : {2L, 3L}) {
            HermLattice H = build_H_lattice(F, P, i, 1);
            HermLattice R = rho(H, P);
            auto blocks = jordan_decomposition(R, p);
            auto expect = jordan_decomposition(build_H_lattice(F, P, i - 2, 1), p);
            REQUIRE(blocks.size() == 1);
            CHECK(blocks[0].scale_val == expect[0].scale_val);
            CHECK(blocks[0].rank == expect[0].rank);
            CHECK(blocks[0].norm_val == expect[0].norm_val);
            CHECK(blocks[0].is_H_type == expect[0].is_H_type);
        }
        for (long i : {0L, 1L}) {
            HermLattice H = build_H_lattice(F, P, i, 1);
            CHECK(rho(H, P) == H);
        }
    }
}

TEST_CASE("Hilbert symbols") {
    CHECK(hilbert_symbol(-1, -1, 2) == -1);
    CHECK(hilbert_symbol(-1, -1, 3) == 1);
    CHECK(hilbert_symbol(2, 3, 5) == 1);
    CHECK(hilbert_symbol_real(-1, -1) == -1);
    CHECK(hilbert_symbol_real(-1, 2) == 1);
    CHECK_THROWS_AS(hilbert_symbol(0, 1, 2), precondition_error);

    std::mt19937_64 rng(43);
    std::uniform_int_distribution<long> pick(-30, 30);
    int tested = 0;
    while (tested < 40) {
        long a = pick(rng), b = pick(rng);
        if (a == 0 || b == 0) continue;
        ++tested;
        // squares are norms everywhere
        for (long p : {2L, 3L, 5L, 7L})
            CHECK(hilbert_symbol(Rat(a * a), Rat(b), p) == 1);
        // multiplicativity in the first slot
        for (long p : {2L, 3L, 5L, 7L, 11L})
            CHECK(hilbert_symbol(Rat(a) * Rat(b), Rat(b), p) ==
                  hilbert_symbol(Rat(a), Rat(b), p) * hilbert_symbol(Rat(b), Rat(b), p));
        // product formula over the support and the real place
        int prod = hilbert_symbol_real(Rat(a), Rat(b));
        std::vector<long> ps = prime_factors_long(Int(2 * a * b));
        for (long p : ps) prod *= hilbert_symbol(Rat(a), Rat(b), p);
        CHECK(prod == 1);
    }
}

TEST_CASE("isotropy of local hermitian spaces") {
    QuadField F = make_field(-17);
    CHECK(is_isotropic(*example_space(), 3));          // split
    CHECK(is_isotropic(*identity_space(F, 3), 17));    // rank 3
    CHECK_FALSE(is_isotropic(*identity_space(F, 1), 2));
    QuadField F1 = make_field(-1);
    CHECK_FALSE(is_isotropic(*identity_space(F1, 2), 2));  // (-1,-1)_2 = -1
    CHECK(is_isotropic(*example_space(), 17));
    CHECK(is_isotropic(*example_space(), 2));
}

TEST_CASE("maximal-lattice determinant criterion") {
    CHECK(det_group_maximal_crosscheck(*example_space(), 17) == DetGroupLabel::E1);
    CHECK(det_group_maximal_crosscheck(*example_space(), 2) == DetGroupLabel::E1);
    QuadField F = make_field(-17);
    CHECK(det_group_maximal_crosscheck(*identity_space(F, 3), 17) == DetGroupLabel::E0);
    CHECK_THROWS_AS(det_group_maximal_crosscheck(*identity_space(F, 2), 3), precondition_error);
    // rank-2 identity Gram: E1 iff -1 is a local norm
    CHECK((det_group_maximal_crosscheck(*identity_space(F, 2), 17) == DetGroupLabel::E1) ==
          is_local_norm(F, -1, 17));

    // agreement with det_group on parity-correct H(s) lattices
    for (long d : {-17L, -5L, -2L, -7L}) {
        QuadField G = make_field(d);
        for (long p : prime_factors_long(Int(G.disc))) {
            LocalData ld = local_data(G, p);
            for (long s : {0L, 1L, 2L, 3L}) {
                if ((s - ld.e) % 2 != 0) continue;
                HermLattice H = build_H_lattice(G, ld.primes[0], s, 1);
                CHECK(det_group(H, p) == DetGroupLabel::E1);
                CHECK(det_group_maximal_crosscheck(*H.space, p) == DetGroupLabel::E1);
            }
        }
    }
}

TEST_CASE("mod-P^N determinant oracle on small fixtures") {
    QuadField F = make_field(-17);
    auto P2 = prime_decomposition(F, 2)[0];

    // H(0) at 2: e = 2, single E1 class
    OracleResult r = mod_PN_det_oracle(build_H_lattice(F, P2, 0, 1), 2, 4);
    CHECK(r.e1_class);
    CHECK_FALSE(r.other_class);

    // H(1) at 2 has the wrong parity: both classes occur
    r = mod_PN_det_oracle(build_H_lattice(F, P2, 1, 1), 2, 5);
    CHECK(r.e1_class);
    CHECK(r.other_class);

    // identity Gram at 17: quasi-reflection tau_{x,-1} gives the other class
    r = mod_PN_det_oracle(free_lattice(identity_space(F, 2)), 17, 3);
    CHECK(r.e1_class);
    CHECK(r.other_class);

    // H(1) at 5 for d = -5: exhaustive single-class run at an odd prime
    QuadField F5 = make_field(-5);
    auto P5 = prime_decomposition(F5, 5)[0];
    r = mod_PN_det_oracle(build_H_lattice(F5, P5, 1, 1), 5, 3);
    CHECK(r.e1_class);
    CHECK_FALSE(r.other_class);

    CHECK_THROWS_AS(mod_PN_det_oracle(free_lattice(identity_space(F, 2)), 17, 1),
                    precondition_error);
    CHECK_THROWS_AS(mod_PN_det_oracle(free_lattice(identity_space(F, 3)), 17, 3),
                    precondition_error);
}
