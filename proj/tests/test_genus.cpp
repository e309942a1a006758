#include <doctest.h>

#include <set>

#include "hermgenus/genus.hpp"
#include "test_util.hpp"

using namespace hermgenus;
using namespace hermgenus::testutil;

namespace {

SpacePtr example_space() {
    QuadField F = make_field(-17);
    EMat g = {{from_int(F, 102), sqrt_d(F)}, {-sqrt_d(F), from_int(F, 0)}};
    return make_space(F, g);
}

} // namespace

TEST_CASE("determinant profile of the example lattice") {
    HermLattice L = free_lattice(example_space());
    DetProfile prof = det_profile(L);
    CHECK(prof.primes == std::vector<long>{2, 17});

    QuadField F = make_field(-17);
    EMat id3(3, EVec(3, from_int(F, 0)));
    for (int i = 0; i < 3; ++i) id3[i][i] = from_int(F, 1);
    CHECK(det_profile(free_lattice(make_space(F, id3))).primes.empty());
}

TEST_CASE("R(L) for the example: order 2, index 2, computed embedding (0,1)") {
    HermLattice L = free_lattice(example_space());
    DetProfile prof = det_profile(L);
    RSubgroup R = r_subgroup(prof, L.space->F);
    CHECK(R.order() == 2);
    CHECK((1 << prof.primes.size()) / R.order() == 2);  // [E(L) : R(L)] = 2
    // -1 is E1 at 2 (e=2, v(-2)=2) but not at 17: embedding is not diagonal
    SignVec v = sign_vector(prof, from_int(L.space->F, -1));
    CHECK(v == SignVec{0, 1});
    CHECK(R.reduce(v) == SignVec{0, 0});
    CHECK(sign_vector(prof, from_int(L.space->F, 1)) == SignVec{0, 0});
}

TEST_CASE("cocycle data for d = -17") {
    ClassGroup C = class_group(make_field(-17));
    C0Subgroup c0 = c0_subgroup(C);
    REQUIRE(c0.coset_reps.size() == 2);
    // alpha_{1,j} is a unit
    for (int j = 0; j < 2; ++j) {
        FieldElement a = cocycle_alpha(C, c0, 0, j);
        CHECK(principal_ideal(a) == whole_ring(C.F));
        CHECK(k_index(C, c0, 0, j) == j);
    }
    // symmetry
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(k_index(C, c0, i, j) == k_index(C, c0, j, i));
            FieldElement a = cocycle_alpha(C, c0, i, j);
            FieldElement b = cocycle_alpha(C, c0, j, i);
            FieldElement q = a / b;
            CHECK(q.norm() == 1);
            CHECK(q.is_integral());  // torsion unit
        }
    // k(2,2) = 1 in 1-based terms: squares land in C0
    CHECK(k_index(C, c0, 1, 1) == 0);
    FieldElement a22 = cocycle_alpha(C, c0, 1, 1);
    FracIdeal A2 = c0.coset_reps[1];
    CHECK(principal_ideal(a22) ==
          mul(mul(conj_ideal(A2), inv(A2)), mul(conj_ideal(A2), inv(A2))));
}

TEST_CASE("G(L) of the example lattice is cyclic of order 4") {
    HermLattice L = free_lattice(example_space());
    GenusGroup G = genus_group(L);
    CHECK(G.order() == 4);
    CHECK(G.invariant_factors() == std::vector<long>{4});

    // |G| = [C:C0][E(L):R(L)]
    long cosets = (long)G.c0.coset_reps.size();
    long quo = (long)((1 << G.profile.primes.size()) / G.R.order());
    CHECK(G.order() == cosets * quo);

    auto P3 = prime_decomposition(L.space->F, 3)[0];
    auto g = psi_neighbour_generator(L, G, P3);
    CHECK(G.element_order(g) == 4);
}

TEST_CASE("psi images: principal split primes off P(L) give the identity") {
    HermLattice L = free_lattice(example_space());
    GenusGroup G = genus_group(L);
    // 53 = Nr(6 + sqrt(-17)) splits into principal primes; class and c(P) trivial
    auto primes53 = prime_decomposition(L.space->F, 53);
    REQUIRE(primes53.size() == 2);
    REQUIRE(is_principal(primes53[0].ideal).has_value());
    auto g = psi_neighbour_generator(L, G, primes53[0]);
    CHECK(g == G.identity());
}

TEST_CASE("neighbour at the split prime 3 drives the example chain") {
    SpacePtr V = example_space();
    const QuadField& F = V->F;
    HermLattice L = free_lattice(V);
    auto threes = prime_decomposition(F, 3);
    const PrimeIdeal& P3 = threes[0];

    HermLattice L1 = neighbour(L, P3);
    FracIdeal PPbar = mul(P3.ideal, inv(threes[1].ideal));
    CHECK(index_ideal(L, L1) == PPbar);
    CHECK(neighbour(L, P3) == L1);  // deterministic

    // the lattice P3 x + conj(P3)^-1 y is itself a P3-neighbour of L
    EVec x = {from_int(F, 1), from_int(F, 0)};
    EVec y = {from_int(F, 0), from_int(F, 1)};
    HermLattice paperL1 =
        lattice_from_pseudo(V, {{threes[0].ideal, x}, {inv(threes[1].ideal), y}});
    CHECK(index_ideal(L, paperL1) == PPbar);
    HermLattice N = intersect(L, paperL1);
    CHECK(z_module_index(L, N) == 3);
    CHECK(z_module_index(paperL1, N) == 3);
    CHECK(is_sublattice(scale_by_ideal(threes[0].ideal, L), N));
    CHECK(is_sublattice(scale_by_ideal(threes[1].ideal, paperL1), N));

    HermLattice L2 = neighbour(L1, P3, L);
    CHECK(L2 != L);
    CHECK(index_ideal(L, L2) == mul(PPbar, PPbar));
    HermLattice L3 = neighbour(L2, P3, L1);
    CHECK(L3 != L1);
    CHECK(index_ideal(L, L3) == mul(PPbar, mul(PPbar, PPbar)));

    // round trip in genus terms: L fulfils the conj(P3)-neighbour contract for L1
    CHECK(index_ideal(L1, L) == mul(threes[1].ideal, inv(threes[0].ideal)));
    HermLattice N2 = intersect(L1, L);
    CHECK(z_module_index(L1, N2) == 3);
    CHECK(is_sublattice(scale_by_ideal(threes[1].ideal, L1), N2));
    CHECK(is_sublattice(scale_by_ideal(threes[0].ideal, L), N2));
}

TEST_CASE("neighbour contract on random modular pairs") {
    std::mt19937_64 rng(47);
    int done = 0;
    for (long d : {-17L, -5L, -2L, -7L, -1L, -3L}) {
        QuadField F = make_field(d);
        for (int t = 0; t < 6 && done < 18; ++t) {
            SpacePtr V = random_space(rng, F, 2 + (t % 2));
            HermLattice L = random_lattice(rng, V);
            for (long p : {3L, 5L, 7L}) {
                auto primes = prime_decomposition(F, p);
                const PrimeIdeal& P = primes[0];
                if (P.kind == PrimeKind::ramified && p == 2) continue;
                if (!is_isotropic(*V, p)) continue;
                if (!is_modular_at(L, p)) continue;
                // neighbour() verifies the full contract internally
                HermLattice Lp = neighbour(L, P);
                CHECK(index_ideal(L, Lp) == mul(P.ideal, inv(conj_prime(P).ideal)));
                ++done;
                break;
            }
        }
    }
    CHECK(done >= 10);
}

TEST_CASE("prime search finds the order-4 generator at 3") {
    HermLattice L = free_lattice(example_space());
    GenusGroup G = genus_group(L);
    auto gens = prime_search(L, G);
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].P.p == 3);
    CHECK(gens[0].order == 4);
}

TEST_CASE("special genera of the example lattice") {
    SpacePtr V = example_space();
    HermLattice L = free_lattice(V);
    SpecialGenera S = special_genera(L);
    CHECK(S.group.order() == 4);
    REQUIRE(S.reps.size() == 4);

    auto threes = prime_decomposition(V->F, 3);
    FracIdeal PPbar = mul(threes[0].ideal, inv(threes[1].ideal));
    FracIdeal acc = whole_ring(V->F);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(S.reps[i].index == acc);
        acc = mul(acc, PPbar);
    }
    // distinct labels exhausting G
    std::set<GenusGroup::Elt> labels;
    for (const auto& rep : S.reps) labels.insert(rep.label);
    CHECK(labels.size() == 4);

    // members differ from L only at 3: Jordan invariants elsewhere match
    for (const auto& rep : S.reps) {
        for (long p : {2L, 17L}) {
            auto a = jordan_decomposition(rep.lattice, p);
            auto b = jordan_decomposition(L, p);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].scale_val == b[i].scale_val);
                CHECK(a[i].rank == b[i].rank);
                CHECK(a[i].norm_val == b[i].norm_val);
                CHECK(a[i].is_H_type == b[i].is_H_type);
            }
        }
        // at 3 the Jordan type also matches (locally isometric neighbours)
        auto a = jordan_decomposition(rep.lattice, 3);
        auto b = jordan_decomposition(L, 3);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].scale_val == b[i].scale_val);
            CHECK(a[i].rank == b[i].rank);
        }
    }
}

TEST_CASE("trivial genus group returns the lattice itself") {
    QuadField F = make_field(-1);
    EMat id2 = {{from_int(F, 1), from_int(F, 0)}, {from_int(F, 0), from_int(F, 1)}};
    HermLattice L = free_lattice(make_space(F, id2));
    SpecialGenera S = special_genera(L);
    CHECK(S.group.order() == 1);
    REQUIRE(S.reps.size() == 1);
    CHECK(S.reps[0].lattice == L);
}

TEST_CASE("psi homomorphism property over used prime pairs") {
    HermLattice L = free_lattice(example_space());
    GenusGroup G = genus_group(L);
    const QuadField& F = L.space->F;
    std::vector<PrimeIdeal> usable;
    for (long p : {3L, 7L, 11L, 13L}) {
        for (const auto& P : prime_decomposition(F, p)) {
            if (P.kind == PrimeKind::inert) continue;
            usable.push_back(P);
        }
    }
    for (const auto& P : usable)
        for (const auto& Q : usable) {
            auto gP = psi_neighbour_generator(L, G, P);
            auto gQ = psi_neighbour_generator(L, G, Q);
            // direct image of the product pair (P Pbar^-1 Q Qbar^-1, c(P)c(Q)):
            // the J-part is B conj(B)^-1 for B = PQ, so i is the coset of [PQ]
            FracIdeal J = mul(mul(P.ideal, inv(conj_prime(P).ideal)),
                              mul(Q.ideal, inv(conj_prime(Q).ideal)));
            auto coords = G.C.coords_of(mul(P.ideal, Q.ideal));
            int i = G.c0.coset_index(G.C, coords);
            FracIdeal Ai = G.c0.coset_reps[i];
            auto alpha = is_principal(mul(J, mul(inv(Ai), conj_ideal(Ai))));
            REQUIRE(alpha.has_value());
            SignVec x = c_of_prime(G.profile, P);
            SignVec cq = c_of_prime(G.profile, Q);
            for (std::size_t bpos = 0; bpos < x.size(); ++bpos) x[bpos] ^= cq[bpos];
            for (std::size_t bpos = 0; bpos < x.size(); ++bpos)
                x[bpos] ^= sign_vector(G.profile, inv(*alpha))[bpos];
            GenusGroup::Elt direct{i, G.R.reduce(x)};
            CHECK(G.mul(gP, gQ) == direct);
        }
}
