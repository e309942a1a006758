#ifndef HERMGENUS_GENUS_HPP
#define HERMGENUS_GENUS_HPP

#include <optional>

#include "local.hpp"

namespace hermgenus {

/* P(L): the rational primes with E(L_p) = E1, carrying E(L) = (Z/2)^k. */
struct DetProfile {
    std::vector<long> primes;      // ascending; all ramified
    std::vector<LocalData> locals; // matching local data

    int position_of(long p) const;  // -1 if absent
};

DetProfile det_profile(const HermLattice& L);

using SignVec = std::vector<int>;  // F_2 vector over the primes of P(L)

// class of a norm-one element in E(L): one E1 test per profile prime
SignVec sign_vector(const DetProfile& prof, const FieldElement& delta);

// c(P): -1 exactly at P cap Z
SignVec c_of_prime(const DetProfile& prof, const PrimeIdeal& P);

/* R(L): image of the global norm-one units of O inside E(L). */
struct RSubgroup {
    std::size_t ambient_dim = 0;
    std::vector<SignVec> echelon;  // F_2 row echelon basis
    SignVec reduce(SignVec v) const;  // canonical coset representative
    std::size_t order() const { return (std::size_t)1 << echelon.size(); }
};

RSubgroup r_subgroup(const DetProfile& prof, const QuadField& F);

/* G(L) = C/C0 x E(L)/R(L) with the cocycle multiplication
 * ([A_i], x) * ([A_j], y) = ([A_{k(i,j)}], alpha_{i,j} x y). */
struct GenusGroup {
    ClassGroup C;
    C0Subgroup c0;
    DetProfile profile;
    RSubgroup R;

    struct Elt {
        int coset = 0;
        SignVec q;
        bool operator==(const Elt& o) const { return coset == o.coset && q == o.q; }
        bool operator<(const Elt& o) const {
            return coset != o.coset ? coset < o.coset : q < o.q;
        }
    };

    std::vector<Elt> elements;  // sorted
    std::vector<std::vector<int>> k_table;
    std::vector<std::vector<SignVec>> alpha_sign;  // sign class of alpha_{i,j}

    Elt identity() const { return Elt{0, SignVec(profile.primes.size(), 0)}; }
    Elt mul(const Elt& a, const Elt& b) const;
    long order() const { return (long)elements.size(); }
    long element_order(const Elt& g) const;
    std::vector<long> invariant_factors() const;  // ascending divisibility chain
};

int k_index(const ClassGroup& C, const C0Subgroup& c0, int i, int j);
FieldElement cocycle_alpha(const ClassGroup& C, const C0Subgroup& c0, int i, int j);

GenusGroup genus_group(const HermLattice& L);

/* psi-image of the pair (P conj(P)^-1, c(P)) attached to any P-neighbour. */
GenusGroup::Elt psi_neighbour_generator(const HermLattice& L, const GenusGroup& G,
                                        const PrimeIdeal& P);

/* A P-neighbour of L different from `avoid` (when given): L' with
 * L/(L meet L') = O/P, L'/(L meet L') = O/conj(P) and the same scale at p. */
HermLattice neighbour(const HermLattice& L, const PrimeIdeal& P,
                      const std::optional<HermLattice>& avoid = std::nullopt);

struct PrimeSearchEntry {
    PrimeIdeal P;
    GenusGroup::Elt image;
    long order = 0;  // order in G / <previous generators>
};

/* Greedy minimal list of primes whose psi-images generate G(L); candidates
 * must be modular-at-p, isotropic, and odd when ramified. */
std::vector<PrimeSearchEntry> prime_search(const HermLattice& L, const GenusGroup& G,
                                           long prime_bound = 1000);

struct SpecialGenusRep {
    HermLattice lattice;
    std::vector<long> exponents;  // e_i against the generator list
    GenusGroup::Elt label;
    FracIdeal index;  // [L : M]_O
};

struct SpecialGenera {
    GenusGroup group;
    std::vector<PrimeSearchEntry> generators;
    std::vector<SpecialGenusRep> reps;
};

/* The enumeration algorithm: neighbour chains L_{i,j} along each generator
 * prime, then S = { A L + (conj(A)^-1 L meet meet_i L_{i,e_i}) }. */
SpecialGenera special_genera(const HermLattice& L, long prime_bound = 1000);

} // namespace hermgenus

#endif
