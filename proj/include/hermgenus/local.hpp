#ifndef HERMGENUS_LOCAL_HPP
#define HERMGENUS_LOCAL_HPP

#include "hermitian.hpp"

namespace hermgenus {

/* Splitting data of E/Q at p: e = v_P(different), e' = max(0, e-1). */
struct LocalData {
    long p = 0;
    PrimeKind kind = PrimeKind::inert;
    long e = 0;
    long e_prime = 0;
    std::vector<PrimeIdeal> primes;  // primes of O above p

    bool ramified() const { return kind == PrimeKind::ramified; }
};

LocalData local_data(const QuadField& F, long p);

/* One modular constituent of a Jordan decomposition at p.  All valuations are
 * normalized at a prime P above p (v_P(p) = 2 when ramified, else 1). */
struct JordanBlock {
    long scale_val = 0;   // s = v_P of the block scale
    int rank = 0;
    long norm_val = 0;    // v_P of the block norm
    EMat gram;            // block Gram in the split local basis
    bool is_H_type = false;
};

/* Orthogonal splitting of L_p into modular blocks of strictly increasing
 * scale valuation; pieces found greedily have rank 1 or 2 and equal-scale
 * pieces are merged. */
std::vector<JordanBlock> jordan_decomposition(const HermLattice& L, long p);

bool is_modular_at(const HermLattice& L, long p);

enum class DetGroupLabel { E0, E1 };

/* delta in E1(O_P) = { u / conj(u) }  <=>  v_P(delta - 1) >= e  (ramified P). */
bool is_E1_element(const FieldElement& delta, const LocalData& ld);

/* Theorem: E(L_p) = E1 iff p is ramified, the rank is even and every Jordan
 * block is of H type; otherwise E(L_p) = E0. */
DetGroupLabel det_group(const HermLattice& L, long p);

// standard Hilbert symbol over Q_p, and at the real place
int hilbert_symbol(const Rat& a, const Rat& b, long p);
int hilbert_symbol_real(const Rat& a, const Rat& b);

// a in Nr(E_p^*)
bool is_local_norm(const QuadField& F, const Rat& a, long p);

/* rank >= 3 or split p: isotropic; rank 1: anisotropic; rank 2: -det a norm. */
bool is_isotropic(const HermSpace& V, long p);

/* Shimura's maximal-lattice criterion: E1 iff ramified, even rank and
 * det(V) = (-1)^{m/2} modulo local norms. */
DetGroupLabel det_group_maximal_crosscheck(const HermSpace& V, long p);

/* Determinant classes of the 2x2 matrices over O/P^N preserving the local
 * Gram mod P^N, each det classified by the E1 test v_P(det - 1) >= e.
 * Requires rank 2, ramified p, N >= e + 2. */
struct OracleResult {
    bool e1_class = false;     // some preserver with v_P(det - 1) >= e
    bool other_class = false;  // some preserver with v_P(det - 1) < e
    unsigned long matrices = 0;
};

OracleResult mod_PN_det_oracle(const HermLattice& L, long p, int N);

} // namespace hermgenus

#endif
