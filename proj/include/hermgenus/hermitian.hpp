#ifndef HERMGENUS_HERMITIAN_HPP
#define HERMGENUS_HERMITIAN_HPP

#include <memory>
#include <utility>
#include <vector>

#include "class_group.hpp"
#include "ideal.hpp"
#include "zmat.hpp"

namespace hermgenus {

using EVec = std::vector<FieldElement>;
using EMat = std::vector<std::vector<FieldElement>>;

/* Nondegenerate hermitian space (V, Phi) over E, fixed ambient basis. */
struct HermSpace {
    QuadField F;
    int m = 0;
    EMat gram;   // gram[j][k] = Phi(e_j, e_k), conjugate-symmetric, invertible
    Rat det = 0; // det of gram (rational for hermitian matrices)

    FieldElement phi(const EVec& x, const EVec& y) const;
    bool same_as(const HermSpace& o) const;
};

using SpacePtr = std::shared_ptr<const HermSpace>;

SpacePtr make_space(const QuadField& F, const EMat& gram);

/* O-lattice in (V, Phi).  Canonical form: the Z-basis of den*L in
 * omega-coordinates is the unique Hermite-reduced basis, so two values are
 * equal iff their (den, basis) agree.  A pseudo-basis (ideal, vector) pairs
 * is derived deterministically from the canonical basis. */
struct HermLattice {
    SpacePtr space;
    Int den = 1;
    ZMat basis;  // 2m x 2m canonical HNF rows
    std::vector<std::pair<FracIdeal, EVec>> pseudo;

    int rank() const { return space->m; }
    EVec basis_vector(std::size_t k) const;  // k-th Z-basis vector of L
    bool operator==(const HermLattice& o) const;
    bool operator!=(const HermLattice& o) const { return !(*this == o); }
};

HermLattice lattice_from_pseudo(const SpacePtr& space,
                                const std::vector<std::pair<FracIdeal, EVec>>& pseudo);
HermLattice free_lattice(const SpacePtr& space);
HermLattice lattice_from_z_rows(const SpacePtr& space, const std::vector<std::vector<Rat>>& rows);

bool lattice_member(const HermLattice& L, const EVec& x);
bool is_sublattice(const HermLattice& L, const HermLattice& M);  // L subset of M

// [L : N] as Z-modules for N inside L (group index)
Int z_module_index(const HermLattice& L, const HermLattice& N);

FracIdeal scale(const HermLattice& L);
FracIdeal norm_ideal(const HermLattice& L);

HermLattice dual(const HermLattice& L);
HermLattice sum(const HermLattice& L, const HermLattice& M);
HermLattice intersect(const HermLattice& L, const HermLattice& M);
HermLattice scale_by_ideal(const FracIdeal& I, const HermLattice& L);

// [L : M]_O = det(T) * prod B_j * prod A_i^-1 for the pseudo-basis transition T
FracIdeal index_ideal(const HermLattice& L, const HermLattice& M);

// rho(L) = L + (P^-1 L  meet  P L^#)
HermLattice rho(const HermLattice& L, const PrimeIdeal& P);

/* Quasi-reflection tau_{x,delta}: y -> y + (delta-1) Phi(y,x)/Phi(x,x) x.
 * Requires Phi(x,x) != 0 and Nr(delta) = 1; the matrix is unitary with
 * determinant delta. */
EMat quasi_reflection(const HermSpace& V, const EVec& x, const FieldElement& delta);

EVec apply_matrix(const EMat& U, const EVec& y);
HermLattice apply_map(const EMat& U, const HermLattice& L);

FieldElement emat_det(const EMat& A);

/* Prime element used for the H(i) construction: sqrt(d) at odd ramified p and
 * at p=2 with d = 2 mod 4 (conjugate = -pi), 1 + sqrt(d) at p=2, d = 3 mod 4. */
FieldElement uniformizer_for_H(const QuadField& F, long p);

/* Free rank-2r lattice with Gram blocks [[0, pi^i], [conj(pi)^i, 0]]; its
 * completion at the ramified prime P is H(i)^r. */
HermLattice build_H_lattice(const QuadField& F, const PrimeIdeal& P, long i, int copies);

/* O_p-basis of L_p: pseudo-basis vectors scaled by local generators of their
 * coefficient ideals. */
std::vector<EVec> local_basis(const HermLattice& L, long p);

} // namespace hermgenus

#endif
