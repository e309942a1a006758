#ifndef HERMGENUS_ZMAT_HPP
#define HERMGENUS_ZMAT_HPP

#include <optional>
#include <vector>

#include "numeric.hpp"

namespace hermgenus {

using ZRow = std::vector<Int>;
using ZMat = std::vector<ZRow>;

/* Canonical row Hermite form of the lattice spanned by the rows.
 *
 * Columns are visited in the order given by col_order (identity when empty).
 * The result has one row per pivot, sorted by pivot position in visiting
 * order, positive pivots, and every other entry in a pivot column reduced
 * into [0, pivot).  It is the unique such basis, so equal row lattices give
 * equal matrices.  Zero rows are dropped.
 */
ZMat hnf_rows(ZMat rows, const std::vector<int>& col_order = {});

// pivot columns of an hnf_rows result (in the same row order)
std::vector<int> hnf_pivots(const ZMat& H, const std::vector<int>& col_order = {});

/* Basis of { u : u * M = 0 } (left kernel), as canonical HNF rows. */
ZMat left_kernel(const ZMat& M);

/* Writes v as an integer combination of the rows of H (an hnf_rows result).
 * Returns the coefficients, or nullopt if v is not in the row lattice. */
std::optional<ZRow> solve_in_rowspan(const ZMat& H, const ZRow& v,
                                     const std::vector<int>& col_order = {});

/* Like hnf_rows but also returns U with U * rows == hnf (row-for-row).
 * U rows corresponding to dropped zero rows are omitted. */
ZMat hnf_rows_with_transform(const ZMat& rows, ZMat& U,
                             const std::vector<int>& col_order = {});

/* Smith normal form of A: returns diagonal entries d_1 | d_2 | ... and the
 * right transform V (unimodular) with U*A*V diagonal; only V is needed by
 * callers (coordinates of Z^n / rowspan(A) are x*V taken mod d_i). */
std::vector<Int> smith_normal_form(ZMat A, ZMat& V);

// |det| of a square full-rank row lattice basis (product of HNF pivots)
Int lattice_det(const ZMat& rows);

ZMat identity_mat(std::size_t n);

} // namespace hermgenus

#endif
