#include "hermgenus/hermitian.hpp"

#include <algorithm>

namespace hermgenus {

namespace {

using RMat = std::vector<std::vector<Rat>>;

/* exact inverse by Gaussian elimination */
RMat rmat_inverse(RMat A) {
    std::size_t n = A.size();
    RMat I(n, std::vector<Rat>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) throw precondition_error("singular matrix");
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        Rat d = A[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            A[col][j] /= d;
            I[col][j] /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                A[i][j] -= f * A[col][j];
                I[i][j] -= f * I[col][j];
            }
        }
    }
    return I;
}

EVec solve_emat(EMat A, EVec b) {
    std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col].is_zero()) ++piv;
        if (piv == n) throw precondition_error("singular system over E");
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        FieldElement d = A[col][col];
        for (std::size_t j = 0; j < n; ++j) A[col][j] = A[col][j] / d;
        b[col] = b[col] / d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || A[i][col].is_zero()) continue;
            FieldElement f = A[i][col];
            for (std::size_t j = 0; j < n; ++j) A[i][j] = A[i][j] - f * A[col][j];
            b[i] = b[i] - f * b[col];
        }
    }
    return b;
}

std::vector<Rat> vec_to_rat_row(const EVec& x) {
    std::vector<Rat> row;
    row.reserve(2 * x.size());
    for (const auto& c : x) {
        auto [u, v] = c.omega_coords();
        row.push_back(u);
        row.push_back(v);
    }
    return row;
}

EVec rat_row_to_vec(const QuadField& F, const std::vector<Rat>& row) {
    EVec x;
    x.reserve(row.size() / 2);
    for (std::size_t j = 0; j + 1 < row.size(); j += 2)
        x.push_back(FieldElement::from_omega(F, row[j], row[j + 1]));
    return x;
}

/* Derive the canonical pseudo-basis from a canonical Z-basis. */
std::vector<std::pair<FracIdeal, EVec>> pseudo_from_rows(const SpacePtr& space,
                                                         const Int& den, const ZMat& basis) {
    const QuadField& F = space->F;
    int m = space->m;
    std::vector<EVec> gens;
    for (const auto& row : basis) {
        std::vector<Rat> rrow;
        for (const auto& e : row) rrow.emplace_back(e, den);
        gens.push_back(rat_row_to_vec(F, rrow));
    }
    std::vector<std::pair<FracIdeal, EVec>> pseudo;
    std::vector<bool> used(m, false);
    for (int step = 0; step < m; ++step) {
        int j = -1;
        for (int cand = 0; cand < m && j < 0; ++cand) {
            if (used[cand]) continue;
            for (const auto& g : gens)
                if (!g[cand].is_zero()) {
                    j = cand;
                    break;
                }
        }
        if (j < 0) throw verification_error("pseudo basis extraction: rank deficiency");
        std::vector<FieldElement> coords;
        for (const auto& g : gens) coords.push_back(g[j]);
        FracIdeal I = ideal_from_z_span(F, coords);

        auto lift = [&](const FieldElement& beta) -> EVec {
            auto combo = express_in_z_span(coords, beta);
            if (!combo) throw verification_error("pseudo basis extraction: lift failed");
            EVec y(m, from_int(F, 0));
            for (std::size_t k = 0; k < gens.size(); ++k) {
                if ((*combo)[k] == 0) continue;
                for (int c = 0; c < m; ++c) y[c] = y[c] + Rat((*combo)[k]) * gens[k][c];
            }
            return y;
        };
        FieldElement b1 = I.basis1(), b2 = I.basis2();
        EVec y1 = lift(b1), y2 = lift(b2);

        // d1 b1 + d2 b2 = 1 with d1, d2 in I^-1
        FracIdeal Iinv = inv(I);
        std::vector<FieldElement> four = {b1 * Iinv.basis1(), b1 * Iinv.basis2(),
                                          b2 * Iinv.basis1(), b2 * Iinv.basis2()};
        auto combo = express_in_z_span(four, from_int(F, 1));
        if (!combo) throw verification_error("pseudo basis extraction: I * I^-1 misses 1");
        FieldElement d1 = Rat((*combo)[0]) * Iinv.basis1() + Rat((*combo)[1]) * Iinv.basis2();
        FieldElement d2 = Rat((*combo)[2]) * Iinv.basis1() + Rat((*combo)[3]) * Iinv.basis2();

        EVec u(m, from_int(F, 0));
        for (int c = 0; c < m; ++c) u[c] = d1 * y1[c] + d2 * y2[c];
        if (u[j] != from_int(F, 1))
            throw verification_error("pseudo basis extraction: pivot not normalized");

        pseudo.emplace_back(I, u);
        for (auto& g : gens) {
            FieldElement gj = g[j];
            if (gj.is_zero()) continue;
            for (int c = 0; c < m; ++c) g[c] = g[c] - gj * u[c];
        }
        used[j] = true;
    }
    for (const auto& g : gens)
        for (const auto& c : g)
            if (!c.is_zero())
                throw verification_error("pseudo basis extraction: nonzero residue");
    return pseudo;
}

} // namespace

FieldElement HermSpace::phi(const EVec& x, const EVec& y) const {
    FieldElement acc = from_int(F, 0);
    for (int j = 0; j < m; ++j) {
        if (x[j].is_zero()) continue;
        for (int k = 0; k < m; ++k) {
            if (y[k].is_zero()) continue;
            acc = acc + x[j] * y[k].conj() * gram[j][k];
        }
    }
    return acc;
}

bool HermSpace::same_as(const HermSpace& o) const {
    if (F != o.F || m != o.m) return false;
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            if (gram[j][k] != o.gram[j][k]) return false;
    return true;
}

FieldElement emat_det(const EMat& A) {
    std::size_t n = A.size();
    if (n == 0) return FieldElement();
    EMat M = A;
    const QuadField& F = M[0][0].F;
    FieldElement det = from_int(F, 1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && M[piv][col].is_zero()) ++piv;
        if (piv == n) return from_int(F, 0);
        if (piv != col) {
            std::swap(M[piv], M[col]);
            det = -det;
        }
        det = det * M[col][col];
        FieldElement d = M[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            if (M[i][col].is_zero()) continue;
            FieldElement f = M[i][col] / d;
            for (std::size_t j = col; j < n; ++j) M[i][j] = M[i][j] - f * M[col][j];
        }
    }
    return det;
}

SpacePtr make_space(const QuadField& F, const EMat& gram) {
    int m = (int)gram.size();
    if (m == 0) throw input_error("empty Gram matrix");
    for (const auto& row : gram)
        if ((int)row.size() != m) throw input_error("Gram matrix is not square");
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (gram[j][k].F != F) throw input_error("Gram entry over wrong field");
            if (gram[j][k] != gram[k][j].conj())
                throw input_error("Gram matrix is not hermitian");
        }
    FieldElement det = emat_det(gram);
    if (det.is_zero()) throw input_error("Gram matrix is singular");
    if (det.b != 0) throw verification_error("hermitian determinant must be rational");
    auto space = std::make_shared<HermSpace>();
    space->F = F;
    space->m = m;
    space->gram = gram;
    space->det = det.a;
    return space;
}

EVec HermLattice::basis_vector(std::size_t k) const {
    std::vector<Rat> rrow;
    for (const auto& e : basis[k]) rrow.emplace_back(e, den);
    for (auto& r : rrow) r.canonicalize();
    return rat_row_to_vec(space->F, rrow);
}

bool HermLattice::operator==(const HermLattice& o) const {
    return space->same_as(*o.space) && den == o.den && basis == o.basis;
}

HermLattice lattice_from_z_rows(const SpacePtr& space, const std::vector<std::vector<Rat>>& rows) {
    std::size_t n = 2 * (std::size_t)space->m;
    Int D = 1;
    for (const auto& row : rows) {
        if (row.size() != n) throw precondition_error("coordinate row of wrong length");
        for (const auto& x : row) D = lcm_int(D, Int(x.get_den()));
    }
    ZMat zrows;
    for (const auto& row : rows) {
        ZRow zr;
        for (const auto& x : row) zr.push_back(Int(Rat(x * D).get_num()));
        zrows.push_back(std::move(zr));
    }
    ZMat H = hnf_rows(zrows);
    if (H.size() != n) throw precondition_error("lattice does not have full rank");
    Int content = 0;
    for (const auto& r : H)
        for (const auto& x : r) content = gcd_int(content, x);
    Int g = gcd_int(D, content);
    if (g > 1) {
        D /= g;
        for (auto& r : H)
            for (auto& x : r) x /= g;
    }
    HermLattice L;
    L.space = space;
    L.den = D;
    L.basis = std::move(H);
    L.pseudo = pseudo_from_rows(space, L.den, L.basis);
    return L;
}

HermLattice lattice_from_pseudo(const SpacePtr& space,
                                const std::vector<std::pair<FracIdeal, EVec>>& pseudo) {
    if ((int)pseudo.size() != space->m)
        throw precondition_error("pseudo basis must have rank many entries");
    std::vector<std::vector<Rat>> rows;
    for (const auto& [I, v] : pseudo) {
        if ((int)v.size() != space->m) throw precondition_error("pseudo vector of wrong length");
        EVec w1(v), w2(v);
        for (int c = 0; c < space->m; ++c) {
            w1[c] = I.basis1() * v[c];
            w2[c] = I.basis2() * v[c];
        }
        rows.push_back(vec_to_rat_row(w1));
        rows.push_back(vec_to_rat_row(w2));
    }
    return lattice_from_z_rows(space, rows);
}

HermLattice free_lattice(const SpacePtr& space) {
    std::vector<std::pair<FracIdeal, EVec>> pseudo;
    for (int i = 0; i < space->m; ++i) {
        EVec e(space->m, from_int(space->F, 0));
        e[i] = from_int(space->F, 1);
        pseudo.emplace_back(whole_ring(space->F), e);
    }
    return lattice_from_pseudo(space, pseudo);
}

bool lattice_member(const HermLattice& L, const EVec& x) {
    std::vector<Rat> row = vec_to_rat_row(x);
    ZRow target;
    for (const auto& r : row) {
        Rat scaled = r * L.den;
        scaled.canonicalize();
        if (scaled.get_den() != 1) return false;
        target.push_back(Int(scaled.get_num()));
    }
    return solve_in_rowspan(L.basis, target).has_value();
}

bool is_sublattice(const HermLattice& L, const HermLattice& M) {
    for (std::size_t k = 0; k < L.basis.size(); ++k)
        if (!lattice_member(M, L.basis_vector(k))) return false;
    return true;
}

Int z_module_index(const HermLattice& L, const HermLattice& N) {
    Int detL = lattice_det(L.basis), detN = lattice_det(N.basis);
    std::size_t n = L.basis.size();
    Rat idx = Rat(detN) / Rat(detL) * Rat(pow_int(L.den, n), pow_int(N.den, n));
    idx.canonicalize();
    if (idx.get_den() != 1) throw precondition_error("z_module_index: not a sublattice");
    return Int(idx.get_num());
}

FracIdeal scale(const HermLattice& L) {
    std::size_t n = L.basis.size();
    std::vector<EVec> vecs;
    for (std::size_t k = 0; k < n; ++k) vecs.push_back(L.basis_vector(k));
    std::vector<FieldElement> gens;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) gens.push_back(L.space->phi(vecs[j], vecs[k]));
    return ideal_from_z_span(L.space->F, gens);
}

FracIdeal norm_ideal(const HermLattice& L) {
    std::size_t n = L.basis.size();
    std::vector<EVec> vecs;
    for (std::size_t k = 0; k < n; ++k) vecs.push_back(L.basis_vector(k));
    Rat g = 0;
    for (std::size_t j = 0; j < n; ++j) {
        FieldElement d = L.space->phi(vecs[j], vecs[j]);
        if (d.b != 0) throw verification_error("Phi(x,x) must be rational");
        g = rat_gcd(g, d.a);
        for (std::size_t k = j + 1; k < n; ++k)
            g = rat_gcd(g, L.space->phi(vecs[j], vecs[k]).trace());
    }
    if (g == 0) throw verification_error("norm ideal of a full lattice cannot be zero");
    return scale_ideal(g, whole_ring(L.space->F));
}

HermLattice sum(const HermLattice& L, const HermLattice& M) {
    if (!L.space->same_as(*M.space)) throw precondition_error("lattices in different spaces");
    std::vector<std::vector<Rat>> rows;
    for (std::size_t k = 0; k < L.basis.size(); ++k) rows.push_back(vec_to_rat_row(L.basis_vector(k)));
    for (std::size_t k = 0; k < M.basis.size(); ++k) rows.push_back(vec_to_rat_row(M.basis_vector(k)));
    return lattice_from_z_rows(L.space, rows);
}

HermLattice intersect(const HermLattice& L, const HermLattice& M) {
    if (!L.space->same_as(*M.space)) throw precondition_error("lattices in different spaces");
    std::size_t n = L.basis.size();
    Int D = lcm_int(L.den, M.den);
    Int fa = D / L.den, fb = D / M.den;
    ZMat stacked;
    for (const auto& row : L.basis) {
        ZRow r;
        for (const auto& x : row) r.push_back(x * fa);
        stacked.push_back(std::move(r));
    }
    for (const auto& row : M.basis) {
        ZRow r;
        for (const auto& x : row) r.push_back(-x * fb);
        stacked.push_back(std::move(r));
    }
    ZMat ker = left_kernel(stacked);
    std::vector<std::vector<Rat>> rows;
    for (const auto& u : ker) {
        std::vector<Rat> row(2 * L.rank(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (u[i] == 0) continue;
            for (std::size_t c = 0; c < row.size(); ++c)
                row[c] += Rat(u[i] * fa * L.basis[i][c], D);
        }
        for (auto& x : row) x.canonicalize();
        rows.push_back(std::move(row));
    }
    return lattice_from_z_rows(L.space, rows);
}

HermLattice scale_by_ideal(const FracIdeal& I, const HermLattice& L) {
    std::vector<std::vector<Rat>> rows;
    for (std::size_t k = 0; k < L.basis.size(); ++k) {
        EVec v = L.basis_vector(k);
        for (const FieldElement& beta : {I.basis1(), I.basis2()}) {
            EVec w(v);
            for (auto& c : w) c = beta * c;
            rows.push_back(vec_to_rat_row(w));
        }
    }
    return lattice_from_z_rows(L.space, rows);
}

HermLattice dual(const HermLattice& L) {
    const QuadField& F = L.space->F;
    int m = L.rank();
    // L = sum A_i v_i gives L^# = sum conj(A_i)^-1 w_i with Phi(w_i, v_j) = delta_ij.
    // The condition on w reads w * N = e_i where N[a][j] = sum_b G[a][b] conj(v_j[b]).
    EMat N(m, EVec(m, from_int(F, 0)));
    for (int a = 0; a < m; ++a)
        for (int j = 0; j < m; ++j) {
            FieldElement acc = from_int(F, 0);
            for (int b = 0; b < m; ++b)
                acc = acc + L.space->gram[a][b] * L.pseudo[j].second[b].conj();
            N[a][j] = acc;
        }
    std::vector<std::pair<FracIdeal, EVec>> pseudo;
    for (int i = 0; i < m; ++i) {
        // solve w * N = e_i, i.e. N^T w^T = e_i
        EMat Nt(m, EVec(m, from_int(F, 0)));
        for (int a = 0; a < m; ++a)
            for (int j = 0; j < m; ++j) Nt[j][a] = N[a][j];
        EVec e(m, from_int(F, 0));
        e[i] = from_int(F, 1);
        EVec w = solve_emat(Nt, e);
        pseudo.emplace_back(inv(conj_ideal(L.pseudo[i].first)), w);
    }
    return lattice_from_pseudo(L.space, pseudo);
}

FracIdeal index_ideal(const HermLattice& L, const HermLattice& M) {
    if (!L.space->same_as(*M.space)) throw precondition_error("lattices in different spaces");
    const QuadField& F = L.space->F;
    int m = L.rank();
    EMat A(m, EVec(m, from_int(F, 0)));
    for (int l = 0; l < m; ++l)
        for (int i = 0; i < m; ++i) A[l][i] = L.pseudo[i].second[l];
    EMat Tcols;
    for (int j = 0; j < m; ++j) {
        EVec rhs(m, from_int(F, 0));
        for (int l = 0; l < m; ++l) rhs[l] = M.pseudo[j].second[l];
        Tcols.push_back(solve_emat(A, rhs));
    }
    // det(T) where T[j][i] = Tcols[j][i]
    FieldElement detT = emat_det(Tcols);
    FracIdeal result = principal_ideal(detT);
    for (int j = 0; j < m; ++j) result = mul(result, M.pseudo[j].first);
    for (int i = 0; i < m; ++i) result = mul(result, inv(L.pseudo[i].first));
    return result;
}

HermLattice rho(const HermLattice& L, const PrimeIdeal& P) {
    HermLattice a = scale_by_ideal(inv(P.ideal), L);
    HermLattice b = scale_by_ideal(P.ideal, dual(L));
    return sum(L, intersect(a, b));
}

EMat quasi_reflection(const HermSpace& V, const EVec& x, const FieldElement& delta) {
    const QuadField& F = V.F;
    FieldElement xx = V.phi(x, x);
    if (xx.is_zero()) throw precondition_error("quasi-reflection needs an anisotropic vector");
    if (delta.norm() != 1) throw precondition_error("quasi-reflection needs Nr(delta) = 1");
    FieldElement scale = (delta - from_int(F, 1)) / xx;
    EMat U(V.m, EVec(V.m, from_int(F, 0)));
    for (int j = 0; j < V.m; ++j) {
        FieldElement cj = from_int(F, 0);
        for (int l = 0; l < V.m; ++l) cj = cj + V.gram[j][l] * x[l].conj();
        for (int i = 0; i < V.m; ++i) {
            U[i][j] = scale * x[i] * cj;
            if (i == j) U[i][j] = U[i][j] + from_int(F, 1);
        }
    }
    return U;
}

EVec apply_matrix(const EMat& U, const EVec& y) {
    std::size_t m = U.size();
    EVec out(m, from_int(y[0].F, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (!U[i][j].is_zero() && !y[j].is_zero()) out[i] = out[i] + U[i][j] * y[j];
    return out;
}

HermLattice apply_map(const EMat& U, const HermLattice& L) {
    std::vector<std::pair<FracIdeal, EVec>> pseudo;
    for (const auto& [I, v] : L.pseudo) pseudo.emplace_back(I, apply_matrix(U, v));
    return lattice_from_pseudo(L.space, pseudo);
}

FieldElement uniformizer_for_H(const QuadField& F, long p) {
    long dm4 = ((F.d % 4) + 4) % 4;
    if (p == 2) {
        if (dm4 == 2) return sqrt_d(F);
        if (dm4 == 3) return from_int(F, 1) + sqrt_d(F);
        throw precondition_error("2 is not ramified in this field");
    }
    if (F.d % p != 0) throw precondition_error("p is not ramified in this field");
    return sqrt_d(F);
}

HermLattice build_H_lattice(const QuadField& F, const PrimeIdeal& P, long i, int copies) {
    if (P.kind != PrimeKind::ramified)
        throw precondition_error("H(i) lattices require a ramified prime");
    FieldElement pi = uniformizer_for_H(F, P.p);
    FieldElement off = pow_elt(pi, i);
    FieldElement off_conj = pow_elt(pi.conj(), i);
    int m = 2 * copies;
    EMat gram(m, EVec(m, from_int(F, 0)));
    for (int t = 0; t < copies; ++t) {
        gram[2 * t][2 * t + 1] = off;
        gram[2 * t + 1][2 * t] = off_conj;
    }
    return free_lattice(make_space(F, gram));
}

std::vector<EVec> local_basis(const HermLattice& L, long p) {
    std::vector<EVec> out;
    for (const auto& [I, v] : L.pseudo) {
        FieldElement g = local_generator(I, p);
        EVec w(v);
        for (auto& c : w) c = g * c;
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace hermgenus
