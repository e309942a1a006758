#include "hermgenus/local.hpp"

#include <algorithm>

namespace hermgenus {

LocalData local_data(const QuadField& F, long p) {
    LocalData ld;
    ld.p = p;
    ld.primes = prime_decomposition(F, p);
    ld.kind = ld.primes[0].kind;
    if (ld.kind == PrimeKind::ramified)
        ld.e = valuation(different(F), ld.primes[0]);
    ld.e_prime = std::max(0L, ld.e - 1);
    return ld;
}

namespace {

long min_val_at_p(const FieldElement& x, const LocalData& ld) {
    long v = kValInfinity;
    for (const auto& P : ld.primes) v = std::min(v, val_element(x, P));
    return v;
}

void check_p_integral(const FieldElement& x, const LocalData& ld, const char* what) {
    if (min_val_at_p(x, ld) < 0) throw verification_error(std::string(what) + ": denominator not a p-unit");
}

struct Piece {
    std::vector<EVec> vecs;  // 1 or 2 vectors
    long scale_val = 0;
    long norm_val = 0;
};

long piece_norm_val(const HermSpace& V, const Piece& pc, const LocalData& ld) {
    const QuadField& F = V.F;
    long nv = kValInfinity;
    for (const auto& v : pc.vecs) nv = std::min(nv, min_val_at_p(V.phi(v, v), ld));
    if (pc.vecs.size() == 2) {
        FieldElement g = V.phi(pc.vecs[0], pc.vecs[1]);
        for (const FieldElement& gamma : {from_int(F, 1), omega(F)}) {
            Rat tr = (gamma * g).trace();
            nv = std::min(nv, min_val_at_p(from_rat(F, tr), ld));
        }
    }
    return nv;
}

} // namespace

std::vector<JordanBlock> jordan_decomposition(const HermLattice& L, long p) {
    const HermSpace& V = *L.space;
    const QuadField& F = V.F;
    LocalData ld = local_data(F, p);
    bool dyadic_ramified = (p == 2 && ld.ramified());

    std::vector<EVec> b = local_basis(L, p);
    std::vector<Piece> pieces;

    while (!b.empty()) {
        std::size_t n = b.size();
        auto val = [&](std::size_t i, std::size_t j) {
            return min_val_at_p(V.phi(b[i], b[j]), ld);
        };
        long s = kValInfinity;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) s = std::min(s, val(i, j));
        if (s >= kValInfinity) throw verification_error("jordan: degenerate block");

        long diag_min = kValInfinity, off_min = kValInfinity;
        for (std::size_t i = 0; i < n; ++i) diag_min = std::min(diag_min, val(i, i));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off_min = std::min(off_min, val(i, j));

        bool diag_ok = dyadic_ramified ? (diag_min == s && diag_min < off_min)
                                       : (diag_min == s);

        if (!diag_ok && !dyadic_ramified && n > 1) {
            // try to expose a diagonal entry of minimal valuation: b_j += t b_i
            bool exposed = false;
            for (std::size_t i = 0; i < n && !exposed; ++i)
                for (std::size_t j = 0; j < n && !exposed; ++j) {
                    if (i == j || val(i, j) != s) continue;
                    for (long ta = 0; ta < p && !exposed; ++ta)
                        for (long tb = 0; tb < p && !exposed; ++tb) {
                            if (ta == 0 && tb == 0) continue;
                            FieldElement t =
                                from_int(F, ta) + FieldElement(F, Rat(tb), 0) * omega(F);
                            EVec cand(b[j]);
                            for (std::size_t c = 0; c < cand.size(); ++c)
                                cand[c] = cand[c] + t * b[i][c];
                            if (min_val_at_p(V.phi(cand, cand), ld) == s) {
                                b[j] = cand;
                                exposed = true;
                            }
                        }
                }
            if (exposed) diag_ok = true;
        }

        Piece pc;
        if (diag_ok) {
            std::size_t piv = 0;
            while (val(piv, piv) != s ||
                   (dyadic_ramified && val(piv, piv) >= off_min))
                ++piv;
            FieldElement d = V.phi(b[piv], b[piv]);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == piv) continue;
                FieldElement c = V.phi(b[k], b[piv]) / d;
                check_p_integral(c, ld, "jordan rank-1 elimination");
                for (std::size_t x = 0; x < b[k].size(); ++x)
                    b[k][x] = b[k][x] - c * b[piv][x];
            }
            pc.vecs = {b[piv]};
            b.erase(b.begin() + piv);
        } else {
            std::size_t pi = 0, pj = 1;
            bool found = false;
            for (std::size_t i = 0; i < n && !found; ++i)
                for (std::size_t j = i + 1; j < n && !found; ++j)
                    if (val(i, j) == s) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) throw verification_error("jordan: no minimal off-diagonal pair");
            FieldElement a11 = V.phi(b[pi], b[pi]), a12 = V.phi(b[pj], b[pi]);
            FieldElement a21 = V.phi(b[pi], b[pj]), a22 = V.phi(b[pj], b[pj]);
            FieldElement det = a11 * a22 - a12 * a21;
            if (det.is_zero()) throw verification_error("jordan: singular 2x2 pivot");
            for (std::size_t k = 0; k < n; ++k) {
                if (k == pi || k == pj) continue;
                FieldElement r1 = V.phi(b[k], b[pi]), r2 = V.phi(b[k], b[pj]);
                // Phi(b_k - alpha b_pi - beta b_pj, b_pi) = 0 and same at b_pj:
                // alpha a11 + beta a12 = r1, alpha a21 + beta a22 = r2
                FieldElement alpha = (r1 * a22 - r2 * a12) / det;
                FieldElement beta = (r2 * a11 - r1 * a21) / det;
                check_p_integral(alpha, ld, "jordan rank-2 elimination");
                check_p_integral(beta, ld, "jordan rank-2 elimination");
                for (std::size_t x = 0; x < b[k].size(); ++x)
                    b[k][x] = b[k][x] - alpha * b[pi][x] - beta * b[pj][x];
            }
            pc.vecs = {b[pi], b[pj]};
            b.erase(b.begin() + pj);
            b.erase(b.begin() + pi);
        }
        pc.scale_val = s;
        pc.norm_val = piece_norm_val(V, pc, ld);
        pieces.push_back(std::move(pc));
    }

    // orthogonality across pieces must be exact
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j)
            for (const auto& u : pieces[i].vecs)
                for (const auto& v : pieces[j].vecs)
                    if (!V.phi(u, v).is_zero())
                        throw verification_error("jordan: pieces are not orthogonal");

    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.scale_val < b.scale_val; });

    std::vector<JordanBlock> blocks;
    for (std::size_t i = 0; i < pieces.size();) {
        std::size_t j = i;
        JordanBlock blk;
        blk.scale_val = pieces[i].scale_val;
        blk.norm_val = kValInfinity;
        std::vector<EVec> vecs;
        while (j < pieces.size() && pieces[j].scale_val == blk.scale_val) {
            blk.norm_val = std::min(blk.norm_val, pieces[j].norm_val);
            for (const auto& v : pieces[j].vecs) vecs.push_back(v);
            ++j;
        }
        blk.rank = (int)vecs.size();
        blk.gram.assign(blk.rank, EVec(blk.rank, from_int(F, 0)));
        for (int a = 0; a < blk.rank; ++a)
            for (int c = 0; c < blk.rank; ++c) blk.gram[a][c] = V.phi(vecs[a], vecs[c]);
        blk.is_H_type = ld.ramified() && blk.rank % 2 == 0 &&
                        blk.norm_val == ld.e + blk.scale_val &&
                        (blk.scale_val - ld.e) % 2 == 0;
        blocks.push_back(std::move(blk));
        i = j;
    }
    return blocks;
}

bool is_modular_at(const HermLattice& L, long p) {
    return jordan_decomposition(L, p).size() == 1;
}

bool is_E1_element(const FieldElement& delta, const LocalData& ld) {
    if (!ld.ramified()) throw precondition_error("E1 test needs a ramified prime");
    if (delta.norm() != 1) throw precondition_error("E1 test needs Nr(delta) = 1");
    if (delta == from_int(delta.F, 1)) return true;
    return val_element(delta - from_int(delta.F, 1), ld.primes[0]) >= ld.e;
}

DetGroupLabel det_group(const HermLattice& L, long p) {
    LocalData ld = local_data(L.space->F, p);
    if (!ld.ramified()) return DetGroupLabel::E0;
    if (L.rank() % 2 != 0) return DetGroupLabel::E0;
    for (const auto& blk : jordan_decomposition(L, p))
        if (!blk.is_H_type) return DetGroupLabel::E0;
    return DetGroupLabel::E1;
}

namespace {

int legendre_rat(const Rat& u, long p) {
    // u a p-unit; (num/den | p) = (num | p)(den | p)
    Int P(p);
    int s = legendre(Int(u.get_num()), P) * legendre(Int(u.get_den()), P);
    if (s == 0) throw verification_error("legendre_rat: argument not a p-unit");
    return s;
}

long unit_mod8(const Rat& u) {
    Int num = fmod_int(Int(u.get_num()), 8);
    Int den = fmod_int(Int(u.get_den()), 8);
    Int prod = (num * den) % 8;  // den odd: den^-1 = den mod 8
    return prod.get_si();
}

} // namespace

int hilbert_symbol(const Rat& a, const Rat& b, long p) {
    if (a == 0 || b == 0) throw precondition_error("hilbert symbol needs nonzero arguments");
    Int P(p);
    long alpha = v_p(a, P), beta = v_p(b, P);
    Rat u = a / Rat(pow_int(P, std::abs(alpha)));
    if (alpha < 0) u = a * Rat(pow_int(P, -alpha));
    Rat v = b / Rat(pow_int(P, std::abs(beta)));
    if (beta < 0) v = b * Rat(pow_int(P, -beta));
    if (p != 2) {
        int s = 1;
        if ((alpha & 1) && (beta & 1) && p % 4 == 3) s = -s;
        if (beta & 1) s *= legendre_rat(u, p);
        if (alpha & 1) s *= legendre_rat(v, p);
        return s;
    }
    long um = unit_mod8(u), vm = unit_mod8(v);
    long eps_u = (um % 4 == 1) ? 0 : 1;
    long eps_v = (vm % 4 == 1) ? 0 : 1;
    long om_u = (um == 1 || um == 7) ? 0 : 1;
    long om_v = (vm == 1 || vm == 7) ? 0 : 1;
    long expo = eps_u * eps_v + alpha * om_v + beta * om_u;
    return (expo % 2 == 0) ? 1 : -1;
}

int hilbert_symbol_real(const Rat& a, const Rat& b) {
    if (a == 0 || b == 0) throw precondition_error("hilbert symbol needs nonzero arguments");
    return (a < 0 && b < 0) ? -1 : 1;
}

bool is_local_norm(const QuadField& F, const Rat& a, long p) {
    return hilbert_symbol(Rat(F.d), a, p) == 1;
}

bool is_isotropic(const HermSpace& V, long p) {
    if (V.m >= 3) return true;
    LocalData ld = local_data(V.F, p);
    if (ld.kind == PrimeKind::split) return true;
    if (V.m == 1) return false;
    return is_local_norm(V.F, -V.det, p);
}

DetGroupLabel det_group_maximal_crosscheck(const HermSpace& V, long p) {
    LocalData ld = local_data(V.F, p);
    if (!ld.ramified()) throw precondition_error("maximal-lattice criterion needs a ramified prime");
    if (V.m % 2 != 0) return DetGroupLabel::E0;
    Rat target = V.det;
    if ((V.m / 2) % 2 != 0) target = -target;  // det(V) * (-1)^{m/2}
    return is_local_norm(V.F, target, p) ? DetGroupLabel::E1 : DetGroupLabel::E0;
}

namespace {

/* Arithmetic in O/p^N on omega-coordinate pairs, with P-adic membership
 * through the HNF bases of P^t. */
struct ResidueRing {
    long mod = 0;        // p^N
    long tr = 0;         // Tr(omega)
    long nr = 0;         // Nr(omega) mod p^N
    int N = 0;
    std::vector<long> hn, hr, hs;  // HNF of P^t, t = 0..N

    long red(long x) const {
        long r = x % mod;
        return r < 0 ? r + mod : r;
    }
    struct Elt {
        long a, b;
    };
    Elt make(long a, long b) const { return {red(a), red(b)}; }
    Elt add(Elt x, Elt y) const { return {red(x.a + y.a), red(x.b + y.b)}; }
    Elt sub(Elt x, Elt y) const { return {red(x.a - y.a), red(x.b - y.b)}; }
    Elt mul(Elt x, Elt y) const {
        long ac = red(x.a * y.a), bd = red(x.b * y.b);
        long ad_bc = red(x.a * y.b + x.b * y.a);
        return {red(ac - bd * nr), red(ad_bc + bd * tr)};
    }
    Elt conj(Elt x) const { return {red(x.a + x.b * tr), red(-x.b)}; }
    bool in_Pt(Elt x, int t) const {
        if (t <= 0) return true;
        if (x.b % hs[t] != 0) return false;
        return (x.a - (x.b / hs[t]) * hr[t]) % hn[t] == 0;
    }
    int val(Elt x) const {
        for (int t = N; t >= 1; --t)
            if (in_Pt(x, t)) return t;
        return 0;
    }
    bool is_zero_modPN(Elt x) const { return in_Pt(x, N); }
};

long inverse_mod(long a, long m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), Int(a).get_mpz_t(), Int(m).get_mpz_t()))
        throw verification_error("oracle: non-invertible denominator");
    return r.get_si();
}

ResidueRing::Elt to_ring(const ResidueRing& R, const FieldElement& x) {
    auto [u, v] = x.omega_coords();
    long un = fmod_int(Int(u.get_num()), R.mod).get_si();
    long ud = inverse_mod(fmod_int(Int(u.get_den()), R.mod).get_si(), R.mod);
    long vn = fmod_int(Int(v.get_num()), R.mod).get_si();
    long vd = inverse_mod(fmod_int(Int(v.get_den()), R.mod).get_si(), R.mod);
    return R.make(un * ud % R.mod, vn * vd % R.mod);
}

} // namespace

OracleResult mod_PN_det_oracle(const HermLattice& L, long p, int N) {
    const HermSpace& V = *L.space;
    const QuadField& F = V.F;
    if (V.m != 2) throw precondition_error("determinant oracle needs rank 2");
    LocalData ld = local_data(F, p);
    if (!ld.ramified()) throw precondition_error("determinant oracle needs a ramified prime");
    if (N < ld.e + 2) throw precondition_error("determinant oracle needs N >= e + 2");
    const PrimeIdeal& P = ld.primes[0];

    Int modulus = pow_int(Int(p), N);
    if (modulus > 1000000) throw precondition_error("oracle modulus too large for enumeration");

    std::vector<EVec> basis = local_basis(L, p);
    EMat G(2, EVec(2, from_int(F, 0)));
    long s = kValInfinity;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            G[i][j] = V.phi(basis[i], basis[j]);
            long v = val_element(G[i][j], P);
            if (v < 0) throw precondition_error("oracle: local Gram is not integral");
            s = std::min(s, v);
        }

    // quotient precision: conditions and det classes only depend on the
    // entries mod P^k once k + s >= N and k >= e + 1
    int k = std::max<long>(ld.e + 1, N - s);
    if (k > N) k = N;

    ResidueRing R;
    R.mod = modulus.get_si();
    R.N = N;
    R.tr = F.trace_omega();
    R.nr = fmod_int(F.norm_omega(), modulus).get_si();
    R.hn.resize(N + 1);
    R.hr.resize(N + 1);
    R.hs.resize(N + 1);
    for (int t = 0; t <= N; ++t) {
        FracIdeal Pt = pow_ideal(P.ideal, t);
        R.hn[t] = Pt.n.get_si();
        R.hr[t] = Pt.r.get_si();
        R.hs[t] = Pt.s.get_si();
    }

    ResidueRing::Elt g11 = to_ring(R, G[0][0]), g12 = to_ring(R, G[0][1]);
    ResidueRing::Elt g21 = to_ring(R, G[1][0]), g22 = to_ring(R, G[1][1]);
    ResidueRing::Elt one = R.make(1, 0);

    long box_a = R.hn[k], box_b = R.hs[k];

    auto phi_ring = [&](ResidueRing::Elt x1, ResidueRing::Elt x2, ResidueRing::Elt y1,
                        ResidueRing::Elt y2) {
        ResidueRing::Elt c1 = R.conj(y1), c2 = R.conj(y2);
        ResidueRing::Elt t = R.mul(R.mul(x1, c1), g11);
        t = R.add(t, R.mul(R.mul(x1, c2), g12));
        t = R.add(t, R.mul(R.mul(x2, c1), g21));
        t = R.add(t, R.mul(R.mul(x2, c2), g22));
        return t;
    };

    OracleResult res;
    auto classify = [&](ResidueRing::Elt det) {
        if (R.val(det) != 0) return;  // junk: not invertible
        ++res.matrices;
        if (R.val(R.sub(det, one)) >= ld.e) res.e1_class = true;
        else res.other_class = true;
    };

    // box reduction into the canonical O/P^k residue system
    auto box_reduce = [&](ResidueRing::Elt x) {
        long b = x.b % R.hs[k];
        if (b < 0) b += R.hs[k];
        long t = (x.b - b) / R.hs[k];
        long a = (x.a - t * R.hr[k]) % R.hn[k];
        if (a < 0) a += R.hn[k];
        return ResidueRing::Elt{a, b};
    };

    // divide a value of valuation >= w by p^w exactly (P^{2w} = p^w O here)
    auto shift_down = [&](ResidueRing::Elt x, long w) {
        long pw = 1;
        for (long t = 0; t < w; ++t) pw *= p;
        if (x.a % pw != 0 || x.b % pw != 0)
            throw verification_error("oracle: inexact division by p^w");
        return ResidueRing::Elt{x.a / pw, x.b / pw};
    };

    /* Solve c * y = r mod P^N for y in the box.  Appends the solutions. */
    auto solve_linear = [&](ResidueRing::Elt c, long w, ResidueRing::Elt r,
                            std::vector<ResidueRing::Elt>& out) {
        out.clear();
        if (w >= N) {  // condition degenerates: either no or all y
            if (!R.is_zero_modPN(r)) return;
            for (long a = 0; a < box_a; ++a)
                for (long b = 0; b < box_b; ++b) out.push_back(ResidueRing::Elt{a, b});
            return;
        }
        if (R.val(r) < w) return;
        // multiply by conj(c), divide by p^w: y = z / u mod P^{N-w}
        ResidueRing::Elt nrc = R.mul(c, R.conj(c));
        if (nrc.b % R.mod != 0) throw verification_error("oracle: norm not rational");
        long u = shift_down(ResidueRing::Elt{nrc.a, 0}, w).a % R.mod;
        ResidueRing::Elt z = shift_down(R.mul(R.conj(c), r), w);
        long uinv = inverse_mod(((u % R.mod) + R.mod) % R.mod, R.mod);
        ResidueRing::Elt y0 = R.make(z.a % R.mod * uinv % R.mod, z.b % R.mod * uinv % R.mod);
        long nw = N - w;
        if (nw >= k) {
            out.push_back(box_reduce(y0));
            return;
        }
        // family: y0 + residues of P^{N-w} mod P^k
        long na = R.hn[k] / R.hn[nw], nb = R.hs[k] / R.hs[nw];
        for (long a = 0; a < na; ++a)
            for (long b = 0; b < nb; ++b) {
                ResidueRing::Elt delta =
                    R.make(a * R.hn[nw] + b * R.hr[nw], b * R.hs[nw]);
                out.push_back(box_reduce(R.add(y0, delta)));
            }
    };

    std::vector<ResidueRing::Elt> sols;
    for (long xa1 = 0; xa1 < box_a; ++xa1)
    for (long xb1 = 0; xb1 < box_b; ++xb1)
    for (long xa2 = 0; xa2 < box_a; ++xa2)
    for (long xb2 = 0; xb2 < box_b; ++xb2) {
        ResidueRing::Elt x1 = R.make(xa1, xb1), x2 = R.make(xa2, xb2);
        if (R.in_Pt(x1, 1) && R.in_Pt(x2, 1)) continue;  // x in P L
        if (!R.is_zero_modPN(R.sub(phi_ring(x1, x2, x1, x2), g11))) continue;
        // Phi(y, x) = y1 c1 + y2 c2 with c fixed by x
        ResidueRing::Elt cx1 = R.conj(x1), cx2 = R.conj(x2);
        ResidueRing::Elt c1 = R.add(R.mul(g11, cx1), R.mul(g12, cx2));
        ResidueRing::Elt c2 = R.add(R.mul(g21, cx1), R.mul(g22, cx2));
        long w1 = R.val(c1), w2 = R.val(c2);
        bool pivot_first = w1 <= w2;
        ResidueRing::Elt cp = pivot_first ? c1 : c2, co = pivot_first ? c2 : c1;
        long w = pivot_first ? w1 : w2;
        for (long oa = 0; oa < box_a; ++oa)
        for (long ob = 0; ob < box_b; ++ob) {
            ResidueRing::Elt yo = R.make(oa, ob);
            ResidueRing::Elt rhs = R.sub(g21, R.mul(yo, co));
            solve_linear(cp, w, rhs, sols);
            for (const auto& yp : sols) {
                ResidueRing::Elt y1 = pivot_first ? yp : yo;
                ResidueRing::Elt y2 = pivot_first ? yo : yp;
                if (!R.is_zero_modPN(R.sub(R.add(R.mul(y1, c1), R.mul(y2, c2)), g21)))
                    continue;  // guards the solver's precision bookkeeping
                if (!R.is_zero_modPN(R.sub(phi_ring(y1, y2, y1, y2), g22))) continue;
                ResidueRing::Elt det = R.sub(R.mul(x1, y2), R.mul(x2, y1));
                classify(det);
                if (res.e1_class && res.other_class) return res;
            }
        }
    }
    return res;
}

} // namespace hermgenus
