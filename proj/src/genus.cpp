#include "hermgenus/genus.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace hermgenus {

int DetProfile::position_of(long p) const {
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (primes[i] == p) return (int)i;
    return -1;
}

DetProfile det_profile(const HermLattice& L) {
    DetProfile prof;
    for (long p : prime_factors_long(Int(L.space->F.disc))) {
        if (det_group(L, p) == DetGroupLabel::E1) {
            prof.primes.push_back(p);
            prof.locals.push_back(local_data(L.space->F, p));
        }
    }
    return prof;
}

SignVec sign_vector(const DetProfile& prof, const FieldElement& delta) {
    SignVec v;
    for (const auto& ld : prof.locals) v.push_back(is_E1_element(delta, ld) ? 0 : 1);
    return v;
}

SignVec c_of_prime(const DetProfile& prof, const PrimeIdeal& P) {
    SignVec v(prof.primes.size(), 0);
    int pos = prof.position_of(P.p);
    if (pos >= 0) v[pos] = 1;
    return v;
}

namespace {

SignVec xor_vec(const SignVec& a, const SignVec& b) {
    SignVec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] ^ b[i];
    return c;
}

} // namespace

SignVec RSubgroup::reduce(SignVec v) const {
    for (const auto& row : echelon) {
        std::size_t lead = 0;
        while (lead < row.size() && row[lead] == 0) ++lead;
        if (lead < row.size() && v[lead]) v = xor_vec(v, row);
    }
    return v;
}

RSubgroup r_subgroup(const DetProfile& prof, const QuadField& F) {
    RSubgroup R;
    R.ambient_dim = prof.primes.size();
    for (const auto& u : unit_group(F)) {
        SignVec v = R.reduce(sign_vector(prof, u));
        std::size_t lead = 0;
        while (lead < v.size() && v[lead] == 0) ++lead;
        if (lead == v.size()) continue;
        R.echelon.push_back(v);
        std::sort(R.echelon.begin(), R.echelon.end(),
                  [](const SignVec& a, const SignVec& b) { return a > b; });
        // keep echelon reduced
        for (std::size_t i = 0; i < R.echelon.size(); ++i)
            for (std::size_t j = 0; j < R.echelon.size(); ++j) {
                if (i == j) continue;
                std::size_t l = 0;
                while (l < R.echelon[j].size() && R.echelon[j][l] == 0) ++l;
                if (l < R.echelon[j].size() && R.echelon[i][l])
                    R.echelon[i] = xor_vec(R.echelon[i], R.echelon[j]);
            }
    }
    return R;
}

int k_index(const ClassGroup& C, const C0Subgroup& c0, int i, int j) {
    auto prod = C.add(C.coords_of(c0.coset_reps[i]), C.coords_of(c0.coset_reps[j]));
    return c0.coset_index(C, prod);
}

FieldElement cocycle_alpha(const ClassGroup& C, const C0Subgroup& c0, int i, int j) {
    int k = k_index(C, c0, i, j);
    const FracIdeal &Ai = c0.coset_reps[i], &Aj = c0.coset_reps[j], &Ak = c0.coset_reps[k];
    FracIdeal I = mul(Ak, inv(conj_ideal(Ak)));
    I = mul(I, mul(conj_ideal(Ai), inv(Ai)));
    I = mul(I, mul(conj_ideal(Aj), inv(Aj)));
    auto gen = is_principal(I);
    if (!gen) throw verification_error("cocycle ideal is not principal");
    if (gen->norm() != 1) throw verification_error("cocycle generator has norm != 1");
    return *gen;
}

GenusGroup::Elt GenusGroup::mul(const Elt& a, const Elt& b) const {
    Elt r;
    r.coset = k_table[a.coset][b.coset];
    r.q = R.reduce(xor_vec(xor_vec(a.q, b.q), alpha_sign[a.coset][b.coset]));
    return r;
}

long GenusGroup::element_order(const Elt& g) const {
    Elt acc = g;
    long o = 1;
    Elt id = identity();
    while (!(acc == id)) {
        acc = mul(acc, g);
        ++o;
        if (o > order()) throw verification_error("element order exceeds group order");
    }
    return o;
}

namespace {

std::vector<long> abelian_invariants(std::vector<std::vector<int>> table) {
    // table is the multiplication table over element indices; 0 is the identity
    std::size_t n = table.size();
    if (n <= 1) return {};
    // order of each element
    auto order_of = [&](int g) {
        long o = 1;
        int acc = g;
        while (acc != 0) {
            acc = table[acc][g];
            ++o;
        }
        return o;
    };
    long best = 1;
    int gen = 0;
    for (std::size_t g = 0; g < n; ++g) {
        long o = order_of((int)g);
        if (o > best) {
            best = o;
            gen = (int)g;
        }
    }
    // quotient by <gen>
    std::set<int> H;
    int acc = 0;
    do {
        H.insert(acc);
        acc = table[acc][gen];
    } while (acc != 0);
    std::map<int, int> coset_of;  // element -> canonical coset label
    std::vector<int> labels;
    for (std::size_t g = 0; g < n; ++g) {
        if (coset_of.count((int)g)) continue;
        int canon = (int)g;
        std::vector<int> members;
        for (int h : H) {
            int x = table[(int)g][h];
            members.push_back(x);
            canon = std::min(canon, x);
        }
        for (int x : members) coset_of[x] = canon;
    }
    std::map<int, int> index_of;
    for (auto& [elt, canon] : coset_of)
        if (!index_of.count(canon)) {
            int idx = (int)index_of.size();
            index_of[canon] = idx;
        }
    // identity coset must have index 0: relabel so coset_of[0] -> 0
    int id_idx = index_of[coset_of[0]];
    std::size_t q = index_of.size();
    auto relabel = [&](int canon) {
        int idx = index_of[canon];
        if (idx == id_idx) return 0;
        if (idx == 0) return id_idx;
        return idx;
    };
    std::vector<std::vector<int>> qtable(q, std::vector<int>(q, 0));
    std::map<int, int> rep_of;  // coset index -> representative element
    for (auto& [elt, canon] : coset_of) {
        int idx = relabel(canon);
        if (!rep_of.count(idx)) rep_of[idx] = elt;
    }
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
            qtable[a][b] = relabel(coset_of[table[rep_of[(int)a]][rep_of[(int)b]]]);
    std::vector<long> rest = abelian_invariants(std::move(qtable));
    rest.push_back(best);
    return rest;  // ascending divisibility once reversed by the caller? see below
}

} // namespace

std::vector<long> GenusGroup::invariant_factors() const {
    std::map<Elt, int> idx;
    std::vector<Elt> elems = elements;
    // identity must be index 0
    std::sort(elems.begin(), elems.end());
    Elt id = identity();
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (elems[i] == id) std::swap(elems[0], elems[i]);
    for (std::size_t i = 0; i < elems.size(); ++i) idx[elems[i]] = (int)i;
    std::vector<std::vector<int>> table(elems.size(), std::vector<int>(elems.size()));
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = 0; b < elems.size(); ++b)
            table[a][b] = idx.at(mul(elems[a], elems[b]));
    std::vector<long> inv = abelian_invariants(std::move(table));
    std::sort(inv.begin(), inv.end());
    return inv;  // d_1 | d_2 | ... ascending
}

GenusGroup genus_group(const HermLattice& L) {
    const QuadField& F = L.space->F;
    GenusGroup G;
    G.C = class_group(F);
    G.c0 = c0_subgroup(G.C);
    G.profile = det_profile(L);
    G.R = r_subgroup(G.profile, F);

    int r = (int)G.c0.coset_reps.size();
    G.k_table.assign(r, std::vector<int>(r, 0));
    G.alpha_sign.assign(r, std::vector<SignVec>(r));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            G.k_table[i][j] = k_index(G.C, G.c0, i, j);
            FieldElement alpha = cocycle_alpha(G.C, G.c0, i, j);
            G.alpha_sign[i][j] = G.R.reduce(sign_vector(G.profile, alpha));
        }

    // transversal of E(L)/R(L): reduce every vector, dedup
    std::set<SignVec> qreps;
    std::size_t k = G.profile.primes.size();
    for (std::size_t mask = 0; mask < ((std::size_t)1 << k); ++mask) {
        SignVec v(k, 0);
        for (std::size_t b = 0; b < k; ++b) v[b] = (mask >> b) & 1;
        qreps.insert(G.R.reduce(v));
    }
    for (int i = 0; i < r; ++i)
        for (const auto& q : qreps) G.elements.push_back(GenusGroup::Elt{i, q});
    std::sort(G.elements.begin(), G.elements.end());

    // |G| = [C:C0] * [E(L):R(L)]
    std::size_t expected = (std::size_t)r * qreps.size();
    if (G.elements.size() != expected)
        throw verification_error("genus group size mismatch");

    // exhaustive associativity / commutativity / identity checks
    GenusGroup::Elt id = G.identity();
    for (const auto& a : G.elements) {
        if (!(G.mul(a, id) == a) || !(G.mul(id, a) == a))
            throw verification_error("genus group identity fails");
        for (const auto& b : G.elements) {
            if (!(G.mul(a, b) == G.mul(b, a)))
                throw verification_error("genus group is not commutative");
            for (const auto& c : G.elements)
                if (!(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))))
                    throw verification_error("genus group is not associative");
        }
    }
    return G;
}

GenusGroup::Elt psi_neighbour_generator(const HermLattice& L, const GenusGroup& G,
                                        const PrimeIdeal& P) {
    const QuadField& F = L.space->F;
    auto coords = G.C.coords_of(P.ideal);
    int i = G.c0.coset_index(G.C, coords);
    const FracIdeal& Ai = G.c0.coset_reps[i];
    FracIdeal I = mul(mul(P.ideal, inv(conj_ideal(P.ideal))), mul(inv(Ai), conj_ideal(Ai)));
    auto alpha = is_principal(I);
    if (!alpha) throw verification_error("psi: neighbour ideal is not principal");
    if (alpha->norm() != 1) throw verification_error("psi: generator has norm != 1");

    SignVec cP = c_of_prime(G.profile, P);
    GenusGroup::Elt base;
    base.coset = i;
    base.q = G.R.reduce(xor_vec(sign_vector(G.profile, inv(*alpha)), cP));

    // the image must not depend on the choice of generator
    for (const auto& u : unit_group(F)) {
        FieldElement alt = *alpha * u;
        SignVec q = G.R.reduce(xor_vec(sign_vector(G.profile, inv(alt)), cP));
        if (q != base.q) throw verification_error("psi image depends on the generator");
    }
    return base;
}

namespace {

void verify_neighbour(const HermLattice& L, const HermLattice& Lp, const PrimeIdeal& P) {
    long p = P.p;
    HermLattice N = intersect(L, Lp);
    Int q = P.norm();
    verify(z_module_index(L, N) == q, "neighbour: [L : L meet L'] != Nr(P)");
    verify(z_module_index(Lp, N) == q, "neighbour: [L' : L meet L'] != Nr(P)");
    verify(is_sublattice(scale_by_ideal(P.ideal, L), N),
           "neighbour: P L not inside the intersection");
    PrimeIdeal Pc = conj_prime(P);
    verify(is_sublattice(scale_by_ideal(Pc.ideal, Lp), N),
           "neighbour: conj(P) L' not inside the intersection");
    FracIdeal sL = scale(L), sLp = scale(Lp);
    for (const auto& Q : prime_decomposition(L.space->F, p))
        verify(valuation(sL, Q) == valuation(sLp, Q), "neighbour: scale changed at p");
    verify(jordan_decomposition(Lp, p).size() == 1, "neighbour: L' is not modular at p");
    verify(index_ideal(L, Lp) == mul(P.ideal, inv(Pc.ideal)),
           "neighbour: [L : L']_O != P conj(P)^-1");
}

std::vector<FieldElement> residue_system(const QuadField& F, const PrimeIdeal& P) {
    std::vector<FieldElement> reps;
    if (P.kind == PrimeKind::inert) {
        for (long a = 0; a < P.p; ++a)
            for (long b = 0; b < P.p; ++b)
                reps.push_back(from_int(F, a) + FieldElement(F, Rat(b), 0) * omega(F));
    } else {
        for (long a = 0; a < P.p; ++a) reps.push_back(from_int(F, a));
    }
    return reps;
}

} // namespace

HermLattice neighbour(const HermLattice& L, const PrimeIdeal& P,
                      const std::optional<HermLattice>& avoid) {
    const QuadField& F = L.space->F;
    const HermSpace& V = *L.space;
    long p = P.p;
    int m = L.rank();
    require(m >= 2, "neighbour: rank must be at least 2");
    require(!(P.kind == PrimeKind::ramified && p == 2),
            "neighbour: ramified primes must be odd");
    require(is_isotropic(V, p), "neighbour: the space is anisotropic at p");
    LocalData ld = local_data(F, p);
    auto blocks = jordan_decomposition(L, p);
    require(blocks.size() == 1, "neighbour: L is not modular at p");
    long s = blocks[0].scale_val;

    FieldElement sigma = (P.kind == PrimeKind::ramified)
                             ? pow_elt(uniformizer_for_H(F, p), s)
                             : from_rat(F, Rat(pow_int(Int(p), std::abs(s))));
    if (P.kind != PrimeKind::ramified && s < 0) sigma = inv(sigma);

    std::vector<EVec> b = local_basis(L, p);
    std::vector<FieldElement> reps = residue_system(F, P);
    FracIdeal Pbar_inv = inv(conj_prime(P).ideal);
    HermLattice PL = scale_by_ideal(P.ideal, L);

    std::vector<long> sigma_vals, psigma_vals;
    for (const auto& Q : ld.primes) {
        long vs = val_element(sigma, Q);
        sigma_vals.push_back(vs);
        // Phi(x,x) must lie in Nr(conj(P))*sigma: p*sigma, but p^2*sigma when inert
        psigma_vals.push_back(vs + (Q.kind == PrimeKind::split ? 1 : 2));
    }

    auto full_check = [&](const EVec& x) {
        for (std::size_t qi = 0; qi < ld.primes.size(); ++qi) {
            const PrimeIdeal& Q = ld.primes[qi];
            long minv = kValInfinity;
            for (int j = 0; j < m; ++j) minv = std::min(minv, val_element(V.phi(x, b[j]), Q));
            if (minv != sigma_vals[qi]) return false;                      // Phi(x, L) = sigma
            if (val_element(V.phi(x, x), Q) < psigma_vals[qi]) return false;  // Phi(x,x) in p sigma
        }
        return !lattice_member(PL, x);
    };

    auto build = [&](const EVec& x) {
        // M = { y in L : Phi(y, x) in P * I } where I is the ideal Phi(L, x);
        // locally at p this is the condition Phi(y, x) in P sigma, and away
        // from p it is vacuous.
        Int D = 1;
        std::vector<std::pair<Rat, Rat>> phis;
        std::vector<FieldElement> phi_gens;
        for (std::size_t k = 0; k < L.basis.size(); ++k) {
            FieldElement ph = V.phi(L.basis_vector(k), x);
            phi_gens.push_back(ph);
            auto [u, v] = ph.omega_coords();
            D = lcm_int(D, lcm_int(Int(u.get_den()), Int(v.get_den())));
            phis.emplace_back(u, v);
        }
        FracIdeal J = mul(P.ideal, ideal_from_z_span(F, phi_gens));
        D = lcm_int(D, J.den);
        ZMat stacked;
        for (auto& [u, v] : phis)
            stacked.push_back({Int(Rat(u * D).get_num()), Int(Rat(v * D).get_num())});
        Int f = D / J.den;
        stacked.push_back({J.n * f, Int(0)});
        stacked.push_back({J.r * f, J.s * f});
        ZMat ker = left_kernel(stacked);
        std::vector<std::vector<Rat>> rows;
        std::size_t nb = L.basis.size();
        for (const auto& u : ker) {
            std::vector<Rat> row(2 * (std::size_t)m, 0);
            bool nonzero = false;
            for (std::size_t kk = 0; kk < nb; ++kk) {
                if (u[kk] == 0) continue;
                nonzero = true;
                for (std::size_t c = 0; c < row.size(); ++c)
                    row[c] += Rat(u[kk] * L.basis[kk][c], L.den);
            }
            if (!nonzero) continue;
            for (auto& x2 : row) x2.canonicalize();
            rows.push_back(std::move(row));
        }
        for (const FieldElement& beta : {Pbar_inv.basis1(), Pbar_inv.basis2()}) {
            EVec w(x);
            for (auto& c : w) c = beta * c;
            std::vector<Rat> row;
            for (const auto& c : w) {
                auto [u, v] = c.omega_coords();
                row.push_back(u);
                row.push_back(v);
            }
            rows.push_back(std::move(row));
        }
        return lattice_from_z_rows(L.space, rows);
    };

    // correction sweep: u = mu b_j with mu spanning conj(P) mod conj(P)^2-ish
    FracIdeal Pc = conj_prime(P).ideal;
    std::vector<FieldElement> corr = {from_int(F, 0)};
    if (P.kind == PrimeKind::inert) {
        for (const auto& t : reps)
            if (!t.is_zero()) corr.push_back(Rat(p) * t);
    } else {
        for (long t1 = 0; t1 < p; ++t1)
            for (long t2 = 0; t2 < p; ++t2) {
                if (t1 == 0 && t2 == 0) continue;
                corr.push_back(Rat(t1) * Pc.basis1() + Rat(t2) * Pc.basis2());
            }
    }

    auto try_candidate = [&](const EVec& x0) -> std::optional<HermLattice> {
        for (const auto& mu : corr) {
            for (int j = 0; j < m; ++j) {
                EVec x(x0);
                if (!mu.is_zero()) {
                    for (int c = 0; c < m; ++c) x[c] = x[c] + mu * b[j][c];
                }
                if (full_check(x)) {
                    HermLattice Lp = build(x);
                    verify_neighbour(L, Lp, P);
                    if (!(avoid && Lp == *avoid)) return Lp;
                }
                if (mu.is_zero()) break;  // j plays no role without a correction
            }
        }
        return std::nullopt;
    };

    // candidates: leading-one coefficient vectors over O/P
    for (int lead = 0; lead < m; ++lead) {
        std::size_t tail = (std::size_t)(m - 1 - lead);
        std::vector<std::size_t> counter(tail, 0);
        while (true) {
            std::vector<FieldElement> coeff(m, from_int(F, 0));
            coeff[lead] = from_int(F, 1);
            for (std::size_t t = 0; t < tail; ++t) coeff[lead + 1 + t] = reps[counter[t]];
            EVec x(m, from_int(F, 0));
            for (int i2 = 0; i2 < m; ++i2) {
                if (coeff[i2].is_zero()) continue;
                for (int c = 0; c < m; ++c) x[c] = x[c] + coeff[i2] * b[i2][c];
            }
            if (auto Lp = try_candidate(x)) return *Lp;
            std::size_t t = 0;
            while (t < tail && ++counter[t] == reps.size()) {
                counter[t] = 0;
                ++t;
            }
            if (t == tail) break;
        }
    }
    throw precondition_error("neighbour: no qualifying vector found at p = " + std::to_string(p));
}

std::vector<PrimeSearchEntry> prime_search(const HermLattice& L, const GenusGroup& G,
                                           long prime_bound) {
    std::vector<PrimeSearchEntry> chosen;
    std::set<GenusGroup::Elt> span;
    auto rebuild_span = [&]() {
        span.clear();
        span.insert(G.identity());
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<GenusGroup::Elt> cur(span.begin(), span.end());
            for (const auto& a : cur)
                for (const auto& e : chosen) {
                    auto x = G.mul(a, e.image);
                    if (span.insert(x).second) grew = true;
                }
        }
    };
    rebuild_span();
    if ((long)span.size() == G.order()) return chosen;

    for (long p = 2; p <= prime_bound; ++p) {
        if (!is_prime_long(p)) continue;
        auto primes = prime_decomposition(L.space->F, p);
        if (primes[0].kind == PrimeKind::ramified && p == 2) continue;
        if (!is_isotropic(*L.space, p)) continue;
        if (!is_modular_at(L, p)) continue;
        for (const auto& P : primes) {
            auto g = psi_neighbour_generator(L, G, P);
            if (span.count(g)) continue;
            long before = (long)span.size();
            PrimeSearchEntry entry;
            entry.P = P;
            entry.image = g;
            chosen.push_back(entry);
            rebuild_span();
            // order of g in G / <previous>: smallest o with g^o in the old span
            GenusGroup::Elt acc = g;
            long o = 1;
            std::set<GenusGroup::Elt> old_span;
            {
                std::vector<PrimeSearchEntry> prev(chosen.begin(), chosen.end() - 1);
                std::swap(chosen, prev);
                rebuild_span();
                old_span = span;
                std::swap(chosen, prev);
                rebuild_span();
            }
            while (!old_span.count(acc)) {
                acc = G.mul(acc, g);
                ++o;
            }
            chosen.back().order = o;
            verify((long)span.size() == before * o, "prime search: span growth mismatch");
            if ((long)span.size() == G.order()) return chosen;
        }
    }
    throw precondition_error("prime search exhausted below bound " + std::to_string(prime_bound) +
                             " with subgroup of order " + std::to_string(span.size()) + " of " +
                             std::to_string(G.order()));
}

SpecialGenera special_genera(const HermLattice& L, long prime_bound) {
    require(L.rank() >= 2, "special_genera: rank must be at least 2");
    SpecialGenera out;
    out.group = genus_group(L);
    const GenusGroup& G = out.group;

    if (G.order() == 1) {
        out.reps.push_back({L, {}, G.identity(), whole_ring(L.space->F)});
        return out;
    }
    out.generators = prime_search(L, G, prime_bound);

    // neighbour chains L_{i,0} = L, L_{i,j} neighbour of L_{i,j-1} avoiding L_{i,j-2}
    std::vector<std::vector<HermLattice>> chains;
    for (const auto& gen : out.generators) {
        std::vector<HermLattice> chain = {L};
        for (long j = 1; j < gen.order; ++j) {
            const HermLattice& prev = chain[j - 1];
            std::optional<HermLattice> avoid;
            if (j >= 2) avoid = chain[j - 2];
            else avoid = L;
            chain.push_back(neighbour(prev, gen.P, avoid));
        }
        chains.push_back(std::move(chain));
    }

    FracIdeal A = whole_ring(L.space->F);
    for (const auto& gen : out.generators)
        A = mul(A, pow_ideal(gen.P.ideal, gen.order - 1));
    HermLattice AL = scale_by_ideal(A, L);
    HermLattice AbarinvL = scale_by_ideal(inv(conj_ideal(A)), L);

    std::vector<long> radix;
    for (const auto& gen : out.generators) radix.push_back(gen.order);
    std::vector<long> e(radix.size(), 0);
    std::set<GenusGroup::Elt> seen_labels;
    while (true) {
        HermLattice inter = AbarinvL;
        for (std::size_t i = 0; i < chains.size(); ++i)
            inter = intersect(inter, chains[i][e[i]]);
        HermLattice M = sum(AL, inter);

        SpecialGenusRep rep;
        rep.lattice = M;
        rep.exponents = e;
        rep.label = G.identity();
        FracIdeal expected_index = whole_ring(L.space->F);
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (long t = 0; t < e[i]; ++t) {
                rep.label = G.mul(rep.label, out.generators[i].image);
                expected_index = mul(expected_index,
                                     mul(out.generators[i].P.ideal,
                                         inv(conj_ideal(out.generators[i].P.ideal))));
            }
        }
        rep.index = index_ideal(L, M);
        verify(rep.index == expected_index, "special genera: index ideal mismatch");
        verify(seen_labels.insert(rep.label).second, "special genera: duplicate label");
        out.reps.push_back(std::move(rep));

        std::size_t t = 0;
        while (t < e.size() && ++e[t] == radix[t]) {
            e[t] = 0;
            ++t;
        }
        if (t == e.size()) break;
    }
    verify((long)out.reps.size() == G.order(), "special genera: count mismatch");
    for (std::size_t a = 0; a < out.reps.size(); ++a)
        for (std::size_t b = a + 1; b < out.reps.size(); ++b)
            verify(!(out.reps[a].lattice == out.reps[b].lattice),
                   "special genera: representatives not pairwise distinct");
    return out;
}

} // namespace hermgenus
