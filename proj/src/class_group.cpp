#include "hermgenus/class_group.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace hermgenus {

QForm form_of_ideal(const FracIdeal& I) {
    const QuadField& F = I.F;
    FieldElement alpha = I.basis1();
    FieldElement beta = I.basis2();
    Rat N = I.norm();
    Rat a = alpha.norm() / N;
    Rat b = -(alpha * beta.conj() + alpha.conj() * beta).a / N;  // -Tr(alpha * conj(beta)) / N
    Rat c = beta.norm() / N;
    if (a.get_den() != 1 || b.get_den() != 1 || c.get_den() != 1)
        throw verification_error("form_of_ideal: non-integral form");
    QForm f{Int(a.get_num()), Int(b.get_num()), Int(c.get_num())};
    if (f.b * f.b - 4 * f.a * f.c != F.disc)
        throw verification_error("form_of_ideal: discriminant mismatch");
    return f;
}

QForm reduce_form(QForm f, long disc) {
    while (true) {
        if (f.b > f.a || f.b <= -f.a) {
            Int k = fdiv(f.b + f.a, 2 * f.a);
            f.b -= 2 * k * f.a;
            if (f.b == -f.a) f.b = f.a;
            Int num = f.b * f.b - disc;
            f.c = num / (4 * f.a);
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        if (f.b == -f.a) f.b = f.a;
        break;
    }
    return f;
}

FracIdeal ideal_of_form(const QuadField& F, const QForm& f) {
    FieldElement e = F.half_omega ? FieldElement(F, Rat(-f.b, 2), Rat(1, 2))
                                  : FieldElement(F, Rat(-f.b, 2), 1);
    return ideal_from_z_span(F, {FieldElement(F, Rat(f.a), 0), e});
}

std::vector<Int> ClassGroup::add(const std::vector<Int>& x, const std::vector<Int>& y) const {
    std::vector<Int> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = fmod_int(x[i] + y[i], invariant_factors[i]);
    return z;
}

std::vector<Int> ClassGroup::neg(const std::vector<Int>& x) const {
    std::vector<Int> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = fmod_int(-x[i], invariant_factors[i]);
    return z;
}

std::vector<Int> ClassGroup::coords_of(const FracIdeal& I) const {
    QForm key = reduce_form(form_of_ideal(I), F.disc);
    auto it = dlog.find(key);
    if (it == dlog.end()) throw verification_error("class group discrete log miss");
    return it->second;
}

long ClassGroup::order_of(const std::vector<Int>& coords) const {
    Int o = 1;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        Int d = invariant_factors[i];
        Int oi = d / gcd_int(d, coords[i]);
        o = lcm_int(o, oi);
    }
    return o.get_si();
}

FracIdeal ClassGroup::representative(const std::vector<Int>& coords) const {
    auto it = representatives.find(coords);
    if (it == representatives.end()) throw verification_error("missing class representative");
    return it->second;
}

ClassGroup class_group(const QuadField& F) {
    ClassGroup C;
    C.F = F;

    Int bound;  // any bound >= Minkowski's (2/pi) sqrt|disc| works; sqrt|disc| does
    mpz_sqrt(bound.get_mpz_t(), Int(-Int(F.disc)).get_mpz_t());
    bound += 1;

    QForm id_key = reduce_form(form_of_ideal(whole_ring(F)), F.disc);

    std::vector<PrimeIdeal> gens;
    std::set<QForm> seen_gen_keys;
    for (long p = 2; Int(p) <= bound; ++p) {
        if (!is_prime_long(p)) continue;
        for (const auto& P : prime_decomposition(F, p)) {
            if (P.kind == PrimeKind::inert) continue;
            if (P.kind == PrimeKind::split && P.index == 1) continue;
            QForm key = reduce_form(form_of_ideal(P.ideal), F.disc);
            if (key == id_key) continue;
            if (seen_gen_keys.insert(key).second) gens.push_back(P);
        }
    }
    std::size_t k = gens.size();
    C.generating_primes = gens;

    // BFS over the generated group; reduced forms are the element labels
    std::map<QForm, std::vector<Int>> expvec;
    std::map<QForm, FracIdeal> rep_ideal;
    std::set<std::vector<Int>> relations;
    std::deque<QForm> queue;
    expvec[id_key] = std::vector<Int>(k, 0);
    rep_ideal[id_key] = whole_ring(F);
    queue.push_back(id_key);
    while (!queue.empty()) {
        QForm cur = queue.front();
        queue.pop_front();
        std::vector<Int> e = expvec[cur];
        FracIdeal I = rep_ideal[cur];
        for (std::size_t i = 0; i < k; ++i) {
            FracIdeal J = mul(I, gens[i].ideal);
            QForm key = reduce_form(form_of_ideal(J), F.disc);
            std::vector<Int> e2 = e;
            e2[i] += 1;
            auto it = expvec.find(key);
            if (it == expvec.end()) {
                expvec[key] = e2;
                rep_ideal[key] = ideal_of_form(F, key);
                queue.push_back(key);
            } else {
                std::vector<Int> rel(k);
                bool zero = true;
                for (std::size_t j = 0; j < k; ++j) {
                    rel[j] = e2[j] - it->second[j];
                    if (rel[j] != 0) zero = false;
                }
                if (!zero) relations.insert(rel);
            }
        }
    }
    C.h = Int((long)expvec.size());

    // every relation must correspond to a principal product (independent check)
    for (const auto& rel : relations) {
        FracIdeal prod = whole_ring(F);
        for (std::size_t i = 0; i < k; ++i)
            if (rel[i] != 0) prod = mul(prod, pow_ideal(gens[i].ideal, rel[i].get_si()));
        if (!is_principal(prod))
            throw verification_error("class group relation is not principal");
    }

    // structure from the relation matrix
    ZMat R(relations.begin(), relations.end());
    ZMat V;
    std::vector<Int> diag;
    if (k > 0) {
        if (R.size() < k) throw verification_error("class group relations incomplete");
        diag = smith_normal_form(R, V);
        Int prod = 1;
        for (const auto& d : diag) prod *= d;
        if (prod != C.h) throw verification_error("class group order mismatch (SNF vs BFS)");
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < diag.size(); ++i)
        if (diag[i] > 1) keep.push_back(i);
    for (std::size_t i : keep) C.invariant_factors.push_back(diag[i]);

    for (const auto& [key, e] : expvec) {
        std::vector<Int> full(k, 0);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < k; ++i) full[j] += e[i] * V[i][j];
        std::vector<Int> coords;
        for (std::size_t idx = 0; idx < keep.size(); ++idx)
            coords.push_back(fmod_int(full[keep[idx]], diag[keep[idx]]));
        C.dlog[key] = coords;
        C.representatives[coords] = rep_ideal[key];
    }
    if (Int((long)C.representatives.size()) != C.h)
        throw verification_error("class coordinates are not distinct");
    return C;
}

bool C0Subgroup::contains(const std::vector<Int>& coords) const {
    return std::binary_search(members.begin(), members.end(), coords);
}

int C0Subgroup::coset_index(const ClassGroup& C, const std::vector<Int>& coords) const {
    for (std::size_t i = 0; i < coset_coords.size(); ++i) {
        if (contains(C.add(coords, C.neg(coset_coords[i])))) return (int)i;
    }
    throw verification_error("coset index not found");
}

C0Subgroup c0_subgroup(const ClassGroup& C) {
    const QuadField& F = C.F;
    std::vector<std::vector<Int>> gens;
    for (long p : prime_factors_long(Int(F.disc))) {
        auto primes = prime_decomposition(F, p);
        if (primes.size() != 1 || primes[0].kind != PrimeKind::ramified)
            throw verification_error("prime dividing disc is not ramified");
        gens.push_back(C.coords_of(primes[0].ideal));
    }
    std::set<std::vector<Int>> members = {C.zero_coords()};
    std::deque<std::vector<Int>> queue = {C.zero_coords()};
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            auto nxt = C.add(cur, g);
            if (members.insert(nxt).second) queue.push_back(nxt);
        }
    }
    C0Subgroup c0;
    c0.members.assign(members.begin(), members.end());
    std::sort(c0.members.begin(), c0.members.end());

    // enumerate all of C in coordinate lex order; greedily collect coset reps
    std::set<std::vector<Int>> covered;
    std::vector<std::vector<Int>> all;
    for (const auto& [coords, ideal] : C.representatives) all.push_back(coords);
    std::sort(all.begin(), all.end());
    for (const auto& coords : all) {
        if (covered.count(coords)) continue;
        c0.coset_coords.push_back(coords);
        bool is_zero = coords == C.zero_coords();
        c0.coset_reps.push_back(is_zero ? whole_ring(F) : C.representative(coords));
        for (const auto& m : c0.members) covered.insert(C.add(coords, m));
    }
    return c0;
}

} // namespace hermgenus
