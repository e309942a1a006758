#include "hermgenus/ideal.hpp"

#include <algorithm>

namespace hermgenus {

FieldElement FracIdeal::basis1() const {
    return FieldElement(F, Rat(n, den), 0);
}

FieldElement FracIdeal::basis2() const {
    Rat u(r, den), v(s, den);
    u.canonicalize();
    v.canonicalize();
    return FieldElement::from_omega(F, u, v);
}

FracIdeal whole_ring(const QuadField& F) {
    FracIdeal I;
    I.F = F;
    return I;
}

namespace {

/* Build the canonical form from integer omega-coordinate rows of D*I. */
FracIdeal canonicalize_ideal(const QuadField& F, const Int& D, const ZMat& rows,
                             bool check_stability) {
    ZMat H = hnf_rows(rows, {1, 0});
    if (H.size() != 2) throw precondition_error("ideal must have full rank (nonzero)");
    // extraction order: pivot on the omega column first
    Int s = H[0][1], r = H[0][0], n = H[1][0];
    if (H[1][1] != 0 || s <= 0 || n <= 0)
        throw verification_error("ideal HNF has unexpected shape");
    Int g = gcd_int(D, gcd_int(n, gcd_int(r, s)));
    FracIdeal I;
    I.F = F;
    I.den = D / g;
    I.n = n / g;
    I.r = r / g;
    I.s = s / g;
    if (check_stability) {
        long t = F.trace_omega();
        Int m = F.norm_omega();
        bool ok = (I.n % I.s == 0) && (I.r % I.s == 0);
        if (ok) {
            // omega*(r + s*omega) = -s*Nr(omega) + (r + s*Tr(omega))*omega
            Int q = I.r / I.s + t;
            Int c0 = -I.s * m - q * I.r;
            ok = (c0 % I.n == 0);
        }
        if (!ok) throw verification_error("Z-span is not an O-module");
    }
    return I;
}

ZMat omega_rows_with_denominator(const std::vector<FieldElement>& gens, Int& D) {
    D = 1;
    std::vector<std::pair<Rat, Rat>> coords;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        auto [u, v] = g.omega_coords();
        D = lcm_int(D, lcm_int(Int(u.get_den()), Int(v.get_den())));
        coords.emplace_back(u, v);
    }
    ZMat rows;
    for (auto& [u, v] : coords) {
        Rat a = u * D, b = v * D;
        rows.push_back({Int(a.get_num()), Int(b.get_num())});
    }
    return rows;
}

} // namespace

FracIdeal ideal_from_z_span(const QuadField& F, const std::vector<FieldElement>& gens) {
    Int D;
    ZMat rows = omega_rows_with_denominator(gens, D);
    if (rows.empty()) throw precondition_error("ideal needs a nonzero generator");
    return canonicalize_ideal(F, D, rows, true);
}

FracIdeal ideal_from_generators(const std::vector<FieldElement>& gens) {
    if (gens.empty()) throw precondition_error("ideal needs a nonzero generator");
    const QuadField& F = gens[0].F;
    std::vector<FieldElement> closed;
    FieldElement w = omega(F);
    for (const auto& g : gens) {
        closed.push_back(g);
        closed.push_back(w * g);
    }
    Int D;
    ZMat rows = omega_rows_with_denominator(closed, D);
    if (rows.empty()) throw precondition_error("ideal needs a nonzero generator");
    return canonicalize_ideal(F, D, rows, false);
}

FracIdeal mul(const FracIdeal& I, const FracIdeal& J) {
    if (I.F != J.F) throw precondition_error("ideals over different fields");
    std::vector<FieldElement> gens = {
        I.basis1() * J.basis1(), I.basis1() * J.basis2(),
        I.basis2() * J.basis1(), I.basis2() * J.basis2()};
    Int D;
    ZMat rows = omega_rows_with_denominator(gens, D);
    return canonicalize_ideal(I.F, D, rows, false);
}

FracIdeal conj_ideal(const FracIdeal& I) {
    std::vector<FieldElement> gens = {I.basis1().conj(), I.basis2().conj()};
    Int D;
    ZMat rows = omega_rows_with_denominator(gens, D);
    return canonicalize_ideal(I.F, D, rows, false);
}

FracIdeal scale_ideal(const Rat& c, const FracIdeal& I) {
    if (c == 0) throw precondition_error("scaling ideal by zero");
    std::vector<FieldElement> gens = {c * I.basis1(), c * I.basis2()};
    Int D;
    ZMat rows = omega_rows_with_denominator(gens, D);
    return canonicalize_ideal(I.F, D, rows, false);
}

FracIdeal inv(const FracIdeal& I) {
    Rat nrm = I.norm();
    return scale_ideal(Rat(1) / nrm, conj_ideal(I));
}

FracIdeal add_ideal(const FracIdeal& I, const FracIdeal& J) {
    if (I.F != J.F) throw precondition_error("ideals over different fields");
    std::vector<FieldElement> gens = {I.basis1(), I.basis2(), J.basis1(), J.basis2()};
    Int D;
    ZMat rows = omega_rows_with_denominator(gens, D);
    return canonicalize_ideal(I.F, D, rows, false);
}

FracIdeal pow_ideal(const FracIdeal& I, long e) {
    FracIdeal base = e < 0 ? inv(I) : I;
    unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
    FracIdeal acc = whole_ring(I.F);
    while (k) {
        if (k & 1) acc = mul(acc, base);
        base = mul(base, base);
        k >>= 1;
    }
    return acc;
}

FracIdeal principal_ideal(const FieldElement& x) {
    return ideal_from_generators({x});
}

bool ideal_contains(const FracIdeal& I, const FieldElement& x) {
    if (x.is_zero()) return true;
    auto [u, v] = x.omega_coords();
    Rat cu = u * I.den, cv = v * I.den;
    if (cu.get_den() != 1 || cv.get_den() != 1) return false;
    Int a(cu.get_num()), b(cv.get_num());
    if (b % I.s != 0) return false;
    Int y = b / I.s;
    return (a - y * I.r) % I.n == 0;
}

bool ideal_subset(const FracIdeal& I, const FracIdeal& J) {
    return ideal_contains(J, I.basis1()) && ideal_contains(J, I.basis2());
}

std::vector<PrimeIdeal> prime_decomposition(const QuadField& F, long p) {
    if (!is_prime_long(p)) throw precondition_error("prime_decomposition: p must be prime");
    long t = F.trace_omega();
    Int m = F.norm_omega();
    std::vector<long> roots;
    for (long w = 0; w < p; ++w) {
        Int val = Int(w) * Int(w) - Int(t) * Int(w) + m;
        if (fmod_int(val, Int(p)) == 0) roots.push_back(w);
    }
    bool ramified = (F.disc % p == 0);

    auto make_prime = [&](long w, PrimeKind kind, int index) {
        PrimeIdeal P;
        P.p = p;
        P.kind = kind;
        P.residue_degree = 1;
        P.omega_root = w;
        P.index = index;
        P.ideal.F = F;
        P.ideal.den = 1;
        P.ideal.n = p;
        P.ideal.r = ((-w) % p + p) % p;
        P.ideal.s = 1;
        return P;
    };

    std::vector<PrimeIdeal> out;
    if (ramified) {
        if (roots.size() != 1)
            throw verification_error("ramified prime without a double root");
        out.push_back(make_prime(roots[0], PrimeKind::ramified, 0));
    } else if (roots.size() == 2) {
        PrimeIdeal a = make_prime(roots[0], PrimeKind::split, 0);
        PrimeIdeal b = make_prime(roots[1], PrimeKind::split, 0);
        if (b.ideal.r < a.ideal.r) std::swap(a, b);
        a.index = 0;
        b.index = 1;
        out.push_back(a);
        out.push_back(b);
    } else if (roots.empty()) {
        PrimeIdeal P;
        P.p = p;
        P.kind = PrimeKind::inert;
        P.residue_degree = 2;
        P.index = 0;
        P.ideal.F = F;
        P.ideal.den = 1;
        P.ideal.n = p;
        P.ideal.r = 0;
        P.ideal.s = p;
        out.push_back(P);
    } else {
        throw verification_error("unramified prime with a double root");
    }
    return out;
}

PrimeIdeal conj_prime(const PrimeIdeal& P) {
    if (P.kind != PrimeKind::split) return P;
    QuadField F = P.ideal.F;
    auto primes = prime_decomposition(F, P.p);
    return primes[1 - P.index];
}

FracIdeal different(const QuadField& F) {
    FieldElement gen = F.half_omega ? FieldElement(F, 0, 1) : FieldElement(F, 0, 2);
    return ideal_from_generators({gen});
}

long valuation(const FracIdeal& I, const PrimeIdeal& P) {
    FracIdeal J = I;
    J.den = 1;  // den*I, integral
    long v = 0;
    FracIdeal Pinv = inv(P.ideal);
    while (ideal_subset(J, P.ideal)) {
        J = mul(J, Pinv);
        ++v;
    }
    long e = (P.kind == PrimeKind::ramified) ? 2 : 1;
    return v - e * v_p(I.den, Int(P.p));
}

long val_element(const FieldElement& x, const PrimeIdeal& P) {
    if (x.is_zero()) return kValInfinity;
    return valuation(principal_ideal(x), P);
}

std::optional<FieldElement> is_principal(const FracIdeal& I) {
    const QuadField& F = I.F;
    FieldElement u1 = FieldElement(F, Rat(I.n), 0);
    FieldElement u2 = FieldElement::from_omega(F, Rat(I.r), Rat(I.s));

    auto B = [](const FieldElement& x, const FieldElement& y) -> Rat {
        return (x * y.conj()).trace() / 2;
    };
    if (u2.norm() < u1.norm()) std::swap(u1, u2);
    while (true) {
        Rat shifted = B(u2, u1) / u1.norm() + Rat(1, 2);
        Int t = fdiv(Int(shifted.get_num()), Int(shifted.get_den()));
        u2 = u2 - FieldElement(u1.F, Rat(t), 0) * u1;
        if (u2.norm() < u1.norm()) std::swap(u1, u2);
        else break;
    }
    if (u1.norm() != Rat(I.n * I.s)) return std::nullopt;
    FieldElement gen = Rat(1, I.den) * u1;
    if (gen.a < 0 || (gen.a == 0 && gen.b < 0)) gen = -gen;
    return gen;
}

FieldElement local_generator(const FracIdeal& I, long p) {
    auto primes = prime_decomposition(I.F, p);
    std::vector<long> targets;
    for (const auto& P : primes) targets.push_back(valuation(I, P));
    FieldElement b1 = I.basis1(), b2 = I.basis2();
    for (long x = 0; x <= p; ++x) {
        for (long y = 0; y <= p; ++y) {
            if (x == 0 && y == 0) continue;
            FieldElement cand = Rat(x) * b1 + Rat(y) * b2;
            bool ok = true;
            for (std::size_t i = 0; i < primes.size() && ok; ++i)
                ok = (val_element(cand, primes[i]) == targets[i]);
            if (ok) return cand;
        }
    }
    throw verification_error("local_generator: search exhausted");
}

std::optional<std::vector<Int>> express_in_z_span(const std::vector<FieldElement>& gens,
                                                  const FieldElement& target) {
    Int D = 1;
    for (const auto& g : gens) {
        auto [u, v] = g.omega_coords();
        D = lcm_int(D, lcm_int(Int(u.get_den()), Int(v.get_den())));
    }
    {
        auto [u, v] = target.omega_coords();
        D = lcm_int(D, lcm_int(Int(u.get_den()), Int(v.get_den())));
    }
    ZMat rows;
    for (const auto& g : gens) {
        auto [u, v] = g.omega_coords();
        rows.push_back({Int(Rat(u * D).get_num()), Int(Rat(v * D).get_num())});
    }
    ZMat U;
    ZMat H = hnf_rows_with_transform(rows, U);
    auto [tu, tv] = target.omega_coords();
    ZRow trow = {Int(Rat(tu * D).get_num()), Int(Rat(tv * D).get_num())};
    auto sol = solve_in_rowspan(H, trow);
    if (!sol) return std::nullopt;
    std::vector<Int> coeffs(gens.size(), 0);
    for (std::size_t t = 0; t < sol->size(); ++t)
        for (std::size_t i = 0; i < gens.size(); ++i)
            coeffs[i] += (*sol)[t] * U[t][i];
    return coeffs;
}

std::pair<FieldElement, FieldElement> express_one(const FracIdeal& U, const FracIdeal& W) {
    const QuadField& F = U.F;
    std::vector<FieldElement> gens = {U.basis1(), U.basis2(), W.basis1(), W.basis2()};
    auto coeffs = express_in_z_span(gens, from_int(F, 1));
    if (!coeffs) throw precondition_error("express_one: ideals are not coprime");
    FieldElement u = Rat((*coeffs)[0]) * gens[0] + Rat((*coeffs)[1]) * gens[1];
    FieldElement w = Rat((*coeffs)[2]) * gens[2] + Rat((*coeffs)[3]) * gens[3];
    verify(u + w == from_int(F, 1), "express_one: combination mismatch");
    return {u, w};
}

std::vector<FieldElement> unit_group(const QuadField& F) {
    std::vector<FieldElement> units = {from_int(F, 1), from_int(F, -1)};
    if (F.d == -1) {
        units.push_back(FieldElement(F, 0, 1));
        units.push_back(FieldElement(F, 0, -1));
    } else if (F.d == -3) {
        FieldElement z = omega(F);  // zeta_6 = (1+sqrt(-3))/2
        FieldElement z2 = z * z;
        units.push_back(z);
        units.push_back(-z);
        units.push_back(z2);
        units.push_back(-z2);
    }
    return units;
}

} // namespace hermgenus
