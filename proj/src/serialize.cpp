#include "hermgenus/serialize.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hermgenus {

namespace {

Json int_to_json(const Int& n) {
    if (n.fits_slong_p()) return Json(n.get_si());
    return Json(n.get_str());
}

Int int_from_json(const Json& j, const char* what) {
    if (j.is_number_integer()) return Int((long)j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw input_error(std::string("malformed integer in ") + what);
        }
    }
    throw input_error(std::string("expected an integer for ") + what);
}

std::string kind_name(PrimeKind k) {
    switch (k) {
        case PrimeKind::split: return "split";
        case PrimeKind::inert: return "inert";
        case PrimeKind::ramified: return "ramified";
    }
    return "?";
}

} // namespace

Json rat_to_json(const Rat& r) { return Json(rat_to_string(r)); }

Json element_to_json(const FieldElement& x) {
    return Json::array({rat_to_string(x.a), rat_to_string(x.b)});
}

FieldElement element_from_json(const QuadField& F, const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw input_error("field element must be a pair [\"a\", \"b\"]");
    auto get = [](const Json& v) -> Rat {
        if (v.is_string()) return rat_from_string(v.get<std::string>());
        if (v.is_number_integer()) return Rat((long)v.get<long long>());
        throw input_error("field element coordinates must be rational strings");
    };
    return FieldElement(F, get(j[0]), get(j[1]));
}

Json ideal_to_json(const FracIdeal& I) {
    Json j;
    j["den"] = int_to_json(I.den);
    j["hnf"] = Json::array({Json::array({int_to_json(I.n), 0}),
                            Json::array({int_to_json(I.r), int_to_json(I.s)})});
    return j;
}

FracIdeal ideal_from_json(const QuadField& F, const Json& j) {
    if (!j.is_object() || !j.contains("hnf"))
        throw input_error("ideal must be {\"den\": ..., \"hnf\": [[n,0],[r,s]]}");
    FracIdeal I;
    I.F = F;
    I.den = j.contains("den") ? int_from_json(j["den"], "ideal den") : Int(1);
    const Json& h = j["hnf"];
    if (!h.is_array() || h.size() != 2 || h[0].size() != 2 || h[1].size() != 2)
        throw input_error("ideal hnf must be a 2x2 matrix");
    I.n = int_from_json(h[0][0], "ideal hnf");
    I.r = int_from_json(h[1][0], "ideal hnf");
    I.s = int_from_json(h[1][1], "ideal hnf");
    if (int_from_json(h[0][1], "ideal hnf") != 0)
        throw input_error("ideal hnf must be lower triangular");
    if (I.den <= 0 || I.n <= 0 || I.s <= 0 || I.r < 0 || I.r >= I.n)
        throw input_error("ideal hnf out of canonical range");
    // rebuild through the canonical constructor; also validates O-stability
    std::vector<FieldElement> gens = {I.basis1(), I.basis2()};
    FracIdeal J;
    try {
        J = ideal_from_z_span(F, gens);
    } catch (const verification_error&) {
        throw input_error("ideal hnf does not span an O-ideal");
    }
    if (!(J == I)) throw input_error("ideal hnf is not in canonical form");
    return I;
}

Json prime_to_json(const PrimeIdeal& P) {
    Json j;
    j["p"] = P.p;
    j["kind"] = kind_name(P.kind);
    j["index"] = P.index;
    return j;
}

Json lattice_to_json(const HermLattice& L) {
    Json j;
    j["d"] = L.space->F.d;
    j["rank"] = L.rank();
    Json gram = Json::array();
    for (const auto& row : L.space->gram) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(element_to_json(x));
        gram.push_back(r);
    }
    j["gram"] = gram;
    Json pb = Json::array();
    for (const auto& [I, v] : L.pseudo) {
        Json entry;
        entry["ideal"] = ideal_to_json(I);
        Json vec = Json::array();
        for (const auto& c : v) vec.push_back(element_to_json(c));
        entry["vector"] = vec;
        pb.push_back(entry);
    }
    j["pseudo_basis"] = pb;
    return j;
}

HermLattice lattice_from_json(const Json& j) {
    if (!j.is_object()) throw input_error("lattice file must contain a JSON object");
    for (const char* key : {"d", "rank", "gram"})
        if (!j.contains(key)) throw input_error(std::string("lattice file misses '") + key + "'");
    long d = (long)int_from_json(j["d"], "d").get_si();
    QuadField F = make_field(d);
    long m = (long)int_from_json(j["rank"], "rank").get_si();
    if (m <= 0) throw input_error("rank must be positive");
    const Json& g = j["gram"];
    if (!g.is_array() || (long)g.size() != m)
        throw input_error("gram must be a rank x rank matrix");
    EMat gram;
    for (const auto& row : g) {
        if (!row.is_array() || (long)row.size() != m)
            throw input_error("gram must be a rank x rank matrix");
        EVec r;
        for (const auto& x : row) r.push_back(element_from_json(F, x));
        gram.push_back(r);
    }
    SpacePtr space = make_space(F, gram);
    if (!j.contains("pseudo_basis") || j["pseudo_basis"].is_null())
        return free_lattice(space);
    const Json& pb = j["pseudo_basis"];
    if (!pb.is_array() || (long)pb.size() != m)
        throw input_error("pseudo_basis must list rank many entries");
    std::vector<std::pair<FracIdeal, EVec>> pseudo;
    for (const auto& entry : pb) {
        if (!entry.contains("ideal") || !entry.contains("vector"))
            throw input_error("pseudo_basis entries need 'ideal' and 'vector'");
        FracIdeal I = ideal_from_json(F, entry["ideal"]);
        EVec v;
        for (const auto& c : entry["vector"]) v.push_back(element_from_json(F, c));
        if ((long)v.size() != m) throw input_error("pseudo_basis vector of wrong length");
        pseudo.emplace_back(I, v);
    }
    try {
        return lattice_from_pseudo(space, pseudo);
    } catch (const precondition_error& e) {
        throw input_error(std::string("invalid pseudo basis: ") + e.what());
    }
}

HermLattice parse_lattice_file(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("lattice file is not valid JSON: ") + e.what());
    }
    return lattice_from_json(j);
}

namespace {

Json different_factorization(const QuadField& F) {
    Json out = Json::array();
    FracIdeal D = different(F);
    for (long p : prime_factors_long(Int(F.disc))) {
        auto P = prime_decomposition(F, p)[0];
        Json e;
        e["p"] = p;
        e["exponent"] = valuation(D, P);
        out.push_back(e);
    }
    return out;
}

std::vector<long> relevant_primes(const HermLattice& L) {
    std::set<long> ps;
    for (long p : prime_factors_long(Int(L.space->F.disc))) ps.insert(p);
    Rat ns = scale(L).norm();
    for (long p : prime_factors_long(Int(ns.get_num()))) ps.insert(p);
    for (long p : prime_factors_long(Int(ns.get_den()))) ps.insert(p);
    for (long p : prime_factors_long(Int(L.space->det.get_num()))) ps.insert(p);
    for (long p : prime_factors_long(Int(L.space->det.get_den()))) ps.insert(p);
    return {ps.begin(), ps.end()};
}

Json sign_to_json(const SignVec& v) {
    Json out = Json::array();
    for (int b : v) out.push_back(b);
    return out;
}

} // namespace

Json field_info_report(const QuadField& F) {
    Json j;
    j["report"] = "field-info";
    j["d"] = F.d;
    j["disc"] = F.disc;
    j["integral_basis"] = F.half_omega ? "1, (1+sqrt(d))/2" : "1, sqrt(d)";
    ClassGroup C = class_group(F);
    j["class_number"] = int_to_json(C.h);
    Json inv = Json::array();
    for (const auto& f : C.invariant_factors) inv.push_back(int_to_json(f));
    j["invariant_factors"] = inv;
    Json ram = Json::array();
    for (long p : prime_factors_long(Int(F.disc))) ram.push_back(p);
    j["ramified_primes"] = ram;
    j["different"] = Json();
    j["different"]["ideal"] = ideal_to_json(different(F));
    j["different"]["factorization"] = different_factorization(F);
    C0Subgroup c0 = c0_subgroup(C);
    j["c0"] = Json();
    j["c0"]["order"] = (long)c0.members.size();
    j["c0"]["index"] = (long)c0.coset_reps.size();
    j["units"] = (long)unit_group(F).size();
    return j;
}

Json class_group_report(const QuadField& F) {
    Json j;
    j["report"] = "class-group";
    j["d"] = F.d;
    j["disc"] = F.disc;
    ClassGroup C = class_group(F);
    j["class_number"] = int_to_json(C.h);
    Json inv = Json::array();
    for (const auto& f : C.invariant_factors) inv.push_back(int_to_json(f));
    j["invariant_factors"] = inv;
    Json classes = Json::array();
    for (const auto& [coords, ideal] : C.representatives) {
        Json e;
        Json cc = Json::array();
        for (const auto& c : coords) cc.push_back(int_to_json(c));
        e["coords"] = cc;
        QForm f = reduce_form(form_of_ideal(ideal), F.disc);
        e["reduced_form"] = Json::array({int_to_json(f.a), int_to_json(f.b), int_to_json(f.c)});
        e["ideal"] = ideal_to_json(ideal);
        classes.push_back(e);
    }
    j["classes"] = classes;
    C0Subgroup c0 = c0_subgroup(C);
    j["c0"] = Json();
    j["c0"]["order"] = (long)c0.members.size();
    j["c0"]["index"] = (long)c0.coset_reps.size();
    Json reps = Json::array();
    for (const auto& A : c0.coset_reps) reps.push_back(ideal_to_json(A));
    j["c0"]["coset_representatives"] = reps;
    return j;
}

Json analyze_report(const HermLattice& L) {
    const QuadField& F = L.space->F;
    Json j;
    j["report"] = "analyze";
    j["field"] = Json();
    j["field"]["d"] = F.d;
    j["field"]["disc"] = F.disc;
    j["lattice"] = lattice_to_json(L);
    j["scale"] = ideal_to_json(scale(L));
    j["norm"] = ideal_to_json(norm_ideal(L));
    j["det"] = rat_to_json(L.space->det);
    Json locals = Json::array();
    for (long p : relevant_primes(L)) {
        LocalData ld = local_data(F, p);
        Json e;
        e["p"] = p;
        e["kind"] = kind_name(ld.kind);
        e["e"] = ld.e;
        e["e_prime"] = ld.e_prime;
        if (p == 2 && ld.ramified() && ld.e % 2 == 0) {
            // wildly ramified case (2): e = 2 ord(2) - 2k fixes k informationally
            e["case2_k"] = (2 - ld.e) / 2;
        }
        Json blocks = Json::array();
        for (const auto& blk : jordan_decomposition(L, p)) {
            Json b;
            b["s"] = blk.scale_val;
            b["rank"] = blk.rank;
            b["norm_val"] = blk.norm_val;
            b["h_type"] = blk.is_H_type;
            blocks.push_back(b);
        }
        e["blocks"] = blocks;
        e["det_group"] = det_group(L, p) == DetGroupLabel::E1 ? "E1" : "E0";
        locals.push_back(e);
    }
    j["local"] = locals;
    DetProfile prof = det_profile(L);
    Json pj = Json::array();
    for (long p : prof.primes) pj.push_back(p);
    j["det_profile"] = Json();
    j["det_profile"]["primes"] = pj;
    j["det_profile"]["e_l_rank"] = (long)prof.primes.size();
    RSubgroup R = r_subgroup(prof, F);
    j["r_subgroup"] = Json();
    j["r_subgroup"]["order"] = (long)R.order();
    j["r_subgroup"]["index"] = (long)(((std::size_t)1 << prof.primes.size()) / R.order());
    Json unit_sign = Json::array();
    for (const auto& u : unit_group(F)) {
        Json e;
        e["unit"] = element_to_json(u);
        e["sign_vector"] = sign_to_json(sign_vector(prof, u));
        unit_sign.push_back(e);
    }
    j["r_subgroup"]["unit_images"] = unit_sign;
    return j;
}

Json special_genera_report(const HermLattice& L, long prime_bound) {
    const QuadField& F = L.space->F;
    Json j;
    j["report"] = "special-genera";
    j["field"] = Json();
    j["field"]["d"] = F.d;
    j["field"]["disc"] = F.disc;
    j["lattice"] = lattice_to_json(L);
    SpecialGenera S = special_genera(L, prime_bound);
    Json group;
    group["order"] = S.group.order();
    Json inv = Json::array();
    for (long f : S.group.invariant_factors()) inv.push_back(f);
    group["invariant_factors"] = inv;
    group["class_cosets"] = (long)S.group.c0.coset_reps.size();
    group["e_mod_r_index"] =
        (long)(((std::size_t)1 << S.group.profile.primes.size()) / S.group.R.order());
    Json gens = Json::array();
    for (const auto& g : S.generators) {
        Json e;
        e["prime"] = prime_to_json(g.P);
        e["order"] = g.order;
        gens.push_back(e);
    }
    group["generators"] = gens;
    j["group"] = group;
    Json reps = Json::array();
    for (const auto& rep : S.reps) {
        Json e;
        Json ex = Json::array();
        for (long x : rep.exponents) ex.push_back(x);
        e["exponents"] = ex;
        e["label"] = Json();
        e["label"]["coset"] = rep.label.coset;
        e["label"]["sign_vector"] = sign_to_json(rep.label.q);
        e["index_ideal"] = ideal_to_json(rep.index);
        e["lattice"] = lattice_to_json(rep.lattice);
        reps.push_back(e);
    }
    j["representatives"] = reps;
    return j;
}

Json neighbour_report(const HermLattice& L, long p, const std::optional<HermLattice>& avoid) {
    const QuadField& F = L.space->F;
    auto primes = prime_decomposition(F, p);
    const PrimeIdeal& P = primes[0];
    HermLattice Lp = neighbour(L, P, avoid);
    Json j;
    j["report"] = "neighbour";
    j["prime"] = prime_to_json(P);
    j["input"] = lattice_to_json(L);
    j["neighbour"] = lattice_to_json(Lp);
    j["index_ideal"] = ideal_to_json(index_ideal(L, Lp));
    return j;
}

namespace {

std::string ideal_text(const Json& ideal) {
    std::ostringstream os;
    os << "den " << ideal["den"].dump() << ", hnf [[" << ideal["hnf"][0][0].dump() << ",0],["
       << ideal["hnf"][1][0].dump() << "," << ideal["hnf"][1][1].dump() << "]]";
    return os.str();
}

void render_lattice_brief(std::ostringstream& os, const Json& lat, const std::string& indent) {
    os << indent << "d = " << lat["d"].dump() << ", rank = " << lat["rank"].dump() << "\n";
    os << indent << "pseudo basis:\n";
    for (const auto& e : lat["pseudo_basis"]) {
        os << indent << "  (" << ideal_text(e["ideal"]) << ") * [";
        bool first = true;
        for (const auto& c : e["vector"]) {
            if (!first) os << ", ";
            first = false;
            std::string a = c[0].get<std::string>(), b = c[1].get<std::string>();
            os << a;
            if (b != "0") os << (b[0] == '-' ? "" : "+") << b << "*sqrt(d)";
        }
        os << "]\n";
    }
}

} // namespace

std::string render_text(const Json& report) {
    std::ostringstream os;
    std::string kind = report["report"].get<std::string>();
    if (kind == "field-info") {
        os << "field Q(sqrt(" << report["d"].dump() << ")), disc " << report["disc"].dump()
           << ", integral basis " << report["integral_basis"].get<std::string>() << "\n";
        os << "class number " << report["class_number"].dump() << ", invariant factors "
           << report["invariant_factors"].dump() << "\n";
        os << "ramified primes " << report["ramified_primes"].dump() << ", different "
           << ideal_text(report["different"]["ideal"]) << "\n";
        os << "C0: order " << report["c0"]["order"].dump() << ", [C:C0] = "
           << report["c0"]["index"].dump() << ", units " << report["units"].dump() << "\n";
    } else if (kind == "class-group") {
        os << "class group of Q(sqrt(" << report["d"].dump() << ")): order "
           << report["class_number"].dump() << ", invariant factors "
           << report["invariant_factors"].dump() << "\n";
        for (const auto& c : report["classes"])
            os << "  coords " << c["coords"].dump() << "  form " << c["reduced_form"].dump()
               << "  ideal " << ideal_text(c["ideal"]) << "\n";
        os << "C0 order " << report["c0"]["order"].dump() << ", index "
           << report["c0"]["index"].dump() << "\n";
    } else if (kind == "analyze") {
        os << "lattice over Q(sqrt(" << report["field"]["d"].dump() << ")), rank "
           << report["lattice"]["rank"].dump() << ", det " << report["det"].get<std::string>()
           << "\n";
        os << "scale: " << ideal_text(report["scale"]) << "\n";
        os << "norm:  " << ideal_text(report["norm"]) << "\n";
        os << " p     kind      e  blocks (s, rank, norm_val, H)            det\n";
        for (const auto& e : report["local"]) {
            std::ostringstream blocks;
            for (const auto& b : e["blocks"])
                blocks << "(" << b["s"].dump() << "," << b["rank"].dump() << ","
                       << b["norm_val"].dump() << "," << (b["h_type"].get<bool>() ? "H" : "-")
                       << ") ";
            std::string ps = e["p"].dump();
            os << " " << ps << std::string(ps.size() < 5 ? 5 - ps.size() : 1, ' ')
               << e["kind"].get<std::string>()
               << std::string(10 - e["kind"].get<std::string>().size(), ' ') << e["e"].dump()
               << "  " << blocks.str();
            std::string bs = blocks.str();
            if (bs.size() < 38) os << std::string(38 - bs.size(), ' ');
            os << e["det_group"].get<std::string>() << "\n";
        }
        os << "P(L) = " << report["det_profile"]["primes"].dump() << ", E(L) rank "
           << report["det_profile"]["e_l_rank"].dump() << "\n";
        os << "R(L) order " << report["r_subgroup"]["order"].dump() << ", [E(L):R(L)] = "
           << report["r_subgroup"]["index"].dump() << "\n";
    } else if (kind == "special-genera") {
        os << "genus group G(L): order " << report["group"]["order"].dump()
           << ", invariant factors " << report["group"]["invariant_factors"].dump() << "\n";
        os << "  [C:C0] = " << report["group"]["class_cosets"].dump() << ", [E(L):R(L)] = "
           << report["group"]["e_mod_r_index"].dump() << "\n";
        os << "generators:\n";
        for (const auto& g : report["group"]["generators"])
            os << "  p = " << g["prime"]["p"].dump() << " (index " << g["prime"]["index"].dump()
               << ", " << g["prime"]["kind"].get<std::string>() << "), order " << g["order"].dump()
               << "\n";
        os << "representatives (" << report["representatives"].size() << "):\n";
        for (const auto& r : report["representatives"]) {
            os << "- exponents " << r["exponents"].dump() << ", label coset "
               << r["label"]["coset"].dump() << " sign " << r["label"]["sign_vector"].dump()
               << "\n";
            os << "  index ideal " << ideal_text(r["index_ideal"]) << "\n";
            render_lattice_brief(os, r["lattice"], "  ");
        }
    } else if (kind == "neighbour") {
        os << "neighbour at p = " << report["prime"]["p"].dump() << " ("
           << report["prime"]["kind"].get<std::string>() << ")\n";
        os << "index ideal " << ideal_text(report["index_ideal"]) << "\n";
        render_lattice_brief(os, report["neighbour"], "");
    } else {
        os << report.dump(2) << "\n";
    }
    return os.str();
}

std::string json_to_string(const Json& j) { return j.dump(2) + "\n"; }

} // namespace hermgenus
