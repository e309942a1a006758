#ifndef HERMGENUS_SERIALIZE_HPP
#define HERMGENUS_SERIALIZE_HPP

#include <json.hpp>

#include "genus.hpp"

namespace hermgenus {

using Json = nlohmann::ordered_json;

Json rat_to_json(const Rat& r);                    // "p/q" or "n"
Json element_to_json(const FieldElement& x);       // ["a", "b"]
FieldElement element_from_json(const QuadField& F, const Json& j);

Json ideal_to_json(const FracIdeal& I);            // {"den": ..., "hnf": [[n,0],[r,s]]}
FracIdeal ideal_from_json(const QuadField& F, const Json& j);

Json prime_to_json(const PrimeIdeal& P);           // {"p": ..., "kind": ..., "index": ...}

Json lattice_to_json(const HermLattice& L);
HermLattice lattice_from_json(const Json& j);
HermLattice parse_lattice_file(const std::string& text);

// report documents shared by the CLI and the tests
Json field_info_report(const QuadField& F);
Json class_group_report(const QuadField& F);
Json analyze_report(const HermLattice& L);
Json special_genera_report(const HermLattice& L, long prime_bound);
Json neighbour_report(const HermLattice& L, long p,
                      const std::optional<HermLattice>& avoid);

// deterministic human-readable rendering of the same documents
std::string render_text(const Json& report);

std::string json_to_string(const Json& j);

} // namespace hermgenus

#endif
