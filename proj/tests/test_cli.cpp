#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hermgenus/serialize.hpp"

using namespace hermgenus;

namespace {

std::string data_path(const std::string& name) {
    return std::string(TESTS_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(HERM_GENUS_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("lattice file parsing and round trip") {
    HermLattice L = parse_lattice_file(slurp(data_path("example_lattice.json")));
    CHECK(L.rank() == 2);
    CHECK(L.space->F.d == -17);
    CHECK(L.space->gram[0][1] == sqrt_d(L.space->F));

    // round trip through the serialization
    HermLattice L2 = parse_lattice_file(json_to_string(lattice_to_json(L)));
    CHECK(L2 == L);

    // all representatives from special-genera round-trip
    Json rep = special_genera_report(L, 1000);
    for (const auto& r : rep["representatives"]) {
        HermLattice M = lattice_from_json(r["lattice"]);
        CHECK(lattice_from_json(lattice_to_json(M)) == M);
    }
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_lattice_file("not json"), input_error);
    CHECK_THROWS_AS(parse_lattice_file("{\"d\": -17}"), input_error);
    // non-hermitian Gram
    CHECK_THROWS_AS(parse_lattice_file(R"({"d": -17, "rank": 2,
        "gram": [[["1","0"],["0","1"]],[["0","1"],["0","0"]]]})"),
                    input_error);
    // singular Gram
    CHECK_THROWS_AS(parse_lattice_file(R"({"d": -17, "rank": 1, "gram": [[["0","0"]]]})"),
                    input_error);
    // malformed rational
    CHECK_THROWS_AS(parse_lattice_file(R"({"d": -17, "rank": 1, "gram": [[["x","0"]]]})"),
                    input_error);
    // non-squarefree d
    CHECK_THROWS_AS(parse_lattice_file(R"({"d": -4, "rank": 1, "gram": [[["1","0"]]]})"),
                    input_error);
}

TEST_CASE("omitted pseudo_basis means the free lattice") {
    HermLattice L = parse_lattice_file(R"({"d": -5, "rank": 2,
        "gram": [[["1","0"],["0","0"]],[["0","0"],["1","0"]]]})");
    QuadField F = make_field(-5);
    EMat id2 = {{from_int(F, 1), from_int(F, 0)}, {from_int(F, 0), from_int(F, 1)}};
    CHECK(L == free_lattice(make_space(F, id2)));
}

TEST_CASE("cli exit codes cover all outcome paths") {
    std::string example = data_path("example_lattice.json");
    CHECK(run_cli("analyze " + example).exit_code == 0);
    CHECK(run_cli("field-info --d -17 --format json").exit_code == 0);

    // input errors
    CHECK(run_cli("analyze /nonexistent/file.json").exit_code == 1);
    CHECK(run_cli("field-info --d -4").exit_code == 1);
    CHECK(run_cli("field-info --d -17 --format yaml").exit_code == 1);

    // precondition violations
    CHECK(run_cli("neighbour " + data_path("rank1_lattice.json") + " --p 3").exit_code == 2);
    CHECK(run_cli("neighbour " + example + " --p 2").exit_code == 2);  // ramified 2

    // internal verification failures surface as exit 3 (failing selftest suite)
    CHECK(run_cli("selftest --oracle-depth 40").exit_code == 3);
}

TEST_CASE("cli reports are deterministic") {
    std::string example = data_path("example_lattice.json");
    auto a = run_cli("special-genera " + example + " --format json");
    auto b = run_cli("special-genera " + example + " --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());

    auto t1 = run_cli("analyze " + example);
    auto t2 = run_cli("analyze " + example);
    CHECK(t1.out == t2.out);
}

TEST_CASE("neighbour verb emits a parseable neighbour with the right index") {
    std::string example = data_path("example_lattice.json");
    auto r = run_cli("neighbour " + example + " --p 3 --format json");
    REQUIRE(r.exit_code == 0);
    Json j = Json::parse(r.out);
    HermLattice L = parse_lattice_file(slurp(example));
    HermLattice N = lattice_from_json(j["neighbour"]);
    auto threes = prime_decomposition(L.space->F, 3);
    CHECK(index_ideal(L, N) == mul(threes[0].ideal, inv(threes[1].ideal)));

    // avoid file: the second neighbour differs
    std::string tmp = data_path("tmp_avoid.json");
    {
        std::ofstream out(tmp);
        out << json_to_string(j["neighbour"]);
    }
    auto r2 = run_cli("neighbour " + example + " --p 3 --avoid " + tmp + " --format json");
    REQUIRE(r2.exit_code == 0);
    Json j2 = Json::parse(r2.out);
    CHECK(lattice_from_json(j2["neighbour"]) != N);
    std::remove(tmp.c_str());
}
