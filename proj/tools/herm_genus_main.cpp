#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hermgenus/selftest.hpp"
#include "hermgenus/serialize.hpp"

using namespace hermgenus;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const Json& report, const std::string& format) {
    if (format == "json") std::cout << json_to_string(report);
    else std::cout << render_text(report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"herm-genus: local invariants and special genera of hermitian lattices "
                 "over imaginary quadratic fields"};
    app.require_subcommand(1);

    std::string format = "text";
    long d_opt = 0;
    std::string file;
    std::string avoid_file;
    long prime = 0;
    long prime_bound = 1000;
    unsigned long seed = 12345;
    int oracle_depth = 0;

    auto* fieldinfo = app.add_subcommand("field-info", "field, class group and different data");
    fieldinfo->add_option("--d", d_opt, "squarefree negative d of E = Q(sqrt(d))")->required();
    fieldinfo->add_option("--format", format, "text or json");

    auto* classgroup = app.add_subcommand("class-group", "class group with representatives");
    classgroup->add_option("--d", d_opt, "squarefree negative d")->required();
    classgroup->add_option("--format", format, "text or json");

    auto* analyze = app.add_subcommand("analyze", "local data, Jordan blocks and det groups");
    analyze->add_option("file", file, "lattice file")->required();
    analyze->add_option("--format", format, "text or json");

    auto* genera = app.add_subcommand("special-genera", "enumerate the special genera");
    genera->add_option("file", file, "lattice file")->required();
    genera->add_option("--prime-bound", prime_bound, "generator prime search bound");
    genera->add_option("--format", format, "text or json");

    auto* neigh = app.add_subcommand("neighbour", "one P-neighbour at the first prime over p");
    neigh->add_option("file", file, "lattice file")->required();
    neigh->add_option("--p", prime, "rational prime")->required();
    neigh->add_option("--avoid", avoid_file, "lattice file the neighbour must differ from");
    neigh->add_option("--format", format, "text or json");

    auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
    selftest->add_option("--seed", seed, "random seed");
    selftest->add_option("--oracle-depth", oracle_depth, "mod-P^N oracle depth override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (format != "text" && format != "json")
            throw input_error("--format must be 'text' or 'json'");
        if (*fieldinfo) {
            emit(field_info_report(make_field(d_opt)), format);
        } else if (*classgroup) {
            emit(class_group_report(make_field(d_opt)), format);
        } else if (*analyze) {
            emit(analyze_report(parse_lattice_file(read_file(file))), format);
        } else if (*genera) {
            if (prime_bound < 2) throw input_error("--prime-bound must be at least 2");
            emit(special_genera_report(parse_lattice_file(read_file(file)), prime_bound), format);
        } else if (*neigh) {
            HermLattice L = parse_lattice_file(read_file(file));
            if (!is_prime_long(prime)) throw input_error("--p must be a rational prime");
            std::optional<HermLattice> avoid;
            if (!avoid_file.empty()) avoid = parse_lattice_file(read_file(avoid_file));
            emit(neighbour_report(L, prime, avoid), format);
        } else if (*selftest) {
            SelftestOptions opts;
            opts.seed = seed;
            opts.oracle_depth = oracle_depth;
            bool ok = run_selftest(opts, std::cout);
            std::cout << (ok ? "selftest: all suites passed" : "selftest: FAILURES") << "\n";
            return ok ? 0 : 3;
        }
        return 0;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 2;
    } catch (const verification_error& e) {
        std::cerr << "internal verification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
