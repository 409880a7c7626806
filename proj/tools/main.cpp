#include "ccwb/entropy_lp.hpp"
#include "ccwb/search.hpp"
#include "ccwb/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>

namespace {

constexpr const char* kVersion = "ccwb 1.0.0";

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Manifest {
    std::string command;
    std::vector<std::string> arguments;
    std::map<std::string, std::string> input_hashes;
    std::string outcome;
    double wall_seconds = 0;
    std::string path = "ccwb-manifest.json";

    void add_input(const std::string& file) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a(read_file(file))));
        input_hashes[file] = buf;
    }

    void write() const {
        nlohmann::json j;
        j["tool"] = kVersion;
        j["command"] = command;
        j["arguments"] = arguments;
        j["inputs"] = input_hashes;
        j["outcome"] = outcome;
        j["wall_seconds"] = wall_seconds;
        std::ofstream out(path);
        out << j.dump(2) << "\n";
    }
};

void emit(std::ostream* extra, const std::string& text) {
    std::cout << text;
    if (extra) *extra << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coded-caching workbench for the (3,3) problem"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string scheme_path, spec_path, universe_path, cert_path, out_path, emit_cert_path;
    std::string manifest_path = "ccwb-manifest.json";
    std::string objective = "1,1";
    std::uint64_t resume_from = 0;
    int jobs = 1;
    bool reps_only = false, all_demands = true, as_json = false;
    app.add_option("--manifest", manifest_path, "run manifest output path");

    auto* verify = app.add_subcommand("verify", "check a scheme for decodability");
    verify->add_option("scheme", scheme_path)->required();
    auto* flag_all = verify->add_flag("--all-demands", "expand and check all 27 demands (default)");
    verify->add_flag("--reps-only", reps_only, "check only the deliveries present in the file");
    verify->add_option("--out", out_path, "also write the report here");
    verify->add_flag("--json", as_json, "machine-readable report");
    (void)flag_all;

    auto* entab = app.add_subcommand("entropy-table", "joint entropies of the published table");
    entab->add_option("scheme", scheme_path)->required();

    auto* search = app.add_subcommand("search", "enumerate cache seeds against entropy targets");
    search->add_option("spec", spec_path)->required();
    search->add_option("--resume-from", resume_from, "first candidate index");
    search->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
    search->add_option("--out", out_path, "also write matches here");

    auto* prove = app.add_subcommand("prove", "solve the entropy LP and certify the bound");
    prove->add_option("universe", universe_path)->required();
    prove->add_option("--objective", objective, "a,b weights of a*M + b*R")->required();
    prove->add_option("--emit-cert", emit_cert_path, "write the certificate here");

    auto* check = app.add_subcommand("check", "validate a certificate exactly");
    check->add_option("cert", cert_path)->required();
    check->add_option("universe", universe_path)->required();

    auto* expand = app.add_subcommand("expand", "write the all-27-demand scheme");
    expand->add_option("scheme", scheme_path)->required();
    expand->add_option("--out", out_path, "output scheme path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Manifest manifest;
    manifest.path = manifest_path;
    for (int i = 1; i < argc; ++i) manifest.arguments.push_back(argv[i]);
    const auto t0 = std::chrono::steady_clock::now();
    int rc = 0;

    try {
        std::ofstream out_file;
        std::ostream* extra = nullptr;
        if (!out_path.empty()) {
            out_file.open(out_path);
            if (!out_file) throw std::runtime_error("cannot open " + out_path);
            extra = &out_file;
        }

        if (verify->parsed()) {
            manifest.command = "verify";
            manifest.add_input(scheme_path);
            ccwb::Scheme sch = ccwb::load_scheme(scheme_path);
            if (!reps_only) sch = ccwb::expand_all_deliveries(sch);
            const auto rep = ccwb::check_decodability(sch, !reps_only);
            emit(extra, as_json ? rep.json() + "\n" : rep.text());
            manifest.outcome = rep.accepted() ? "accepted" : "rejected";
            rc = rep.accepted() ? 0 : 1;
        } else if (entab->parsed()) {
            manifest.command = "entropy-table";
            manifest.add_input(scheme_path);
            const ccwb::Scheme sch = ccwb::load_scheme(scheme_path);
            const auto prof = ccwb::entropy_profile(sch, ccwb::standard_profile_sets());
            for (const auto& [set, h] : prof)
                std::cout << "H(" << ccwb::varset_name(set) << ") = " << h << "\n";
            manifest.outcome = "ok";
        } else if (search->parsed()) {
            manifest.command = "search";
            manifest.add_input(spec_path);
            const auto spec = ccwb::load_search_spec(spec_path);
            const auto results = ccwb::enumerate_cache_seeds(spec, resume_from, jobs);
            for (const auto& res : results) {
                std::string line = "match " + std::to_string(res.seed_index) + ":";
                for (auto r : res.seed.rows())
                    line += " " + ccwb::row_to_string(r, spec.config);
                emit(extra, line + "\n");
            }
            emit(extra, "matches: " + std::to_string(results.size()) + "\n");
            manifest.outcome = std::to_string(results.size()) + " matches";
        } else if (prove->parsed()) {
            manifest.command = "prove";
            manifest.add_input(universe_path);
            const auto comma = objective.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("--objective expects a,b");
            const ccwb::conv::Rat a(objective.substr(0, comma)), b(objective.substr(comma + 1));
            const auto u = ccwb::conv::Universe::load(universe_path);
            const auto lp = ccwb::conv::build_lp(u, a, b);
            const auto res = ccwb::conv::solve_and_certify(lp);
            if (res.certified) {
                emit(extra, "certified: " + res.bound.str() + "\n");
                if (!emit_cert_path.empty()) {
                    std::ofstream cf(emit_cert_path);
                    cf << serialize_certificate(res.certificate, u);
                }
                manifest.outcome = res.bound.str();
            } else {
                emit(extra, "uncertified (numeric optimum " +
                                std::to_string(res.float_optimum) + ", " + res.note + ")\n");
                manifest.outcome = "uncertified";
                rc = 1;
            }
        } else if (check->parsed()) {
            manifest.command = "check";
            manifest.add_input(cert_path);
            manifest.add_input(universe_path);
            const auto u = ccwb::conv::Universe::load(universe_path);
            const auto cert = ccwb::conv::load_certificate(cert_path, u);
            const auto res = ccwb::conv::check_certificate(cert, u);
            if (res.ok) {
                std::cout << "certificate accepted: " << cert.target.str() << "\n";
                manifest.outcome = "accepted";
            } else {
                std::cout << "certificate rejected: " << res.failure << "\n";
                for (const auto& [c, s] : res.residual.terms)
                    std::cout << "  residual " << c << " * H(" << u.set_name(s) << ")\n";
                manifest.outcome = "rejected";
                rc = 1;
            }
        } else if (expand->parsed()) {
            manifest.command = "expand";
            manifest.add_input(scheme_path);
            const ccwb::Scheme sch = ccwb::expand_all_deliveries(ccwb::load_scheme(scheme_path));
            const std::string text = ccwb::serialize_scheme(sch);
            if (extra) *extra << text;
            else std::cout << text;
            manifest.outcome = "ok";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        manifest.outcome = std::string("error: ") + e.what();
        rc = 2;
    }

    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        manifest.write();
    } catch (...) {
        // manifests never mask the command's own outcome
    }
    return rc;
}
