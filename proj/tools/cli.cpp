#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <boost/uuid/detail/sha1.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "veerkit/certify.hpp"
#include "veerkit/flatsurf.hpp"
#include "veerkit/homology.hpp"
#include "veerkit/io.hpp"
#include "veerkit/veering.hpp"

namespace veerkit {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotPseudoAnosov:
        case ErrorKind::HorizontalOrVerticalSaddle:
        case ErrorKind::BoundExhausted: return kExitBuild;
        case ErrorKind::NoConvergence:
        case ErrorKind::SingularJacobian: return kExitNoConvergence;
        case ErrorKind::BudgetExhausted: return kExitBudget;
        case ErrorKind::NotNonGeometric: return kExitNotNonGeometric;
        case ErrorKind::ParityViolation: return kExitParity;
        case ErrorKind::NotCertified:
        case ErrorKind::TransportDegenerate:
        case ErrorKind::VerificationFailed: return kExitNotCertified;
        default: return kExitUsage;
    }
}

std::string describe(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotPseudoAnosov: return "not pseudo-Anosov";
        case ErrorKind::HorizontalOrVerticalSaddle: return "horizontal or vertical saddle connection";
        case ErrorKind::BoundExhausted: return "enumeration bound exhausted";
        case ErrorKind::BudgetExhausted: return "search budget exhausted";
        case ErrorKind::NotNonGeometric: return "not non-geometric";
        default: return error_kind_name(k);
    }
}

std::string sha1_hex(const std::string& bytes) {
    boost::uuids::detail::sha1 h;
    h.process_bytes(bytes.data(), bytes.size());
    boost::uuids::detail::sha1::digest_type d;
    h.get_digest(d);
    char buf[41];
    for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", d[i]);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json input_record(const std::string& path) { return {{"path", path}, {"sha1", sha1_hex(slurp(path))}}; }

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    f << text;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("VEERKIT_SEED")) {
        try {
            size_t used = 0;
            std::uint64_t s = std::stoull(env, &used);
            if (used == std::string(env).size()) return s;
        } catch (const std::exception&) {
        }
        throw Error(ErrorKind::InvalidInput, std::string("VEERKIT_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

json slope_json(const Slope& s) { return json::array({s.p, s.q}); }

IdealTriangulation positively_labelled(const IdealTriangulation& tri) {
    return tri.is_oriented() ? tri : oriented_copy(tri);
}

// ---------------------------------------------------------------------------

struct BuildArgs {
    std::string word, flatsurf, out;
};

int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    GueritaudResult g;
    if (!a.word.empty()) {
        g = ptorus_bundle(a.word);
    } else {
        FlatInput in = read_flat_surface_file(a.flatsurf);
        if (!in.pa) throw Error(ErrorKind::InvalidInput, a.flatsurf + " has no automorphism key");
        g = gueritaud_triangulation(in.surface, *in.pa);
    }
    json j = triangulation_json(g.tri, g.veering);
    j["signature"] = isomorphism_signature(g.tri);
    err << "build: " << g.tri.tet_count() << " tetrahedra, " << g.tri.vertex_count() << " cusps\n";
    write_text(a.out, j.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_inspect(const std::string& file, std::ostream& out) {
    TriangulationFile f = read_triangulation_file(file);
    const IdealTriangulation& tri = f.tri;
    json j = {{"tet_count", tri.tet_count()},
              {"edge_count", tri.edge_count()},
              {"cusps", tri.vertex_count()},
              {"orientable", tri.orientable()},
              {"positively_labelled", tri.orientable() && tri.is_oriented()},
              {"edge_valences", tri.edge_valences()},
              {"signature", isomorphism_signature(tri)}};
    HomologyGroups h = homology_groups(tri);
    j["homology"] = h.describe();
    std::optional<VeeringStructure> v = f.veering ? f.veering : find_veering_structure(tri);
    j["veering"] = v.has_value();
    if (v && tri.vertex_count() == 1 && h.betti_1 == 1) {
        const CuspCrossSection cs = cusp_cross_section(tri)[0];
        Slope deg = degeneracy_slope(tri, *v, cs), lon = homological_longitude(tri, cs);
        j["degeneracy_slope"] = slope_json(deg);
        j["fiber_boundary_slope"] = slope_json(lon);
        j["slope_intersection"] = intersection_number(deg, lon);
        j["prongs"] = {{"red", prong_count(tri, *v, cs, lon, Color::Red)},
                       {"blue", prong_count(tri, *v, cs, lon, Color::Blue)}};
        j["principal_fiber"] = is_principal_fiber({lon}, {deg});
    }
    out << j.dump(2) << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string file, report;
    double tol = 1e-9;
    std::optional<std::uint64_t> seed;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    json report = {{"command", "solve"}, {"inputs", json::array({input_record(a.file)})}, {"version", kVersion}};
    const std::uint64_t seed = resolve_seed(a.seed);
    report["seed"] = seed;
    IdealTriangulation tri = positively_labelled(read_triangulation_file(a.file).tri);
    GluingSystem sys = assemble(tri);
    SolveOptions opt;
    opt.seed = seed;
    ShapeAssignment s;
    try {
        s = solve(sys, std::nullopt, opt);
    } catch (const Error& e) {
        report["verdict"] = error_kind_name(e.kind());
        report["timings_ms"] = {{"total", ms_since(t0)}};
        if (!a.report.empty()) write_text(a.report, report.dump(2) + "\n", out);
        throw;
    }
    Classification c = classify(s, a.tol);
    json shapes = json::array();
    for (cplx z : s.z) shapes.push_back({z.real(), z.imag()});
    json j = {{"verdict", verdict_name(c.verdict)},
              {"volume", volume(s)},
              {"residual", residual(sys, s)},
              {"tol", a.tol},
              {"shapes", shapes},
              {"negative", c.negative},
              {"flat", c.flat}};
    out << j.dump(2) << "\n";
    err << "solve: " << verdict_name(c.verdict) << " in " << ms_since(t0) << " ms\n";
    report["verdict"] = verdict_name(c.verdict);
    report["volume"] = volume(s);
    report["residual"] = residual(sys, s);
    report["timings_ms"] = {{"total", ms_since(t0)}};
    report["certificate"] = nullptr;
    if (!a.report.empty()) write_text(a.report, report.dump(2) + "\n", out);
    switch (c.verdict) {
        case Verdict::Geometric: return kExitOk;
        case Verdict::NonGeometric: return kExitNonGeometric;
        default: return kExitContainsFlat;
    }
}

struct CertifyArgs {
    std::string file, mode = "geometric", out, report;
    std::optional<std::uint64_t> seed;
    int budget = 10000;
    int max_length = 24;
    int jobs = 1;
};

// The restart budget is cut into a fixed number of chunks with seeds
// seed, seed+1, ...  The lowest chunk that succeeds wins, so the output
// does not depend on how many chunks run at once.
constexpr int kSeedChunks = 8;

Certificate chunked_nongeometric(const IdealTriangulation& tri, const CertifyArgs& a, std::uint64_t seed,
                                 std::ostream& err) {
    std::vector<std::optional<Certificate>> got(kSeedChunks);
    std::vector<std::optional<Error>> failed(kSeedChunks);
    auto run = [&](int k) {
        SearchBudget b;
        b.max_length = a.max_length;
        b.restarts = a.budget / kSeedChunks + (k < a.budget % kSeedChunks ? 1 : 0);
        try {
            got[k] = certify_nongeometric(tri, b, seed + std::uint64_t(k));
        } catch (const Error& e) {
            failed[k] = e;
        }
    };
    const int jobs = std::max(1, a.jobs);
    for (int start = 0; start < kSeedChunks; start += jobs) {
        const int stop = std::min(kSeedChunks, start + jobs);
        std::vector<std::thread> pool;
        for (int k = start + 1; k < stop; ++k) pool.emplace_back(run, k);
        run(start);
        for (auto& t : pool) t.join();
        for (int k = start; k < stop; ++k) {
            if (got[k]) {
                err << "certify: seed chunk " << k << " found a path of " << got[k]->moves.size() << " moves\n";
                return *got[k];
            }
            // Errors other than an exhausted budget do not depend on the seed.
            if (failed[k]->kind() != ErrorKind::BudgetExhausted) throw *failed[k];
        }
    }
    throw Error(ErrorKind::BudgetExhausted, "no geometric triangulation reached in " + std::to_string(a.budget) + " walks");
}

int cmd_certify(const CertifyArgs& a, std::ostream& out, std::ostream& err) {
    const auto t0 = Clock::now();
    json report = {{"command", "certify"}, {"inputs", json::array({input_record(a.file)})}, {"version", kVersion}};
    const std::uint64_t seed = resolve_seed(a.seed);
    report["seed"] = seed;
    report["mode"] = a.mode;
    IdealTriangulation tri = read_triangulation_file(a.file).tri;
    Certificate cert;
    try {
        if (a.mode == "geometric") {
            SolveOptions opt;
            opt.seed = seed;
            cert = certify_geometric(tri, opt);
        } else {
            cert = chunked_nongeometric(tri, a, seed, err);
        }
    } catch (const Error& e) {
        report["verdict"] = error_kind_name(e.kind());
        report["timings_ms"] = {{"total", ms_since(t0)}};
        if (!a.report.empty()) write_text(a.report, report.dump(2) + "\n", out);
        throw;
    }
    std::ostringstream text;
    write_certificate(text, cert);
    write_text(a.out, text.str(), out);
    Interval vol = interval_volume(cert.boxes.back().boxes);
    double worst = 0;
    for (const auto& b : cert.boxes.back().boxes) worst = std::max(worst, b.rad());
    err << "certify: " << cert_verdict_name(cert.verdict) << ", " << cert.moves.size() << " moves, box radius <= "
        << worst << ", volume in [" << hex_double(vol.lo) << ", " << hex_double(vol.hi) << "]\n";
    report["verdict"] = cert_verdict_name(cert.verdict);
    report["moves"] = cert.moves.size();
    report["volume_enclosure"] = {vol.lo, vol.hi};
    report["max_box_radius"] = worst;
    report["timings_ms"] = {{"total", ms_since(t0)}};
    report["certificate"] = a.out.empty() ? json(nullptr) : json(a.out);
    if (!a.report.empty()) write_text(a.report, report.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_check(const std::string& file, std::ostream& out) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + file);
    Certificate cert = read_certificate(in);
    CheckReport r = check_certificate(cert);
    json j = {{"ok", r.ok}, {"verdict", cert_verdict_name(cert.verdict)}, {"steps", cert.steps.size()}};
    if (r.ok) {
        Interval v = interval_volume(cert.boxes.back().boxes);
        j["volume_enclosure"] = {v.lo, v.hi};
    } else {
        j["step"] = r.step;
        j["reason"] = r.reason;
    }
    out << j.dump(2) << "\n";
    return r.ok ? kExitOk : kExitNotCertified;
}

int cmd_homology(const std::string& file, std::ostream& out) {
    HomologyGroups h = homology_groups(read_triangulation_file(file).tri);
    json torsion = json::array();
    for (const auto& t : h.torsion) torsion.push_back(t.str());
    out << json{{"H1", h.describe()}, {"betti_1", h.betti_1}, {"torsion", torsion}, {"rank_h2_rel", h.rank_h2_rel}}.dump(2)
        << "\n";
    return kExitOk;
}

// Affine integer expression in named parameters, e.g. "g-1", "2a+3", "n".
long long evaluate_affine(const std::string& expr, const std::map<std::string, long long>& vars) {
    long long total = 0;
    size_t i = 0;
    auto fail = [&] { throw Error(ErrorKind::InvalidInput, "bad coefficient expression: " + expr); };
    if (expr.empty()) fail();
    while (i < expr.size()) {
        int sign = 1;
        if (expr[i] == '+' || expr[i] == '-') {
            sign = expr[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail();
        }
        size_t j = i;
        while (j < expr.size() && std::isdigit(static_cast<unsigned char>(expr[j]))) ++j;
        long long k = j > i ? std::stoll(expr.substr(i, j - i)) : 1;
        size_t m = j;
        if (m < expr.size() && expr[m] == '*') ++m;
        size_t e = m;
        while (e < expr.size() && std::isalpha(static_cast<unsigned char>(expr[e]))) ++e;
        if (e == m) {
            if (j == i || m != j) fail();
            total += sign * k;
        } else {
            auto it = vars.find(expr.substr(m, e - m));
            if (it == vars.end()) throw Error(ErrorKind::InvalidInput, "unbound parameter " + expr.substr(m, e - m));
            total += sign * k * it->second;
        }
        i = e;
    }
    return total;
}

std::map<std::string, long long> parse_coeffs(const std::string& s) {
    std::map<std::string, long long> vars;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::InvalidInput, "coefficient must be name=value: " + item);
        try {
            size_t used = 0;
            long long v = std::stoll(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
            vars[item.substr(0, eq)] = v;
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "coefficient value is not an integer: " + item);
        }
    }
    return vars;
}

int cmd_fiber(const std::string& face_file, const std::string& coeffs, std::ostream& out) {
    json fj = read_json_file(face_file);
    FaceData face = face_data_from_json(fj);
    auto vars = parse_coeffs(coeffs);
    // An optional "coefficients" key names the class y = c1 v1 + c2 v2 in
    // the file's own parameters; without it the parameters are a and b.
    std::string e1 = "a", e2 = "b";
    if (fj.contains("coefficients")) {
        try {
            e1 = fj.at("coefficients").at("v1").get<std::string>();
            e2 = fj.at("coefficients").at("v2").get<std::string>();
        } catch (const json::exception& e) {
            throw Error(ErrorKind::InvalidInput, std::string("coefficients key: ") + e.what());
        }
    }
    const long long a = evaluate_affine(e1, vars), b = evaluate_affine(e2, vars);
    FiberType ft = fiber_type(face, a, b);
    json boundary = json::array();
    for (const auto& r : ft.boundary)
        boundary.push_back({{"class", {r.p, r.q}}, {"components", r.components}, {"slope", slope_json(r.slope)}});
    out << json{{"coefficients", {a, b}},
                {"surface", "S_{" + std::to_string(ft.genus) + "," + std::to_string(ft.punctures) + "}"},
                {"genus", ft.genus},
                {"punctures", ft.punctures},
                {"norm", ft.norm},
                {"boundary", boundary}}
               .dump(2)
        << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"veering triangulations, gluing equations and certified geometricity"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    BuildArgs build;
    auto* b = app.add_subcommand("build", "veering triangulation of a mapping torus");
    auto* word = b->add_option("--ptorus", build.word, "word in R and L for a punctured-torus bundle");
    auto* flat = b->add_option("--flatsurf", build.flatsurf, "flat surface JSON with an automorphism")->check(CLI::ExistingFile);
    word->excludes(flat);
    b->add_option("--out", build.out, "output file (default stdout)");

    std::string inspect_file;
    auto* ins = app.add_subcommand("inspect", "combinatorics, homology and veering data of a triangulation");
    ins->add_option("file", inspect_file)->required()->check(CLI::ExistingFile);

    SolveArgs solve_a;
    auto* sv = app.add_subcommand("solve", "solve the gluing and completeness equations");
    sv->add_option("file", solve_a.file)->required()->check(CLI::ExistingFile);
    sv->add_option("--tol", solve_a.tol, "flatness margin for the classification")->check(CLI::NonNegativeNumber);
    sv->add_option("--report", solve_a.report, "write a JSON run report here");
    sv->add_option("--seed", solve_a.seed, "seed for Newton restarts (default $VEERKIT_SEED or 0)");

    CertifyArgs cert_a;
    auto* ct = app.add_subcommand("certify", "produce a geometricity certificate");
    ct->add_option("file", cert_a.file)->required()->check(CLI::ExistingFile);
    ct->add_option("--mode", cert_a.mode)->check(CLI::IsMember({"geometric", "nongeometric"}));
    ct->add_option("--seed", cert_a.seed, "search seed (default $VEERKIT_SEED or 0)");
    ct->add_option("--budget", cert_a.budget, "random walks for the non-geometric search")->check(CLI::PositiveNumber);
    ct->add_option("--max-length", cert_a.max_length, "moves per walk")->check(CLI::PositiveNumber);
    ct->add_option("--jobs", cert_a.jobs, "seed workers run at once")->check(CLI::PositiveNumber);
    ct->add_option("--out", cert_a.out, "certificate file (default stdout)");
    ct->add_option("--report", cert_a.report, "write a JSON run report here");

    std::string check_file;
    auto* ck = app.add_subcommand("check", "verify a certificate");
    ck->add_option("file", check_file)->required()->check(CLI::ExistingFile);

    std::string hom_file;
    auto* hm = app.add_subcommand("homology", "H_1 and rank H_2(M, dM)");
    hm->add_option("file", hom_file)->required()->check(CLI::ExistingFile);

    std::string face_file, coeffs;
    auto* fb = app.add_subcommand("fiber", "fiber type of a class on a two-vertex face");
    fb->add_option("--face", face_file)->required()->check(CLI::ExistingFile);
    fb->add_option("--coeffs", coeffs, "parameters, e.g. n=1,g=2")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (b->parsed()) {
            if (build.word.empty() == build.flatsurf.empty()) {
                err << "build: give exactly one of --ptorus or --flatsurf\n";
                return kExitUsage;
            }
            return cmd_build(build, out, err);
        }
        if (ins->parsed()) return cmd_inspect(inspect_file, out);
        if (sv->parsed()) return cmd_solve(solve_a, out, err);
        if (ct->parsed()) return cmd_certify(cert_a, out, err);
        if (ck->parsed()) return cmd_check(check_file, out);
        if (hm->parsed()) return cmd_homology(hom_file, out);
        if (fb->parsed()) return cmd_fiber(face_file, coeffs, out);
    } catch (const Error& e) {
        err << "error: " << describe(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace veerkit
