// Command-line workbench: analyze, solve, verify, reproduce, gen.
//
// Exit status is 0 when every executed check passes; otherwise the number of
// failed checks (capped at 100). Errors (bad input, I/O) exit with 101.

#include "vtcp/vtcp.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace vtcp;

constexpr int kErrorExit = 101;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("VTCP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidArgument(std::string("VTCP_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

int exit_code(std::size_t failures) { return static_cast<int>(std::min<std::size_t>(failures, 100)); }

std::string fmt(std::span<const double> v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        ss << (i ? ", " : "") << v[i];
    ss << ')';
    return ss.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

struct Common {
    bool json = false;
};

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string file;
    std::string classes = "vr0,ve,vp,vp1,vp2,strongvp,semipositive";
    std::uint64_t seed = 0;
    int starts = 200;
    std::string report;
};

int run_analyze(const AnalyzeArgs& a, const Common& c) {
    const InstanceFile f = load_instance_file(a.file);
    SearchConfig cfg;
    cfg.seed = a.seed;
    cfg.num_starts = a.starts;
    const TensorPair& pair = f.instance.pair();
    Json out = Json::array();
    std::size_t failures = 0;
    for (const std::string& name : split_list(a.classes)) {
        ClassVerdict v;
        bool sound = true;
        std::string lower = name;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
        if (lower == "semipositive" || lower == "semi-positive") {
            v = semi_positive_witness(pair, cfg);
        } else if (lower == "z1" || lower == "z2") {
            v.class_name = "Z-tensor(A" + lower.substr(1) + ")";
            const bool z = is_z_tensor(lower == "z1" ? pair.a1() : pair.a2());
            v.outcome = z ? Outcome::HoldsCertified : Outcome::Violated;
            v.proof_tag = "entrywise sign check";
        } else if (lower == "r1" || lower == "r2") {
            const DenseTensor& t = lower == "r1" ? pair.a1() : pair.a2();
            v = is_r_tensor(t, cfg);
            sound = recheck_r_certificate(t, v, cfg);
        } else {
            v = check_pair_class(pair, parse_pair_class(name), cfg);
            sound = recheck_certificate(pair, v, cfg);
        }
        if (!sound)
            ++failures;
        if (c.json) {
            Json j = verdict_to_json(v);
            j["certificate_rechecked"] = sound;
            out.push_back(std::move(j));
        } else {
            std::cout << std::left << std::setw(14) << v.class_name << ' ' << to_string(v.outcome);
            if (v.certificate) {
                const Certificate& cert = *v.certificate;
                if (const auto* x = std::get_if<Vector>(&cert.point))
                    std::cout << "  x = " << fmt(*x);
                else if (const auto* xy = std::get_if<VectorPair>(&cert.point))
                    std::cout << "  x = " << fmt(xy->first) << ", y = " << fmt(xy->second);
                else
                    std::cout << "  Z = " << fmt(std::get<SymTensor>(cert.point).distinct_entries());
                std::cout << "  value = " << cert.value << (cert.boundary ? " (boundary)" : "");
            } else if (v.undetermined()) {
                std::cout << "  (" << v.effort.starts << " starts, best value " << v.effort.best_value << ")";
            }
            if (!sound)
                std::cout << "  CERTIFICATE FAILED RECHECK";
            std::cout << '\n';
        }
    }
    if (!a.report.empty())
        save_report(out, a.report);
    if (c.json)
        std::cout << out.dump(2) << '\n';
    return exit_code(failures);
}

// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string file;
    std::string method = "newton";
    std::vector<double> x0;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::string report;
};

int run_solve(const SolveArgs& a, const Common& c) {
    const InstanceFile f = load_instance_file(a.file);
    const VtcpInstance& inst = f.instance;
    SolverConfig cfg;
    cfg.tol_residual = a.tol;
    cfg.seed = a.seed;
    const SolveMethod method = parse_solve_method(a.method);
    Json out;
    std::size_t failures = 0;
    if (method == SolveMethod::Oracle) {
        const OracleResult o = solve_oracle(inst, cfg);
        out = oracle_to_json(o);
        if (o.solutions.empty())
            ++failures;
        if (!c.json) {
            std::cout << "oracle: " << o.solutions.size() << " solution(s) in [-" << cfg.oracle_radius << ", "
                      << cfg.oracle_radius << "]^" << inst.dim() << (o.non_isolated ? " (non-isolated)" : "")
                      << '\n';
            for (const auto& s : o.solutions)
                std::cout << "  x = " << fmt(s) << '\n';
        }
    } else {
        Vector x0 = a.x0.empty() ? Vector(inst.dim(), 1.0) : a.x0;
        if (x0.size() != inst.dim())
            throw DimensionError("--x0 has " + std::to_string(x0.size()) + " entries, instance dim is " +
                                 std::to_string(inst.dim()));
        SolveReport r = method == SolveMethod::Newton     ? solve_newton(inst, x0, cfg)
                        : method == SolveMethod::Homotopy ? solve_homotopy(inst, cfg)
                                                          : solve_mtensor(inst, cfg);
        const Verification v = verify_solution(inst, r.x, std::max(a.tol, 1e-8));
        out = report_to_json(r);
        out["verification"] = verification_to_json(v);
        if (!r.converged())
            ++failures;
        if (!v.passed())
            ++failures;
        if (!c.json) {
            std::cout << to_string(r.method) << ": " << to_string(r.status) << " after " << r.iterations
                      << " iteration(s)\n  x = " << fmt(r.x) << "\n  residual = " << r.residual_inf_norm
                      << "\n  verification: " << (v.passed() ? "pass" : "FAIL") << '\n';
            for (const auto& w : r.warnings)
                std::cout << "  warning: " << w << '\n';
        }
    }
    if (!a.report.empty())
        save_report(out, a.report);
    if (c.json)
        std::cout << out.dump(2) << '\n';
    return exit_code(failures);
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string file;
    std::vector<double> x;
    double tol = 1e-8;
};

int run_verify(const VerifyArgs& a, const Common& c) {
    const InstanceFile f = load_instance_file(a.file);
    const Verification v = verify_solution(f.instance, a.x, a.tol);
    const std::size_t failures = static_cast<std::size_t>(!v.feasible1) + !v.feasible2 + !v.complementary +
                                 !v.residual_ok;
    if (c.json) {
        std::cout << verification_to_json(v).dump(2) << '\n';
    } else {
        auto line = [](const char* what, bool ok, double value) {
            std::cout << "  " << std::left << std::setw(16) << what << (ok ? "pass" : "FAIL") << "  (" << value
                      << ")\n";
        };
        std::cout << "x = " << fmt(a.x) << '\n';
        line("q1 + A1x >= 0", v.feasible1, v.min_image1);
        line("q2 + A2x >= 0", v.feasible2, v.min_image2);
        line("complementary", v.complementary, v.inner_product);
        line("min residual", v.residual_ok, v.residual_inf_norm);
    }
    return exit_code(failures);
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
    std::string example;
    bool all = false;
    std::uint64_t seed = 0;
    int starts = 200;
};

int run_reproduce(const ReproduceArgs& a, const Common& c) {
    if (a.all == !a.example.empty())
        throw InvalidArgument("reproduce: give exactly one of --example ID or --all");
    SearchConfig scfg;
    scfg.seed = a.seed;
    scfg.num_starts = a.starts;
    std::vector<const PaperExample*> todo;
    if (a.all)
        for (const auto& e : example_registry())
            todo.push_back(&e);
    else
        todo.push_back(&find_example(a.example));

    std::size_t failures = 0, total = 0;
    Json out = Json::array();
    for (const PaperExample* ex : todo) {
        const ReproductionReport rep = reproduce(*ex, scfg, SolverConfig{});
        failures += rep.failures();
        total += rep.facts.size();
        Json ej;
        ej["id"] = rep.id;
        ej["passed"] = rep.passed();
        for (const auto& fr : rep.facts) {
            Json fj{{"claim", fr.claim}, {"citation", fr.citation}, {"passed", fr.passed}, {"observed", fr.observed}};
            if (fr.verdict)
                fj["verdict"] = verdict_to_json(*fr.verdict);
            ej["facts"].push_back(std::move(fj));
            if (!c.json)
                std::cout << (fr.passed ? "[pass] " : "[FAIL] ") << rep.id << "  " << fr.claim << "\n         "
                          << fr.observed << '\n';
        }
        out.push_back(std::move(ej));
    }
    if (c.json)
        std::cout << out.dump(2) << '\n';
    else
        std::cout << (total - failures) << '/' << total << " facts reproduced\n";
    return exit_code(failures);
}

// ---------------------------------------------------------------------------

struct GenArgs {
    std::string kind;
    std::size_t order = 3;
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    std::string id;
    std::string output;
};

int run_gen(const GenArgs& a, const Common& c) {
    const GenerateKind kind = parse_generate_kind(a.kind);
    const VtcpInstance inst = generate(kind, a.order, a.dim, a.seed, a.id);
    std::string name = kind == GenerateKind::PaperExample ? "example " + a.id : a.kind + " seed " + std::to_string(a.seed);
    const Json j = instance_to_json(inst, name, "vtcp gen");
    if (!a.output.empty())
        save_instance(inst, a.output, name, "vtcp gen");
    if (c.json || a.output.empty())
        std::cout << j.dump(2) << '\n';
    else
        std::cout << "wrote " << a.output << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vtcp: vertical tensor complementarity workbench"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--json", common.json, "Machine-readable output on stdout");

    std::uint64_t seed = 0;
    try {
        seed = default_seed();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kErrorExit;
    }

    AnalyzeArgs analyze;
    analyze.seed = seed;
    auto* an = app.add_subcommand("analyze", "Check the tensor pair against structure classes");
    an->add_option("file", analyze.file, "Instance file")->required()->check(CLI::ExistingFile);
    an->add_option("--classes", analyze.classes,
                   "Comma list of vr0,ve,vp,vp1,vp2,strongvp,semipositive,z1,z2,r1,r2")
        ->capture_default_str();
    an->add_option("--seed", analyze.seed, "Search seed (default $VTCP_SEED or 0)");
    an->add_option("--starts", analyze.starts, "Random starts per class")->capture_default_str();
    an->add_option("--report", analyze.report, "Write the JSON report to this path");
    an->add_flag("--json", common.json, "Machine-readable output on stdout");

    SolveArgs solve;
    solve.seed = seed;
    auto* so = app.add_subcommand("solve", "Solve the instance");
    so->add_option("file", solve.file, "Instance file")->required()->check(CLI::ExistingFile);
    so->add_option("--method", solve.method, "newton|homotopy|mtensor|oracle")
        ->check(CLI::IsMember({"newton", "homotopy", "mtensor", "oracle"}))
        ->capture_default_str();
    so->add_option("--x0", solve.x0, "Newton start, comma separated")->delimiter(',');
    so->add_option("--tol", solve.tol, "Residual tolerance")->capture_default_str();
    so->add_option("--seed", solve.seed, "Seed (default $VTCP_SEED or 0)");
    so->add_option("--report", solve.report, "Write the JSON report to this path");
    so->add_flag("--json", common.json, "Machine-readable output on stdout");

    VerifyArgs verify;
    auto* ve = app.add_subcommand("verify", "Check a candidate solution");
    ve->add_option("file", verify.file, "Instance file")->required()->check(CLI::ExistingFile);
    ve->add_option("--x", verify.x, "Candidate, comma separated")->required()->delimiter(',');
    ve->add_option("--tol", verify.tol, "Tolerance")->capture_default_str();
    ve->add_flag("--json", common.json, "Machine-readable output on stdout");

    ReproduceArgs repro;
    repro.seed = seed;
    auto* re = app.add_subcommand("reproduce", "Re-derive the registered example facts");
    re->add_option("--example", repro.example, "Example id, e.g. 3.5");
    re->add_flag("--all", repro.all, "All registered examples");
    re->add_option("--seed", repro.seed, "Search seed (default $VTCP_SEED or 0)");
    re->add_option("--starts", repro.starts, "Random starts per class search")->capture_default_str();
    re->add_flag("--json", common.json, "Machine-readable output on stdout");

    GenArgs gen;
    gen.seed = seed;
    auto* ge = app.add_subcommand("gen", "Generate an instance file");
    ge->add_option("--kind", gen.kind, "z-semipositive-pair|random-dense-pair|paper-example")->required();
    ge->add_option("--order", gen.order, "Tensor order m")->capture_default_str();
    ge->add_option("--dim", gen.dim, "Dimension n")->capture_default_str();
    ge->add_option("--seed", gen.seed, "Seed (default $VTCP_SEED or 0)");
    ge->add_option("--id", gen.id, "Example id for paper-example");
    ge->add_option("-o,--output", gen.output, "Output path (stdout if omitted)");
    ge->add_flag("--json", common.json, "Machine-readable output on stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (an->parsed())
            return run_analyze(analyze, common);
        if (so->parsed())
            return run_solve(solve, common);
        if (ve->parsed())
            return run_verify(verify, common);
        if (re->parsed())
            return run_reproduce(repro, common);
        if (ge->parsed())
            return run_gen(gen, common);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what();
        if (!e.field().empty())
            std::cerr << " [field " << e.field() << ']';
        if (e.line() != 0)
            std::cerr << " [line " << e.line() << ']';
        std::cerr << '\n';
        return kErrorExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kErrorExit;
    }
    return kErrorExit;
}
