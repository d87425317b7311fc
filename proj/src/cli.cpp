#include "aggrfix/cli.hpp"

#include "aggrfix/emit.hpp"
#include "aggrfix/error.hpp"
#include "aggrfix/oracle.hpp"
#include "aggrfix/parser.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace aggrfix {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UserError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct LoadedProgram {
    Program program;
    std::string main_path;
};

Program load_program(const std::string& path, const std::vector<std::string>& facts_files,
                     std::ostream& err) {
    ParseResult pr = parse_program(read_file(path));
    if (!pr.ok()) {
        for (const Diagnostic& d : pr.diagnostics) err << path << ':' << d.str() << '\n';
        throw UserError("parse failed");
    }
    Program prog = std::move(*pr.program);
    for (const std::string& f : facts_files) {
        std::vector<Diagnostic> diags;
        if (!parse_facts_into(prog, read_file(f), diags)) {
            for (const Diagnostic& d : diags) err << f << ':' << d.str() << '\n';
            throw UserError("parse failed");
        }
    }
    return prog;
}

// ---- oracle cross-checks ----------------------------------------------------

enum class OracleVerdict { Agree, Disagree, None };

OracleVerdict oracle_check(SemanticsKind kind, Family fam, const GroundProgram& gp,
                           const Structure& d, const SemanticsResult& res, const EvalCaps& caps) {
    oracle::Budget b{caps.max_atoms, caps.max_interval, caps.max_subsets};
    auto same_pair = [&](const aft::Pair<AtomSet>& p) {
        return p.lower == res.lower && p.upper == res.upper;
    };
    auto same_models = [&](const std::vector<AtomSet>& ms) { return ms == res.models; };
    switch (kind) {
    case SemanticsKind::Supported:
        return same_models(oracle::brute_supported(gp, d, b)) ? OracleVerdict::Agree
                                                              : OracleVerdict::Disagree;
    case SemanticsKind::Stable:
        return same_models(oracle::brute_stable_models(gp, d, fam, b)) ? OracleVerdict::Agree
                                                                       : OracleVerdict::Disagree;
    case SemanticsKind::UltimateStable:
        return same_models(oracle::brute_ultimate_stable_models(gp, d, b))
                   ? OracleVerdict::Agree
                   : OracleVerdict::Disagree;
    case SemanticsKind::KK:
        return same_pair(oracle::brute_kripke_kleene(gp, d, fam, b)) ? OracleVerdict::Agree
                                                                     : OracleVerdict::Disagree;
    case SemanticsKind::UltimateKK:
        return same_pair(oracle::brute_ultimate_kripke_kleene(gp, d, b)) ? OracleVerdict::Agree
                                                                         : OracleVerdict::Disagree;
    case SemanticsKind::WF: {
        auto wf = oracle::brute_well_founded(gp, d, fam, b);
        return same_pair({wf.lower, wf.upper}) ? OracleVerdict::Agree : OracleVerdict::Disagree;
    }
    case SemanticsKind::UltimateWF: {
        auto wf = oracle::brute_ultimate_well_founded(gp, d, b);
        return same_pair({wf.lower, wf.upper}) ? OracleVerdict::Agree : OracleVerdict::Disagree;
    }
    case SemanticsKind::Least: {
        AtomSet x(static_cast<std::size_t>(gp.atoms.size()));
        for (;;) {
            AtomSet next = oracle::tp(gp, d, x, b);
            if (next == x) break;
            x = next;
        }
        return x == res.lower ? OracleVerdict::Agree : OracleVerdict::Disagree;
    }
    case SemanticsKind::Standard:
        return oracle::brute_standard_model(gp, d, b) == res.lower ? OracleVerdict::Agree
                                                                   : OracleVerdict::Disagree;
    case SemanticsKind::Flp: return OracleVerdict::None;
    }
    return OracleVerdict::None;
}

// ---- run ---------------------------------------------------------------------

struct RunOptions {
    std::string file;
    std::vector<std::string> facts;
    std::string semantics;
    std::string approx = "ult";
    std::string format = "text";
    bool oracle = false;
    bool serial = false;
    std::uint64_t cap_interval = EvalCaps{}.max_interval;
    std::uint64_t cap_atoms = EvalCaps{}.max_atoms;
};

int do_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    auto kind = semantics_from_name(opt.semantics);
    if (!kind) throw UserError("unknown semantics '" + opt.semantics + "'");
    auto fam = family_from_name(opt.approx);
    if (!fam) throw UserError("unknown approximator family '" + opt.approx + "'");

    Program prog = load_program(opt.file, opt.facts, err);
    Structure d(prog);
    EvalCaps caps;
    caps.max_interval = opt.cap_interval;
    caps.max_atoms = opt.cap_atoms;
    GroundProgram gp = instantiate(prog, d, caps);

    SemanticsRequest req;
    req.kind = *kind;
    req.family = *fam;
    req.caps = caps;
    req.mode = opt.serial ? ExecMode::Serial : ExecMode::Parallel;
    SemanticsResult res = run_semantics(gp, d, req);

    std::optional<Family> shown_family;
    if (semantics_uses_family(*kind)) shown_family = *fam;

    OracleVerdict verdict = OracleVerdict::None;
    if (opt.oracle) {
        verdict = oracle_check(*kind, *fam, gp, d, res, caps);
        if (verdict == OracleVerdict::Disagree) {
            err << "oracle: DISAGREE\n";
            return 3;
        }
    }

    if (opt.format == "json") {
        std::string body = emit_json(res, gp, *kind, shown_family);
        if (opt.oracle) {
            auto j = nlohmann::json::parse(body);
            j["oracle"] = verdict == OracleVerdict::Agree ? "agree" : "none";
            body = j.dump(2) + "\n";
        }
        out << body;
    } else {
        out << emit_text(res, gp, *kind, shown_family);
        if (opt.oracle)
            out << "oracle: " << (verdict == OracleVerdict::Agree ? "agree" : "none") << '\n';
    }
    return 0;
}

// ---- bench --------------------------------------------------------------------

struct BenchRow {
    std::string file;
    std::size_t atoms = 0;
    std::uint64_t kk_apps = 0;
    std::uint64_t wf_apps = 0;
    double wf_ms_serial = 0;
    double wf_ms_parallel = 0;
    bool bounds_ok = true;
};

int do_bench(const std::string& dir, const std::string& format, std::ostream& out,
             std::ostream& err) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".agg") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());

    std::vector<BenchRow> rows;
    bool all_ok = true;
    for (const std::string& file : files) {
        Program prog = load_program(file, {}, err);
        Structure d(prog);
        EvalCaps caps;
        GroundProgram gp = instantiate(prog, d, caps);
        aft::PowersetSpace space{static_cast<std::size_t>(gp.atoms.size())};

        BenchRow row;
        row.file = fs::path(file).filename().string();
        row.atoms = static_cast<std::size_t>(gp.atoms.size());

        auto kk_a = phi_approximator(gp, d, Family::Ult, caps, ExecMode::Parallel);
        aft::kripke_kleene(space, kk_a);
        row.kk_apps = kk_a.applications();

        auto time_wf = [&](ExecMode mode, std::uint64_t* apps) {
            auto a = phi_approximator(gp, d, Family::Ult, caps, mode);
            auto t0 = std::chrono::steady_clock::now();
            aft::well_founded(space, a);
            auto t1 = std::chrono::steady_clock::now();
            if (apps) *apps = a.applications();
            return std::chrono::duration<double, std::milli>(t1 - t0).count();
        };
        row.wf_ms_serial = time_wf(ExecMode::Serial, nullptr);
        row.wf_ms_parallel = time_wf(ExecMode::Parallel, &row.wf_apps);

        std::uint64_t n = row.atoms;
        row.bounds_ok = row.kk_apps <= n + 1 && row.wf_apps <= 4 * n * n;
        all_ok = all_ok && row.bounds_ok;
        rows.push_back(row);
    }

    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const BenchRow& r : rows)
            j.push_back({{"file", r.file},
                         {"atoms", r.atoms},
                         {"kk_applications", r.kk_apps},
                         {"wf_applications", r.wf_apps},
                         {"wf_ms_serial", r.wf_ms_serial},
                         {"wf_ms_parallel", r.wf_ms_parallel},
                         {"bounds_ok", r.bounds_ok}});
        out << j.dump(2) << '\n';
    } else {
        out << "file atoms kk_apps wf_apps wf_ms_serial wf_ms_parallel bounds\n";
        for (const BenchRow& r : rows)
            out << r.file << ' ' << r.atoms << ' ' << r.kk_apps << ' ' << r.wf_apps << ' '
                << r.wf_ms_serial << ' ' << r.wf_ms_parallel << ' '
                << (r.bounds_ok ? "ok" : "VIOLATED") << '\n';
    }
    if (!all_ok) {
        err << "operator application bound violated\n";
        return 3;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fixpoint semantics for logic programs with aggregates", "aggrfix"};
    app.require_subcommand(1);

    RunOptions ropt;
    CLI::App* run = app.add_subcommand("run", "evaluate a program under a semantics");
    run->add_option("file", ropt.file, "program file")->required();
    run->add_option("--facts", ropt.facts, "extra facts files");
    run->add_option("--semantics", ropt.semantics,
                    "supported|least|standard|kk|wf|stable|ultimate-kk|ultimate-wf|"
                    "ultimate-stable|flp")
        ->required();
    run->add_option("--approx", ropt.approx, "triv|ult|bnd (for kk/wf/stable)");
    run->add_option("--format", ropt.format)->check(CLI::IsMember({"text", "json"}));
    run->add_flag("--oracle", ropt.oracle, "cross-check against the brute-force oracle");
    run->add_flag("--serial", ropt.serial, "use the serial reference kernels");
    run->add_option("--cap-interval", ropt.cap_interval, "interval enumeration cap");
    run->add_option("--cap-atoms", ropt.cap_atoms, "model enumeration cap (atoms)");

    std::string bench_dir, bench_format = "text";
    CLI::App* bench = app.add_subcommand("bench", "run the operator-count benchmark on a corpus");
    bench->add_option("dir", bench_dir, "directory of .agg programs")->required();
    bench->add_option("--format", bench_format)->check(CLI::IsMember({"text", "json"}));

    std::vector<std::string> full = {"aggrfix"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(full.size());
    for (std::string& s : full) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (run->parsed()) return do_run(ropt, out, err);
        if (bench->parsed()) return do_bench(bench_dir, bench_format, out, err);
        return 1;
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return 2;
    } catch (const UserError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace aggrfix
