#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "nutaxis/inequalities.hpp"
#include "nutaxis/io.hpp"
#include "nutaxis/ode_lemmas.hpp"
#include "nutaxis/scenarios.hpp"
#include "nutaxis/svg.hpp"
#include "nutaxis/weakform.hpp"

#ifdef NUTAXIS_OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace nutaxis;

namespace {

constexpr int kExitFail = 1;  // a required check failed
constexpr int kExitUsage = 2; // usage / config error

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

// --- run ---------------------------------------------------------------

int cmd_run(const std::string& config, const std::string& outdir_flag) {
    const Scenario sc0 = parse_scenario_file(config);
    Scenario sc = sc0;
    if (!outdir_flag.empty()) sc.outdir = outdir_flag;
    const BuiltScenario b = build(sc);
    fs::create_directories(sc.outdir);

    const Field u0 = b.state.u, v0 = b.state.v;
    RunSinks sinks;
    sinks.on_snapshot = [&](const State& s, long step) {
        write_snapshot((fs::path(sc.outdir) / snapshot_name("u", step)).string(), s.u, s.t);
        write_snapshot((fs::path(sc.outdir) / snapshot_name("v", step)).string(), s.v, s.t);
    };

    const RunResult rr = run(b.state, b.params, b.control, b.runcfg, b.moncfg, sinks);
    write_monitors_csv((fs::path(sc.outdir) / "monitors.csv").string(), b.moncfg, rr.monitors);

    const BoundReport rep = check_bounds(rr.monitors, u0, v0, b.params, b.moncfg);
    write_bound_report((fs::path(sc.outdir) / "bounds.txt").string(), rep);

    std::cout << "scenario " << sc.name << ": " << to_string(rr.reason) << " after "
              << rr.steps << " steps, t = " << rr.final_state.t << "\n";
    for (const BoundEntry& e : rep.entries)
        std::cout << "  " << e.name << ' ' << e.verdict << " asserted=" << fmt17(e.asserted)
                  << " observed=" << fmt17(e.observed) << '\n';

    if (rr.reason != Termination::completed) {
        std::cerr << "run did not complete: " << rr.message << '\n';
        return kExitFail;
    }
    if (!rep.all_required_pass()) {
        std::cerr << "bound report has failures\n";
        return kExitFail;
    }
    return 0;
}

// --- sweep -------------------------------------------------------------

int cmd_sweep(const std::string& config, const std::string& eps_csv,
              const std::string& outdir_flag) {
    Scenario sc = parse_scenario_file(config);
    if (!outdir_flag.empty()) sc.outdir = outdir_flag;
    const std::vector<double> eps = parse_double_list(eps_csv);
    if (eps.empty())
        throw ConfigError("sweep: --eps list is empty");
    const SweepReport rep = epsilon_sweep(sc, eps);

    fs::create_directories(sc.outdir);
    {
        std::ofstream os(fs::path(sc.outdir) / "sweep.csv");
        os << "epsilon,termination,sup_u,entropy,w4,w6,sup_grad_v\n";
        for (const SweepRow& r : rep.rows)
            os << fmt17(r.epsilon) << ',' << to_string(r.reason) << ',' << fmt17(r.sup_u)
               << ',' << fmt17(r.sup_entropy) << ',' << fmt17(r.sup_w4) << ','
               << fmt17(r.sup_w6) << ',' << fmt17(r.sup_grad_v) << '\n';
    }
    {
        std::ofstream os(fs::path(sc.outdir) / "sweep_ratios.txt");
        for (const auto& [k, v] : rep.ratios) {
            os << k << ' ' << fmt17(v) << '\n';
            std::cout << "ratio " << k << " = " << fmt17(v) << '\n';
        }
    }
    return rep.all_completed() ? 0 : kExitFail;
}

// --- gronwall ----------------------------------------------------------

// Series spec: a csv column name, optionally scaled and powered
// ("COL", "2.5*COL", "COL^2", "0.5*COL^2"), or a bare numeric constant.
std::vector<double> eval_series_spec(const CsvTable& tab, const std::string& spec) {
    try {
        std::size_t pos = 0;
        const double c = std::stod(spec, &pos);
        if (pos == spec.size())
            return std::vector<double>(tab.rows.size(), c);
    } catch (const std::exception&) {
    }
    double coef = 1.0, power = 1.0;
    std::string name = spec;
    if (const auto star = name.find('*'); star != std::string::npos) {
        coef = std::stod(name.substr(0, star));
        name.erase(0, star + 1);
    }
    if (const auto caret = name.find('^'); caret != std::string::npos) {
        power = std::stod(name.substr(caret + 1));
        name.erase(caret);
    }
    std::vector<double> col = tab.column(name);
    for (double& v : col) v = coef * (power == 1.0 ? v : std::pow(v, power));
    return col;
}

int cmd_gronwall(const std::string& csv, const std::string& lemma_name,
                 const std::string& map_spec, double tau, double a_const) {
    const CsvTable tab = read_csv(csv);
    Lemma which;
    if (lemma_name == "L21") which = Lemma::L21;
    else if (lemma_name == "L22") which = Lemma::L22;
    else if (lemma_name == "L23") which = Lemma::L23;
    else throw ConfigError("gronwall: --lemma must be L21, L22 or L23");

    LemmaSeries s;
    s.times = tab.column("t");
    s.tau = tau;
    std::stringstream ss(map_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("gronwall: --map items must look like z=COL");
        const std::string key = item.substr(0, eq);
        const std::string spec = item.substr(eq + 1);
        if (key == "z") s.z = eval_series_spec(tab, spec);
        else s.aux[key] = eval_series_spec(tab, spec);
    }
    if (s.z.empty())
        throw ConfigError("gronwall: --map must define z");

    const LemmaValidation v = validate(s, which, a_const);
    std::cout << lemma_name << " hypotheses_hold=" << (v.hypotheses_hold ? "yes" : "no");
    for (const auto& [k, val] : v.window_sups) std::cout << ' ' << k << '=' << fmt17(val);
    std::cout << "\nbound=" << fmt17(v.bound)
              << " conclusion_holds=" << (v.conclusion_holds ? "yes" : "no")
              << " max_violation=" << fmt17(v.max_violation) << '\n';
    if (!v.detail.empty()) std::cout << "detail: " << v.detail << '\n';
    return v.conclusion_holds ? 0 : kExitFail;
}

// --- ineq --------------------------------------------------------------

std::vector<State> load_snapshots(const std::string& dir);

int cmd_ineq(const std::string& which, double p, double eta, int q,
             const std::string& family, int count, std::uint64_t seed,
             std::vector<int> grid, double c1_flag, const std::string& snapdir,
             const std::string& outfile) {
    if (grid.size() != 2)
        throw ConfigError("ineq: --grid takes NX NY");
    const Grid2D g(grid[0], grid[1], 1.0, 1.0);
    FieldFamily fam;
    fam.kind = family_kind_from_string(family);
    fam.count = count;
    fam.seed = seed;

    std::ostringstream out;
    int rc = 0;
    if (which == "sobolev") {
        const double c1 = estimate_sobolev_c1(fam, g);
        out << "sobolev_c1 " << fmt17(c1) << '\n';
    } else if (which == "l41") {
        const double c1 = (c1_flag > 0.0) ? c1_flag : 2.0 * estimate_sobolev_c1(fam, g);
        const std::vector<Field> fields = generate_family(fam, g);
        double max_ratio = 0.0;
        for (std::size_t k = 0; k + 1 < fields.size(); k += 2) {
            const InequalityEntry e = check_lemma41(fields[k], fields[k + 1], p, c1);
            out << "l41 sample " << k / 2 << " lhs " << fmt17(e.lhs) << " rhs "
                << fmt17(e.rhs) << " ratio " << fmt17(e.ratio) << '\n';
            max_ratio = std::max(max_ratio, e.ratio);
        }
        out << "l41 c1 " << fmt17(c1) << " max_ratio " << fmt17(max_ratio) << '\n';
        rc = max_ratio <= 1.0 ? 0 : kExitFail;
    } else if (which == "l42") {
        const std::vector<Field> fields = generate_family(fam, g);
        double fitted = 0.0;
        for (std::size_t k = 0; k + 1 < fields.size(); k += 2) {
            const InequalityEntry e = check_lemma42(fields[k], fields[k + 1], p, eta);
            out << "l42 sample " << k / 2 << " lhs " << fmt17(e.lhs) << " fitted_c "
                << fmt17(e.fitted_constant) << '\n';
            fitted = std::max(fitted, e.fitted_constant);
        }
        out << "l42 p " << fmt17(p) << " eta " << fmt17(eta) << " fitted_c "
            << fmt17(fitted) << '\n';
    } else if (which == "l52") {
        if (snapdir.empty())
            throw ConfigError("ineq --which l52 needs --snapshots DIR");
        const std::vector<State> snaps = load_snapshots(snapdir);
        const TrajectoryInequality t = check_lemma52_trajectory(snaps, q);
        out << t.name << " gamma_empirical " << fmt17(t.gamma_empirical)
            << " gamma_structural " << fmt17(t.gamma_structural) << " intervals "
            << t.intervals << '\n';
        rc = t.pass ? 0 : kExitFail;
    } else {
        throw ConfigError("ineq: --which must be sobolev, l41, l42 or l52");
    }

    std::cout << out.str();
    if (!outfile.empty()) {
        std::ofstream os(outfile);
        os << out.str();
    }
    return rc;
}

// --- weakcheck ----------------------------------------------------------

std::vector<State> load_snapshots(const std::string& dir) {
    std::map<std::string, fs::path> u_files, v_files;
    if (!fs::is_directory(dir))
        throw ConfigError("snapshot directory not found: " + dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() < 5 || name.substr(name.size() - 4) != ".fld") continue;
        if (name.rfind("u_", 0) == 0) u_files[name.substr(2)] = entry.path();
        if (name.rfind("v_", 0) == 0) v_files[name.substr(2)] = entry.path();
    }
    std::vector<State> snaps;
    for (const auto& [stem, upath] : u_files) {
        const auto vit = v_files.find(stem);
        if (vit == v_files.end())
            throw ConfigError("snapshot " + upath.string() + " has no matching v file");
        const Snapshot su = read_snapshot(upath.string());
        const Snapshot sv = read_snapshot(vit->second.string());
        if (su.t != sv.t)
            throw ConfigError("snapshot pair " + stem + " has mismatched times");
        State s;
        s.u = su.field;
        s.v = sv.field;
        s.t = su.t;
        snaps.push_back(std::move(s));
    }
    std::sort(snaps.begin(), snaps.end(),
              [](const State& a, const State& b) { return a.t < b.t; });
    if (snaps.size() < 2)
        throw ConfigError("need at least 2 snapshot pairs in " + dir);
    return snaps;
}

int cmd_weakcheck(const std::string& snapdir, const std::string& modes_spec,
                  double tcut, double w, const std::string& report_file,
                  double max_residual) {
    const std::vector<State> snaps = load_snapshots(snapdir);
    std::vector<std::pair<int, int>> modes;
    std::stringstream ss(modes_spec);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        const auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw ConfigError("weakcheck: --modes items must look like KX,KY");
        modes.emplace_back(std::stoi(tok.substr(0, comma)), std::stoi(tok.substr(comma + 1)));
    }
    if (modes.empty())
        throw ConfigError("weakcheck: no modes given");

    std::ostringstream out;
    double worst = 0.0;
    for (const auto& [kx, ky] : modes) {
        const TestFunction tf(kx, ky, tcut, w);
        const double ru = residual_u(snaps, tf);
        const double rv = residual_v(snaps, tf);
        worst = std::max({worst, ru, rv});
        out << "mode " << kx << ' ' << ky << " residual_u " << fmt17(ru)
            << " residual_v " << fmt17(rv) << '\n';
    }
    std::cout << out.str();
    if (!report_file.empty()) {
        std::ofstream os(report_file);
        os << out.str();
    }
    return (max_residual > 0.0 && worst > max_residual) ? kExitFail : 0;
}

// --- plot ----------------------------------------------------------------

int cmd_plot(const std::string& csv, const std::string& outfile, const std::string& cols) {
    const CsvTable tab = read_csv(csv);
    const std::vector<double> xs = tab.column("t");
    std::vector<std::vector<double>> series;
    std::vector<std::string> labels;
    std::stringstream ss(cols);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        series.push_back(tab.column(tok));
        labels.push_back(tok);
    }
    if (series.empty())
        throw ConfigError("plot: --cols is empty");
    write_line_chart(outfile, fs::path(csv).filename().string(), xs, series, labels);
    std::cout << "wrote " << outfile << '\n';
    return 0;
}

// --- report ---------------------------------------------------------------

int cmd_report(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw ConfigError("report: directory not found: " + dir);
    int files = 0, fails = 0, passes = 0, infos = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const bool verdict_file = name == "bounds.txt" ||
            (name.size() > 12 && name.substr(name.size() - 12) == "verdicts.txt");
        if (!verdict_file) continue;
        ++files;
        const BoundReport rep = read_bound_report(entry.path().string());
        for (const BoundEntry& e : rep.entries) {
            if (e.verdict == "fail") {
                ++fails;
                std::cout << "FAIL " << entry.path().string() << ' ' << e.name
                          << " asserted=" << fmt17(e.asserted)
                          << " observed=" << fmt17(e.observed) << '\n';
            } else if (e.verdict == "info") {
                ++infos;
            } else {
                ++passes;
            }
        }
    }
    if (files == 0)
        throw ConfigError("report: no verdict files under " + dir);
    std::cout << "report: " << files << " files, " << passes << " pass, " << fails
              << " fail, " << infos << " informational\n";
    std::cout << (fails == 0 ? "PASS" : "FAIL") << '\n';
    return fails == 0 ? 0 : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-volume simulation and bound verification for the doubly "
                 "degenerate nutrient-taxis system with logistic source"};
    app.require_subcommand(1);
    int threads = 1;
    bool deterministic = false;
    app.add_option("--threads", threads, "worker threads for the stencil loops");
    app.add_flag("--deterministic", deterministic, "force single-threaded reductions");

    std::string run_config, run_outdir;
    auto* c_run = app.add_subcommand("run", "run a scenario config, write monitors/bounds");
    c_run->add_option("config", run_config, "scenario config file")->required();
    c_run->add_option("--outdir", run_outdir, "override the config outdir");

    std::string sweep_config, sweep_eps, sweep_outdir;
    auto* c_sweep = app.add_subcommand("sweep", "epsilon sweep of a scenario");
    c_sweep->add_option("config", sweep_config)->required();
    c_sweep->add_option("--eps", sweep_eps, "comma-separated epsilon list")->required();
    c_sweep->add_option("--outdir", sweep_outdir);

    std::string gr_csv, gr_lemma, gr_map;
    double gr_tau = 1.0, gr_a = 0.0;
    auto* c_gr = app.add_subcommand("gronwall", "validate an ODE comparison lemma on monitors.csv");
    c_gr->add_option("csv", gr_csv)->required();
    c_gr->add_option("--lemma", gr_lemma, "L21|L22|L23")->required();
    c_gr->add_option("--map", gr_map, "series map, e.g. z=energy_F,a=norm_u_p2^2,b=mass_v")
        ->required();
    c_gr->add_option("--tau", gr_tau, "window length");
    c_gr->add_option("--a-const", gr_a, "constant a for L21");

    std::string iq_which = "sobolev", iq_family = "trig", iq_snapdir, iq_out;
    double iq_p = 1.0, iq_eta = 0.125, iq_c1 = 0.0;
    int iq_q = 4, iq_count = 20;
    std::uint64_t iq_seed = 1;
    std::vector<int> iq_grid{64, 64};
    auto* c_iq = app.add_subcommand("ineq", "functional-inequality estimates and checks");
    c_iq->add_option("--which", iq_which, "sobolev|l41|l42|l52")->required();
    c_iq->add_option("--p", iq_p);
    c_iq->add_option("--eta", iq_eta);
    c_iq->add_option("--q", iq_q);
    c_iq->add_option("--family", iq_family, "trig|bumps|noise");
    c_iq->add_option("--count", iq_count);
    c_iq->add_option("--seed", iq_seed);
    c_iq->add_option("--grid", iq_grid, "NX NY")->expected(2);
    c_iq->add_option("--c1", iq_c1, "embedding constant for l41 (default 2x estimate)");
    c_iq->add_option("--snapshots", iq_snapdir, "snapshot dir for l52");
    c_iq->add_option("--out", iq_out, "also write the table to this file");

    std::string wc_dir, wc_modes = "1,0;0,1;1,1", wc_report;
    double wc_tcut = 0.0, wc_w = -1.0, wc_max = 0.0;
    auto* c_wc = app.add_subcommand("weakcheck", "weak-solution residuals from snapshots");
    c_wc->add_option("--snapshots", wc_dir)->required();
    c_wc->add_option("--modes", wc_modes, "semicolon-separated KX,KY list");
    c_wc->add_option("--tcut", wc_tcut, "test-function support end")->required();
    c_wc->add_option("--w", wc_w, "bump width (default 0.1*tcut)");
    c_wc->add_option("--report", wc_report, "report file");
    c_wc->add_option("--max-residual", wc_max, "fail when any residual exceeds this");

    std::string pl_csv, pl_out, pl_cols = "mass_u,mass_v,sup_u";
    auto* c_pl = app.add_subcommand("plot", "emit an SVG line chart from a monitors CSV");
    c_pl->add_option("csv", pl_csv)->required();
    c_pl->add_option("--out", pl_out)->required();
    c_pl->add_option("--cols", pl_cols, "comma-separated column names");

    std::string rp_dir;
    auto* c_rp = app.add_subcommand("report", "aggregate verdict files, exit 0 iff all pass");
    c_rp->add_option("dir", rp_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

#ifdef NUTAXIS_OPENMP
    omp_set_num_threads(deterministic ? 1 : std::max(1, threads));
#else
    (void)threads;
    (void)deterministic;
#endif

    try {
        if (*c_run) return cmd_run(run_config, run_outdir);
        if (*c_sweep) return cmd_sweep(sweep_config, sweep_eps, sweep_outdir);
        if (*c_gr) return cmd_gronwall(gr_csv, gr_lemma, gr_map, gr_tau, gr_a);
        if (*c_iq)
            return cmd_ineq(iq_which, iq_p, iq_eta, iq_q, iq_family, iq_count, iq_seed,
                            iq_grid, iq_c1, iq_snapdir, iq_out);
        if (*c_wc) return cmd_weakcheck(wc_dir, wc_modes, wc_tcut, wc_w, wc_report, wc_max);
        if (*c_pl) return cmd_plot(pl_csv, pl_out, pl_cols);
        if (*c_rp) return cmd_report(rp_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const BadScenario& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
