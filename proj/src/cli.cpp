#include "petdse/cli.hpp"

#include "petdse/calibration.hpp"
#include "petdse/config.hpp"
#include "petdse/errors.hpp"
#include "petdse/report.hpp"
#include "petdse/sweep.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace petdse {

namespace {

namespace fs = std::filesystem;

struct Loaded {
    RunConfig config;
    std::string text;  ///< raw config bytes, for the manifest hash
};

Loaded load_config(const std::string& path)
{
    Loaded l;
    if (path.empty()) return l;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({fmt::format("cannot read config file '{}'", path)});
    std::ostringstream ss;
    ss << in.rdbuf();
    l.text = ss.str();
    l.config = load_run_config(l.text);
    return l;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    f << content;
    if (!f) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

std::vector<TopologyKind> parse_topologies(const std::vector<std::string>& names)
{
    std::vector<TopologyKind> out;
    std::vector<std::string> issues;
    for (const auto& raw : names) {
        for (const auto& name : text_util::split(raw, ',')) {
            if (name.empty()) continue;
            if (auto k = parse_topology_kind(name)) {
                if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
            } else {
                issues.push_back(fmt::format("unknown topology '{}'", name));
            }
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return out;
}

std::pair<double, double> parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    std::optional<double> lo;
    std::optional<double> hi;
    if (colon != std::string::npos) {
        lo = text_util::parse_double(std::string_view(text).substr(0, colon));
        hi = text_util::parse_double(std::string_view(text).substr(colon + 1));
    }
    if (!lo || !hi || !(*lo > 0.0) || *hi < *lo) {
        throw ConfigError({fmt::format("--window must be lo:hi with 0 < lo <= hi (got '{}')", text)});
    }
    return {*lo, *hi};
}

std::string join_topologies(const std::vector<TopologyKind>& kinds)
{
    std::string s;
    for (auto k : kinds) {
        if (!s.empty()) s += ',';
        s += to_string(k);
    }
    return s;
}

void print_issues(std::ostream& err, const ConfigError& e)
{
    err << "configuration error:\n";
    for (const auto& i : e.issues()) err << "  " << i << '\n';
}

struct SweepArgs {
    std::string config;
    std::string out_dir;
    std::string formats;
    std::vector<std::string> topologies;
    std::optional<double> m_min;
    std::optional<double> m_max;
    std::optional<double> step;
    bool serial = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err)
{
    auto loaded = load_config(a.config);
    auto& cfg = loaded.config;
    std::vector<std::string> issues;
    if (!a.out_dir.empty()) cfg.output.directory = a.out_dir;
    if (!a.formats.empty()) issues = apply_formats(cfg.output, a.formats);
    if (!a.topologies.empty()) cfg.sweep.topologies = parse_topologies(a.topologies);
    if (a.m_min) cfg.sweep.m_lo = *a.m_min;
    if (a.m_max) cfg.sweep.m_hi = *a.m_max;
    if (a.step) cfg.sweep.step = *a.step;
    if (!(cfg.sweep.m_lo > 0.0)) issues.push_back("--m-min must be > 0");
    if (!(cfg.sweep.m_hi >= cfg.sweep.m_lo)) issues.push_back("--m-max must be >= --m-min");
    if (!(cfg.sweep.step > 0.0)) issues.push_back("--step must be > 0");
    if (!issues.empty()) throw ConfigError(std::move(issues));

    std::vector<SweepResult> results;
    for (auto kind : cfg.sweep.topologies) {
        const auto& topo = cfg.catalog.topology(kind);
        results.push_back(a.serial ? sweep_serial(cfg.system, topo, cfg.catalog, cfg.coefficients, cfg.sweep.m_lo,
                                                  cfg.sweep.m_hi, cfg.sweep.step)
                                   : sweep(cfg.system, topo, cfg.catalog, cfg.coefficients, cfg.sweep.m_lo,
                                           cfg.sweep.m_hi, cfg.sweep.step));
    }

    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);
    std::vector<std::string> artifacts;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        artifacts.push_back(name);
    };
    if (cfg.output.csv) {
        for (const auto& r : results) emit(fmt::format("sweep_{}.csv", to_string(r.topology)), sweep_csv(r));
        emit("infeasible.csv", infeasible_csv(results));
    }
    if (cfg.output.svg) {
        for (auto fig : {Figure::Volume, Figure::Cost, Figure::Losses}) {
            emit(figure_file_name(fig), sweep_figure(fig, results));
        }
    }
    ManifestInfo info;
    info.command = "sweep";
    info.config_hash = fnv1a64(loaded.text + fmt::format("\n#sweep {} {} {} {}\n", format_number(cfg.sweep.m_lo),
                                                         format_number(cfg.sweep.m_hi),
                                                         format_number(cfg.sweep.step),
                                                         join_topologies(cfg.sweep.topologies)));
    info.m_lo = cfg.sweep.m_lo;
    info.m_hi = cfg.sweep.m_hi;
    info.step = cfg.sweep.step;
    info.grid_points = make_grid(cfg.sweep.m_lo, cfg.sweep.m_hi, cfg.sweep.step).size();
    info.artifacts = artifacts;
    info.artifacts.push_back("run_manifest.csv");
    write_file(dir / "run_manifest.csv", run_manifest_csv(info));

    int code = kExitOk;
    for (const auto& r : results) {
        if (r.empty()) {
            err << fmt::format("{}: empty feasible set on [{}, {}]\n", to_string(r.topology),
                               format_number(cfg.sweep.m_lo), format_number(cfg.sweep.m_hi));
            if (!r.infeasible.empty()) err << "  first violation: " << r.infeasible.front().violation << '\n';
            code = kExitInfeasible;
            continue;
        }
        const auto vol = find_optimum(r, Objective::Volume);
        const auto cost = find_optimum(r, Objective::Cost);
        const auto loss = find_optimum(r, Objective::Loss);
        out << fmt::format("{}: {} feasible, {} infeasible; volume optimum m={} ({}), cost optimum m={} ({}), "
                           "loss optimum m={} ({} W)\n",
                           to_string(r.topology), r.evaluations.size(), r.infeasible.size(),
                           format_number(vol.m), format_number(vol.value), format_number(cost.m),
                           format_number(cost.value), format_number(loss.m), format_number(loss.value));
    }
    out << fmt::format("wrote {} file(s) to {}\n", info.artifacts.size(), dir.string());
    return code;
}

int cmd_design(const std::string& config, const std::string& topology, double m, bool kv, std::ostream& out,
               std::ostream& err)
{
    auto cfg = load_config(config).config;
    auto kind = parse_topology_kind(topology);
    if (!kind) throw ConfigError({fmt::format("unknown topology '{}'", topology)});
    const auto& topo = cfg.catalog.topology(*kind);
    if (auto f = check_feasibility(topo, m); !f) {
        err << "infeasible design point: " << f.violation << '\n';
        return kExitInfeasible;
    }
    const auto e = evaluate_design(cfg.system, topo, m, cfg.catalog, cfg.coefficients);
    const auto base = evaluate_dcdc(cfg.system, solve_operating_point(cfg.system, 1.0), cfg.catalog);
    out << design_report(e, base, kv);
    return kExitOk;
}

int cmd_compare(const std::string& config, const std::string& window, double step, std::ostream& out,
                std::ostream& err)
{
    auto cfg = load_config(config).config;
    const auto [lo, hi] = parse_window(window);
    if (!(step > 0.0)) throw ConfigError({"--step must be > 0"});
    const auto table = rank_topologies(cfg.system, cfg.catalog, cfg.coefficients, lo, hi, step);
    out << ranking_report(table);
    if (table.common_points.empty()) {
        err << "no topology has a feasible point in the window\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

struct CalibrateArgs {
    std::string config;
    std::string targets;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> starts;
    std::optional<int> max_iterations;
    bool serial = false;
};

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out, std::ostream& err)
{
    auto loaded = load_config(a.config);
    auto& cfg = loaded.config;
    const auto targets = load_targets_file(a.targets);
    auto opts = cfg.calibration;
    if (a.seed) opts.seed = *a.seed;
    if (a.starts) opts.starts = *a.starts;
    if (a.max_iterations) opts.max_iterations = *a.max_iterations;
    if (a.serial) opts.parallel = false;
    if (!a.out_dir.empty()) cfg.output.directory = a.out_dir;

    const auto result = calibrate(cfg.system, cfg.catalog, targets, cfg.coefficients, opts);

    const fs::path dir(cfg.output.directory);
    fs::create_directories(dir);
    write_file(dir / "calibrated_coefficients.ini", coefficients_ini(result.coefficients));
    write_file(dir / "residuals.csv", residuals_csv(result.residuals));
    ManifestInfo info;
    info.command = "calibrate";
    info.config_hash = fnv1a64(loaded.text + fmt::format("\n#calibrate {} {} {}\n", opts.seed, opts.starts,
                                                         opts.max_iterations));
    info.artifacts = {"calibrated_coefficients.ini", "residuals.csv", "run_manifest.csv"};
    write_file(dir / "run_manifest.csv", run_manifest_csv(info));

    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    out << coefficients_ini(result.coefficients);
    out << fmt::format("targets={} sum_squares={} max_abs_residual={} converged={}\n", result.residuals.size(),
                       format_number(result.sum_squares), format_number(result.max_abs_residual),
                       result.converged ? "true" : "false");
    if (result.max_abs_residual > 0.10) {
        err << fmt::format("max residual {} exceeds 0.10\n", format_number(result.max_abs_residual));
        return kExitResidual;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Design-space exploration for MMC-based power electronic transformers", "petdse"};
    app.require_subcommand(1);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the modulation index and write CSV/SVG reports");
    sweep_cmd->add_option("--config", sw.config, "Configuration file");
    sweep_cmd->add_option("--out", sw.out_dir, "Output directory");
    sweep_cmd->add_option("--formats", sw.formats, "Comma-separated subset of csv,svg");
    sweep_cmd->add_option("--topology", sw.topologies, "Topology to sweep (repeatable or comma-separated)");
    sweep_cmd->add_option("--m-min", sw.m_min, "Grid start");
    sweep_cmd->add_option("--m-max", sw.m_max, "Grid end");
    sweep_cmd->add_option("--step", sw.step, "Grid step");
    sweep_cmd->add_flag("--serial", sw.serial, "Evaluate the grid on one thread");

    std::string design_config, design_topology;
    double design_m = 0.0;
    bool design_kv = false;
    auto* design_cmd = app.add_subcommand("design", "Evaluate a single design point");
    design_cmd->add_option("--config", design_config, "Configuration file");
    design_cmd->add_option("--topology", design_topology, "Topology kind")->required();
    design_cmd->add_option("--m", design_m, "Modulation index")->required();
    design_cmd->add_flag("--kv", design_kv, "Flat key=value output");

    std::string compare_config, compare_window = "1:2";
    double compare_step = 0.05;
    auto* compare_cmd = app.add_subcommand("compare", "Rank topologies over a modulation-index window");
    compare_cmd->add_option("--config", compare_config, "Configuration file");
    compare_cmd->add_option("--window", compare_window, "Window lo:hi, open on the left")->capture_default_str();
    compare_cmd->add_option("--step", compare_step, "Grid step inside the window")->capture_default_str();

    CalibrateArgs ca;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit cost/volume coefficients to target ratios");
    calibrate_cmd->add_option("--config", ca.config, "Configuration file");
    calibrate_cmd->add_option("--targets", ca.targets, "Targets CSV (m,metric,target[,topology])")->required();
    calibrate_cmd->add_option("--out", ca.out_dir, "Output directory");
    calibrate_cmd->add_option("--seed", ca.seed, "Multi-start seed");
    calibrate_cmd->add_option("--starts", ca.starts, "Number of starts");
    calibrate_cmd->add_option("--max-iterations", ca.max_iterations, "Iterations per start");
    calibrate_cmd->add_flag("--serial", ca.serial, "Run starts on one thread");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    try {
        if (*sweep_cmd) return cmd_sweep(sw, out, err);
        if (*design_cmd) return cmd_design(design_config, design_topology, design_m, design_kv, out, err);
        if (*compare_cmd) return cmd_compare(compare_config, compare_window, compare_step, out, err);
        if (*calibrate_cmd) return cmd_calibrate(ca, out, err);
    } catch (const ConfigError& e) {
        print_issues(err, e);
        return kExitConfig;
    } catch (const FeasibilityError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const OutOfRangeError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace petdse
