#include "petdse/calibration.hpp"

#include "petdse/errors.hpp"
#include "text_util.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace petdse {

std::string_view to_string(Metric metric) noexcept
{
    switch (metric) {
    case Metric::MmcCost: return "mmc_cost";
    case Metric::MmcVolume: return "mmc_volume";
    case Metric::DcdcCost: return "dcdc_cost";
    case Metric::DcdcVolume: return "dcdc_volume";
    case Metric::TotalCost: return "total_cost";
    case Metric::TotalVolume: return "total_volume";
    }
    return "unknown";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept
{
    for (auto m : {Metric::MmcCost, Metric::MmcVolume, Metric::DcdcCost, Metric::DcdcVolume,
                   Metric::TotalCost, Metric::TotalVolume}) {
        if (text == to_string(m)) return m;
    }
    return std::nullopt;
}

double metric_value(const NormalizedRatios& r, Metric metric) noexcept
{
    switch (metric) {
    case Metric::MmcCost: return r.mmc_cost_ratio;
    case Metric::MmcVolume: return r.mmc_volume_ratio;
    case Metric::DcdcCost: return r.dcdc_cost_ratio;
    case Metric::DcdcVolume: return r.dcdc_volume_ratio;
    case Metric::TotalCost: return r.total_cost_ratio;
    case Metric::TotalVolume: return r.total_volume_ratio;
    }
    return 0.0;
}

TopologyKind CalibrationTarget::resolved_topology() const noexcept
{
    if (topology) return *topology;
    return m <= 1.0 + 1e-9 ? TopologyKind::HalfBridge : TopologyKind::HybridSbb;
}

std::vector<CalibrationTarget> parse_targets_csv(std::string_view text)
{
    std::vector<CalibrationTarget> out;
    std::vector<std::string> issues;
    bool header_seen = false;
    int line_no = 0;
    for (auto raw : text_util::split_lines(text)) {
        ++line_no;
        auto line = text_util::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto cols = text_util::split(line, ',');
        if (!header_seen) {
            header_seen = true;
            if (!cols.empty() && cols[0] == "m") {
                if (cols.size() < 3 || cols[1] != "metric" || cols[2] != "target" ||
                    (cols.size() == 4 && cols[3] != "topology") || cols.size() > 4) {
                    issues.push_back(fmt::format(
                        "line {}: header must be m,metric,target[,topology]", line_no));
                }
                continue;
            }
        }
        if (cols.size() < 3 || cols.size() > 4) {
            issues.push_back(fmt::format("line {}: expected 3 or 4 columns, got {}", line_no, cols.size()));
            continue;
        }
        CalibrationTarget t;
        auto m = text_util::parse_double(cols[0]);
        auto metric = parse_metric(cols[1]);
        auto target = text_util::parse_double(cols[2]);
        if (!m || !(*m > 0.0)) issues.push_back(fmt::format("line {}: bad m '{}'", line_no, cols[0]));
        if (!metric) issues.push_back(fmt::format("line {}: unknown metric '{}'", line_no, cols[1]));
        if (!target || !(*target > 0.0)) {
            issues.push_back(fmt::format("line {}: target must be a ratio > 0 (got '{}')", line_no, cols[2]));
        }
        if (cols.size() == 4 && !cols[3].empty()) {
            auto kind = parse_topology_kind(cols[3]);
            if (!kind) issues.push_back(fmt::format("line {}: unknown topology '{}'", line_no, cols[3]));
            t.topology = kind;
        }
        if (m && metric && target) {
            t.m = *m;
            t.metric = *metric;
            t.target = *target;
            out.push_back(t);
        }
    }
    if (issues.empty() && out.empty()) issues.emplace_back("targets file contains no targets");
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return out;
}

std::vector<CalibrationTarget> load_targets_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({fmt::format("cannot read targets file '{}'", path)});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_targets_csv(ss.str());
}

std::vector<CalibrationTarget> reference_targets()
{
    using M = Metric;
    return {
        {1.5, M::TotalVolume, 0.76, {}}, {1.5, M::TotalCost, 0.80, {}},
        {2.0, M::DcdcVolume, 0.55, {}},  {2.0, M::DcdcCost, 0.65, {}},
        {2.0, M::TotalVolume, 0.75, {}}, {2.0, M::TotalCost, 0.75, {}},
        {3.0, M::DcdcCost, 0.53, {}},    {3.0, M::DcdcVolume, 0.40, {}},
        {3.0, M::MmcVolume, 1.27, {}},   {3.0, M::TotalVolume, 1.05, {}},
        {3.0, M::TotalCost, 0.69, {}},   {4.0, M::DcdcCost, 0.48, {}},
        {4.0, M::DcdcVolume, 0.30, {}},  {4.0, M::MmcVolume, 1.64, {}},
        {4.0, M::TotalVolume, 1.35, {}}, {4.0, M::TotalCost, 0.68, {}},
        {6.0, M::DcdcCost, 0.43, {}},    {6.0, M::DcdcVolume, 0.25, {}},
        {6.0, M::MmcVolume, 2.3, {}},    {6.0, M::MmcCost, 1.17, {}},
        {6.0, M::TotalCost, 0.71, {}},   {6.0, M::TotalVolume, 1.83, {}},
    };
}

namespace {

// Free coefficients, in parameter order.
constexpr int kFree = 6;
enum Param { CapCost, CapVolume, TxCost, TxVolume, DiodeCost, DiodeVolume };

using Vec = Eigen::Matrix<double, kFree, 1>;
using Mat = Eigen::Matrix<double, kFree, kFree>;

// Stage total as w . phi + constant, w being the free coefficients.
struct LinearForm {
    std::array<double, kFree> phi{};
    double constant = 0.0;
};

double tx_units(const DesignFeatures& f, const CostVolumeCoefficients& c)
{
    return c.tx_volume_exponent != 0.0 ? f.tx_units * std::pow(f.tx_unit_power_mw, c.tx_volume_exponent)
                                       : f.tx_units;
}

LinearForm metric_form(const DesignFeatures& f, const CostVolumeCoefficients& c, Metric metric)
{
    LinearForm mc, mv, dc, dv;
    mc.phi[CapCost] = f.total_capacitance_f;
    mc.constant = c.igbt_cost_scale * f.mmc_igbt_cost + f.branch_cost;
    mv.phi[CapVolume] = f.total_capacitance_f;
    mv.constant = c.igbt_volume_scale * f.mmc_igbt_volume + f.branch_volume;
    dc.phi[TxCost] = 1.0;
    dc.phi[DiodeCost] = f.diode_count;
    dc.constant = c.igbt_cost_scale * f.dcdc_igbt_cost;
    dv.phi[TxVolume] = tx_units(f, c);
    dv.phi[DiodeVolume] = f.diode_count;
    dv.constant = c.igbt_volume_scale * f.dcdc_igbt_volume;

    auto sum = [](const LinearForm& a, const LinearForm& b) {
        LinearForm s;
        for (int j = 0; j < kFree; ++j) s.phi[j] = a.phi[j] + b.phi[j];
        s.constant = a.constant + b.constant;
        return s;
    };
    switch (metric) {
    case Metric::MmcCost: return mc;
    case Metric::MmcVolume: return mv;
    case Metric::DcdcCost: return dc;
    case Metric::DcdcVolume: return dv;
    case Metric::TotalCost: return sum(mc, dc);
    case Metric::TotalVolume: return sum(mv, dv);
    }
    return {};
}

struct Term {
    LinearForm num;
    LinearForm den;
    double target = 0.0;
};

double form_value(const LinearForm& f, const Vec& w)
{
    double v = f.constant;
    for (int j = 0; j < kFree; ++j) v += w[j] * f.phi[j];
    return v;
}

CostVolumeCoefficients from_free(const Vec& w, CostVolumeCoefficients c)
{
    c.cap_cost_per_farad = w[CapCost];
    c.cap_volume_per_farad = w[CapVolume];
    c.tx_total_cost = w[TxCost];
    c.tx_volume_per_unit = w[TxVolume];
    c.diode_cost = w[DiodeCost];
    c.diode_volume = w[DiodeVolume];
    return c;
}

struct Evaluated {
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;  ///< d r / d ln w
    double cost = 0.0;
};

Evaluated evaluate_terms(const std::vector<Term>& terms, const Vec& x)
{
    const Vec w = x.array().exp();
    Evaluated e;
    const auto n = static_cast<Eigen::Index>(terms.size());
    e.r.resize(n);
    e.jac.resize(n, kFree);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& t = terms[static_cast<std::size_t>(i)];
        const double num = form_value(t.num, w);
        const double den = form_value(t.den, w);
        const double ratio = num / den;
        e.r[i] = ratio - t.target;
        for (int j = 0; j < kFree; ++j) {
            e.jac(i, j) = w[j] * (t.num.phi[j] - ratio * t.den.phi[j]) / den;
        }
    }
    e.cost = e.r.squaredNorm();
    return e;
}

struct StartResult {
    Vec x = Vec::Zero();
    double cost = std::numeric_limits<double>::infinity();
    bool converged = false;
};

// Levenberg-Marquardt in log space with box limits around the reference scale.
StartResult run_lm(const std::vector<Term>& terms, Vec x, const Vec& lo, const Vec& hi, int max_iter)
{
    StartResult out;
    auto cur = evaluate_terms(terms, x);
    double lambda = 1e-3;
    for (int it = 0; it < max_iter; ++it) {
        const Mat jtj = cur.jac.transpose() * cur.jac;
        const Vec g = cur.jac.transpose() * cur.r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-14) {
            out.converged = true;
            break;
        }
        bool improved = false;
        while (lambda < 1e12) {
            Mat a = jtj;
            for (int j = 0; j < kFree; ++j) a(j, j) += lambda * (jtj(j, j) + 1e-12);
            Vec step = a.ldlt().solve(-g);
            Vec trial = (x + step).cwiseMax(lo).cwiseMin(hi);
            auto next = evaluate_terms(terms, trial);
            if (std::isfinite(next.cost) && next.cost < cur.cost) {
                const double gain = cur.cost - next.cost;
                const double step_size = (trial - x).lpNorm<Eigen::Infinity>();
                x = trial;
                cur = std::move(next);
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                if (gain <= 1e-15 * std::max(1.0, cur.cost) || step_size < 1e-12) out.converged = true;
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) {
            // No descent direction left at any damping: a (possibly bounded) minimum.
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }
    out.x = x;
    out.cost = cur.cost;
    return out;
}

}  // namespace

std::vector<TargetResidual> evaluate_targets(const SystemSpec& spec, const Catalog& catalog,
                                             const std::vector<CalibrationTarget>& targets,
                                             const CostVolumeCoefficients& coeffs)
{
    const auto baseline = compute_baseline(spec, catalog, coeffs);
    std::vector<TargetResidual> out;
    out.reserve(targets.size());
    for (const auto& t : targets) {
        const auto e = evaluate_design(spec, catalog.topology(t.resolved_topology()), t.m, catalog,
                                       coeffs, baseline);
        const double model = metric_value(e.normalized, t.metric);
        out.push_back({t, model, model - t.target});
    }
    return out;
}

CalibrationResult calibrate(const SystemSpec& spec, const Catalog& catalog,
                            const std::vector<CalibrationTarget>& targets,
                            const CostVolumeCoefficients& initial, const CalibrationOptions& options)
{
    if (targets.empty()) throw ConfigError({"calibration needs at least one target"});
    if (options.starts < 1 || options.max_iterations < 1) {
        throw ConfigError({"calibration.starts and calibration.max_iterations must be >= 1"});
    }

    CalibrationResult result;
    const bool same_m = std::all_of(targets.begin(), targets.end(),
                                    [&](const CalibrationTarget& t) { return t.m == targets.front().m; });
    if (targets.size() > 1 && same_m) {
        result.warnings.push_back(fmt::format(
            "all targets share m={}; the fit is poorly conditioned", targets.front().m));
    }

    const auto& hb = catalog.topology(TopologyKind::HalfBridge);
    const auto base_op = solve_operating_point(spec, 1.0);
    const auto base_features = design_features(evaluate_mmc(spec, base_op, hb, catalog),
                                               evaluate_dcdc(spec, base_op, catalog), hb);
    std::vector<Term> terms;
    terms.reserve(targets.size());
    for (const auto& t : targets) {
        const auto& topo = catalog.topology(t.resolved_topology());
        if (auto f = check_feasibility(topo, t.m); !f) throw FeasibilityError(f.violation);
        const auto op = solve_operating_point(spec, t.m);
        const auto features = design_features(evaluate_mmc(spec, op, topo, catalog),
                                              evaluate_dcdc(spec, op, catalog), topo);
        terms.push_back({metric_form(features, initial, t.metric),
                         metric_form(base_features, initial, t.metric), t.target});
    }

    // Reference scale per coefficient: the value at which its term matches the
    // IGBT part of the same stage at the baseline.
    const double igbt_cost_mmc = std::max(initial.igbt_cost_scale * base_features.mmc_igbt_cost, 1.0);
    const double igbt_vol_mmc = std::max(initial.igbt_volume_scale * base_features.mmc_igbt_volume, 1e-3);
    const double igbt_cost_dc = std::max(initial.igbt_cost_scale * base_features.dcdc_igbt_cost, 1.0);
    const double igbt_vol_dc = std::max(initial.igbt_volume_scale * base_features.dcdc_igbt_volume, 1e-3);
    const double cap = std::max(base_features.total_capacitance_f, 1e-9);
    const double diodes = std::max(base_features.diode_count, 1.0);
    const double units = std::max(base_features.tx_units, 1.0);
    Vec ref;
    ref << igbt_cost_mmc / cap, igbt_vol_mmc / cap, igbt_cost_dc, igbt_vol_dc / units,
        igbt_cost_dc / diodes, igbt_vol_dc / diodes;
    const Vec log_ref = ref.array().log();
    const double span = std::log(1e3);
    const Vec lo = log_ref.array() - 12.0 * span;
    const Vec hi = log_ref.array() + 12.0 * span;

    const int starts = options.starts;
    std::vector<Vec> x0(static_cast<std::size_t>(starts));
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto& x : x0) {
        for (int j = 0; j < kFree; ++j) x[j] = log_ref[j] + span * unit(rng);
    }

    std::vector<StartResult> runs(static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(static) if (options.parallel)
    for (int s = 0; s < starts; ++s) {
        runs[static_cast<std::size_t>(s)] =
            run_lm(terms, x0[static_cast<std::size_t>(s)], lo, hi, options.max_iterations);
    }

    int best = 0;
    for (int s = 1; s < starts; ++s) {
        if (runs[static_cast<std::size_t>(s)].cost < runs[static_cast<std::size_t>(best)].cost) best = s;
    }
    const auto& win = runs[static_cast<std::size_t>(best)];
    result.best_start = best;
    result.converged = win.converged;
    if (!win.converged) {
        result.warnings.push_back(fmt::format(
            "best start did not converge within {} iterations", options.max_iterations));
    }
    const Vec w = win.x.array().exp();
    result.coefficients = from_free(w, initial);
    result.residuals = evaluate_targets(spec, catalog, targets, result.coefficients);
    for (const auto& r : result.residuals) {
        result.sum_squares += r.residual * r.residual;
        result.max_abs_residual = std::max(result.max_abs_residual, std::abs(r.residual));
    }
    return result;
}

}  // namespace petdse
