#include "petdse/evaluator.hpp"

#include "petdse/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace petdse {

std::vector<std::string> CostVolumeCoefficients::validate() const
{
    std::vector<std::string> issues;
    auto check = [&](const char* key, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            issues.push_back(fmt::format("coefficients.{} must be >= 0 (got {})", key, v));
        }
    };
    check("cap_cost_per_farad", cap_cost_per_farad);
    check("cap_volume_per_farad", cap_volume_per_farad);
    check("igbt_cost_scale", igbt_cost_scale);
    check("igbt_volume_scale", igbt_volume_scale);
    check("tx_total_cost", tx_total_cost);
    check("tx_volume_per_unit", tx_volume_per_unit);
    check("diode_cost", diode_cost);
    check("diode_volume", diode_volume);
    if (!std::isfinite(tx_volume_exponent)) {
        issues.push_back("coefficients.tx_volume_exponent must be finite");
    }
    return issues;
}

CostVolumeCoefficients default_coefficients()
{
    // Output of `petdse calibrate --targets data/reference_targets.csv` with the
    // default catalog; regenerate when catalog defaults change.
    CostVolumeCoefficients c;
    c.cap_cost_per_farad = 530085.36422405753;
    c.cap_volume_per_farad = 6806.660250606652;
    c.tx_total_cost = 394592.56720534654;
    c.tx_volume_per_unit = 1.7002186571823514;
    c.diode_cost = 6199.5769592041388;
    c.diode_volume = 2.0000000000000092e-36;
    return c;
}

DesignFeatures design_features(const MmcDesign& mmc, const DcdcDesign& dcdc,
                               const TopologyDescriptor& topo)
{
    DesignFeatures f;
    f.total_capacitance_f = mmc.total_capacitance;
    f.mmc_igbt_cost = mmc.igbt_count_total * mmc.device.unit_cost;
    f.mmc_igbt_volume = mmc.igbt_count_total * mmc.device.unit_volume_l;
    f.branch_cost = topo.branch_cost;
    f.branch_volume = topo.branch_volume_l;
    f.dcdc_igbt_cost = dcdc.igbt_count_total * dcdc.device.unit_cost;
    f.dcdc_igbt_volume = dcdc.igbt_count_total * dcdc.device.unit_volume_l;
    f.diode_count = dcdc.diode_count_total;
    f.tx_units = dcdc.unit_count;
    f.tx_unit_power_mw = dcdc.tx_per_unit_power * 1e-6;
    return f;
}

StageTotals apply_coefficients(const DesignFeatures& f, const CostVolumeCoefficients& c)
{
    StageTotals t;
    t.mmc_cost = c.cap_cost_per_farad * f.total_capacitance_f + c.igbt_cost_scale * f.mmc_igbt_cost +
                 f.branch_cost;
    t.mmc_volume = c.cap_volume_per_farad * f.total_capacitance_f +
                   c.igbt_volume_scale * f.mmc_igbt_volume + f.branch_volume;
    t.dcdc_cost = c.igbt_cost_scale * f.dcdc_igbt_cost + c.diode_cost * f.diode_count + c.tx_total_cost;
    double tx_units = f.tx_units;
    if (c.tx_volume_exponent != 0.0) tx_units *= std::pow(f.tx_unit_power_mw, c.tx_volume_exponent);
    t.dcdc_volume = c.igbt_volume_scale * f.dcdc_igbt_volume + c.diode_volume * f.diode_count +
                    c.tx_volume_per_unit * tx_units;
    return t;
}

NormalizedRatios normalize(const StageTotals& d, const StageTotals& b)
{
    auto ratio = [](double num, double den) { return den != 0.0 ? num / den : 1.0; };
    NormalizedRatios r;
    r.mmc_cost_ratio = ratio(d.mmc_cost, b.mmc_cost);
    r.mmc_volume_ratio = ratio(d.mmc_volume, b.mmc_volume);
    r.dcdc_cost_ratio = ratio(d.dcdc_cost, b.dcdc_cost);
    r.dcdc_volume_ratio = ratio(d.dcdc_volume, b.dcdc_volume);
    r.total_cost_ratio = ratio(d.total_cost(), b.total_cost());
    r.total_volume_ratio = ratio(d.total_volume(), b.total_volume());
    return r;
}

namespace {

struct Sized {
    OperatingPoint op;
    MmcDesign mmc;
    DcdcDesign dcdc;
    DesignFeatures features;
};

Sized size_design(const SystemSpec& spec, const TopologyDescriptor& topo, double m,
                  const Catalog& catalog)
{
    if (auto f = check_feasibility(topo, m); !f) throw FeasibilityError(f.violation);
    Sized s;
    s.op = solve_operating_point(spec, m);
    s.mmc = evaluate_mmc(spec, s.op, topo, catalog);
    s.dcdc = evaluate_dcdc(spec, s.op, catalog);
    s.features = design_features(s.mmc, s.dcdc, topo);
    return s;
}

}  // namespace

StageTotals compute_baseline(const SystemSpec& spec, const Catalog& catalog,
                             const CostVolumeCoefficients& coeffs)
{
    const auto s = size_design(spec, catalog.topology(TopologyKind::HalfBridge), 1.0, catalog);
    return apply_coefficients(s.features, coeffs);
}

DesignEvaluation evaluate_design(const SystemSpec& spec, const TopologyDescriptor& topo, double m,
                                 const Catalog& catalog, const CostVolumeCoefficients& coeffs)
{
    return evaluate_design(spec, topo, m, catalog, coeffs, compute_baseline(spec, catalog, coeffs));
}

DesignEvaluation evaluate_design(const SystemSpec& spec, const TopologyDescriptor& topo, double m,
                                 const Catalog& catalog, const CostVolumeCoefficients& coeffs,
                                 const StageTotals& baseline)
{
    auto s = size_design(spec, topo, m, catalog);
    DesignEvaluation e;
    e.m = m;
    e.topology = topo.kind;
    e.losses = total_losses(spec, s.op, s.mmc, s.dcdc, topo);
    const auto totals = apply_coefficients(s.features, coeffs);
    e.mmc_cost = totals.mmc_cost;
    e.mmc_volume = totals.mmc_volume;
    e.dcdc_cost = totals.dcdc_cost;
    e.dcdc_volume = totals.dcdc_volume;
    e.total_cost = totals.total_cost();
    e.total_volume = totals.total_volume();
    e.normalized = normalize(totals, baseline);
    e.op = s.op;
    e.mmc = std::move(s.mmc);
    e.dcdc = std::move(s.dcdc);
    e.features = s.features;
    return e;
}

}  // namespace petdse
