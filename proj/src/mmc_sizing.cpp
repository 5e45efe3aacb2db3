#include "petdse/mmc_sizing.hpp"

#include "petdse/errors.hpp"
#include "rounding.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numbers>

namespace petdse {

SubmoduleCounts size_submodules(const SystemSpec& spec, const OperatingPoint& op,
                                const TopologyDescriptor& topo)
{
    if (auto f = check_feasibility(topo, op.m); !f) throw FeasibilityError(f.violation);

    const double uc = spec.sm_capacitor_voltage_v;
    const double vm = spec.ac_voltage_amplitude_v;
    SubmoduleCounts c;
    c.n_total = detail::ceil_count((0.5 * op.u_dc + vm) / uc);
    switch (topo.fbsm_rule) {
    case FbsmRule::None: c.n_full = 0; break;
    case FbsmRule::MinimalNegativeVoltage:
        c.n_full = detail::ceil_count(std::max(0.0, vm - 0.5 * op.u_dc) / uc);
        break;
    case FbsmRule::AllFullBridge: c.n_full = c.n_total; break;
    }
    c.n_full = std::min(c.n_full, c.n_total);
    c.n_half = c.n_total - c.n_full;
    return c;
}

double arm_energy_ripple(const OperatingPoint& op, const SystemSpec& spec)
{
    const int n = spec.waveform_samples;
    const double step = 2.0 * std::numbers::pi / n;
    const double dt = step / op.angular_frequency;

    double prev = op.arm_voltage(0.0) * op.arm_current(0.0);
    const double first = prev;
    double energy = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    for (int k = 1; k <= n; ++k) {
        // The last step closes the period back onto theta = 0.
        double p = first;
        if (k < n) {
            const double theta = step * k;
            p = op.arm_voltage(theta) * op.arm_current(theta);
        }
        energy += 0.5 * (prev + p) * dt;
        lo = std::min(lo, energy);
        hi = std::max(hi, energy);
        prev = p;
    }
    return hi - lo;
}

double size_capacitor(const SystemSpec& spec, double delta_e, int n_total,
                      const TopologyDescriptor& topo)
{
    const double uc = spec.sm_capacitor_voltage_v;
    return topo.capacitor_reduction_factor * delta_e /
           (2.0 * n_total * uc * uc * spec.capacitor_ripple_ratio);
}

MmcDesign evaluate_mmc(const SystemSpec& spec, const OperatingPoint& op,
                       const TopologyDescriptor& topo, const Catalog& catalog)
{
    const auto counts = size_submodules(spec, op, topo);
    MmcDesign d;
    d.n_total = counts.n_total;
    d.n_half = counts.n_half;
    d.n_full = counts.n_full;
    d.hybridization_ratio = d.n_total > 0 ? static_cast<double>(d.n_full) / d.n_total : 0.0;
    d.arm_energy_ripple = arm_energy_ripple(op, spec);
    d.sm_capacitance = size_capacitor(spec, d.arm_energy_ripple, d.n_total, topo);
    d.total_capacitance = 6.0 * d.n_total * d.sm_capacitance;
    d.device = select_mmc_device(catalog, op.m);
    d.igbt_count_total = 6 * d.igbt_per_arm() + topo.branch_igbt_count;
    if (d.n_total < 2) {
        d.warnings.push_back(fmt::format("degenerate arm: N={} submodules at m={}", d.n_total, op.m));
    }
    return d;
}

}  // namespace petdse
