#include "petdse/loss_model.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace petdse {

double arm_conduction_loss(int n_half, int n_full, const DeviceModel& device,
                           std::span<const double> arm_current)
{
    if (arm_current.empty()) return 0.0;
    const double devices_in_path = n_half + 2.0 * n_full;
    double sum = 0.0;
    for (double i : arm_current) {
        const double a = std::abs(i);
        sum += device.on_state_voltage(a) * a;
    }
    return devices_in_path * sum / static_cast<double>(arm_current.size());
}

MmcLoss mmc_losses(const OperatingPoint& op, const MmcDesign& mmc, const SystemSpec& spec,
                   const TopologyDescriptor& topo)
{
    const int n = spec.waveform_samples;
    const double step = 2.0 * std::numbers::pi / n;
    std::vector<double> current(static_cast<std::size_t>(n));
    double abs_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        current[static_cast<std::size_t>(k)] = op.arm_current(step * k);
        abs_sum += std::abs(current[static_cast<std::size_t>(k)]);
    }
    const double i_avg = abs_sum / n;

    const auto& dev = mmc.device;
    MmcLoss loss;
    loss.conduction = 6.0 * arm_conduction_loss(mmc.n_half, mmc.n_full, dev, current);
    const double f_eff = spec.mmc_device_switching_frequency_hz * topo.capacitor_reduction_factor;
    loss.switching = mmc.igbt_count_total * f_eff * dev.esw_j * (i_avg / dev.i_ref_a) *
                     (spec.sm_capacitor_voltage_v / dev.v_ref_v);
    loss.branch = topo.branch_loss_fraction * (loss.conduction + loss.switching);
    return loss;
}

DcdcLoss dcdc_losses(const OperatingPoint& /*op*/, const DcdcDesign& dcdc, const SystemSpec& spec)
{
    const auto& dev = dcdc.device;
    const double iu = dcdc.input_current_per_unit;
    // Half the switches conduct at any instant of a bridge half-cycle.
    const double unit_conduction = 0.5 * dcdc.igbt_per_unit * dev.on_state_voltage(iu) * iu;
    const double unit_switching = dcdc.igbt_per_unit * spec.dcdc_switching_frequency_hz * dev.esw_j *
                                  (iu / dev.i_ref_a) *
                                  (0.5 * spec.lv_unit_dc_voltage_v / dev.v_ref_v) * spec.dcdc_zvs_factor;
    return {dcdc.unit_count * unit_conduction, dcdc.unit_count * unit_switching};
}

LossBreakdown total_losses(const SystemSpec& spec, const OperatingPoint& op, const MmcDesign& mmc,
                           const DcdcDesign& dcdc, const TopologyDescriptor& topo)
{
    const auto m = mmc_losses(op, mmc, spec, topo);
    const auto d = dcdc_losses(op, dcdc, spec);
    LossBreakdown b;
    b.mmc_conduction = m.conduction;
    b.mmc_switching = m.switching;
    b.mmc_branch = m.branch;
    b.dcdc_conduction = d.conduction;
    b.dcdc_switching = d.switching;
    b.total = b.mmc_conduction + b.mmc_switching + b.mmc_branch + b.dcdc_conduction + b.dcdc_switching;
    b.efficiency = spec.rated_power_w > 0.0 ? (spec.rated_power_w - b.total) / spec.rated_power_w : 1.0;
    return b;
}

}  // namespace petdse
