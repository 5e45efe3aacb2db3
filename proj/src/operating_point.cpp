#include "petdse/operating_point.hpp"

#include "petdse/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace petdse {

namespace {

constexpr double kBoundTolerance = 1e-9;

void require_positive(std::vector<std::string>& issues, const char* key, double value)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        issues.push_back(fmt::format("system.{} must be > 0 (got {})", key, value));
    }
}

}  // namespace

std::vector<std::string> SystemSpec::validate() const
{
    std::vector<std::string> issues;
    require_positive(issues, "rated_power_w", rated_power_w);
    require_positive(issues, "ac_voltage_amplitude_v", ac_voltage_amplitude_v);
    require_positive(issues, "grid_frequency_hz", grid_frequency_hz);
    require_positive(issues, "sm_capacitor_voltage_v", sm_capacitor_voltage_v);
    require_positive(issues, "lv_unit_dc_voltage_v", lv_unit_dc_voltage_v);
    require_positive(issues, "dcdc_switching_frequency_hz", dcdc_switching_frequency_hz);
    require_positive(issues, "transformer_frequency_hz", transformer_frequency_hz);
    require_positive(issues, "transformer_ratio", transformer_ratio);
    require_positive(issues, "mmc_device_switching_frequency_hz", mmc_device_switching_frequency_hz);
    if (!(capacitor_ripple_ratio > 0.0 && capacitor_ripple_ratio < 0.5)) {
        issues.push_back(
            fmt::format("system.capacitor_ripple_ratio must be in (0, 0.5) (got {})", capacitor_ripple_ratio));
    }
    if (!(power_factor > 0.0 && power_factor <= 1.0)) {
        issues.push_back(fmt::format("system.power_factor must be in (0, 1] (got {})", power_factor));
    }
    if (waveform_samples < 64) {
        issues.push_back(fmt::format("system.waveform_samples must be >= 64 (got {})", waveform_samples));
    }
    if (dcdc_igbt_per_unit < 0 || dcdc_diode_per_unit < 0) {
        issues.push_back("system.dcdc_igbt_per_unit and dcdc_diode_per_unit must be >= 0");
    }
    if (dcdc_zvs_factor < 0.0) {
        issues.push_back(fmt::format("system.dcdc_zvs_factor must be >= 0 (got {})", dcdc_zvs_factor));
    }
    return issues;
}

double OperatingPoint::arm_voltage(double theta) const noexcept
{
    return 0.5 * u_dc - ac_voltage_amplitude * std::sin(theta);
}

double OperatingPoint::arm_current(double theta) const noexcept
{
    return arm_dc_current + arm_ac_amplitude * std::sin(theta - phase_angle);
}

OperatingPoint solve_operating_point(const SystemSpec& spec, double m)
{
    if (!(m > 0.0)) throw DomainError(fmt::format("modulation index must be > 0 (got {})", m));
    OperatingPoint op;
    op.m = m;
    op.ac_voltage_amplitude = spec.ac_voltage_amplitude_v;
    op.u_dc = 2.0 * spec.ac_voltage_amplitude_v / m;
    op.i_dc = spec.rated_power_w / op.u_dc;
    op.ac_current_amplitude =
        2.0 * spec.rated_power_w / (3.0 * spec.ac_voltage_amplitude_v * spec.power_factor);
    op.angular_frequency = 2.0 * std::numbers::pi * spec.grid_frequency_hz;
    op.arm_dc_current = op.i_dc / 3.0;
    op.arm_ac_amplitude = 0.5 * op.ac_current_amplitude;
    op.phase_angle = std::acos(std::clamp(spec.power_factor, -1.0, 1.0));
    return op;
}

ArmWaveforms arm_waveforms(const OperatingPoint& op, const SystemSpec& spec)
{
    const auto n = static_cast<std::size_t>(spec.waveform_samples);
    ArmWaveforms w;
    w.theta.resize(n);
    w.voltage.resize(n);
    w.current.resize(n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = step * static_cast<double>(k);
        w.theta[k] = theta;
        w.voltage[k] = op.arm_voltage(theta);
        w.current[k] = op.arm_current(theta);
    }
    return w;
}

FeasibilityReport check_feasibility(const TopologyDescriptor& topo, double m)
{
    FeasibilityReport r;
    const double upper =
        topo.kind == TopologyKind::HalfBridge ? std::min(topo.m_max, 1.0) : topo.m_max;
    if (!(m > topo.m_min + kBoundTolerance)) {
        r.ok = false;
        r.violation = fmt::format("{}: m={} does not exceed m_min={}", to_string(topo.kind), m, topo.m_min);
    } else if (m > upper + kBoundTolerance) {
        r.ok = false;
        r.violation = fmt::format("{}: m={} exceeds m_max={}", to_string(topo.kind), m, upper);
    }
    return r;
}

}  // namespace petdse
