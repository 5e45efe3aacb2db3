#pragma once

#include "petdse/catalog.hpp"

#include <string>
#include <vector>

namespace petdse {

/// Electrical constants of the transformer. Defaults describe the 5 MW,
/// 60 kV-at-m=1 reference system.
struct SystemSpec {
    double rated_power_w = 5e6;
    double ac_voltage_amplitude_v = 30e3;  ///< phase amplitude V_m
    double grid_frequency_hz = 50.0;
    double sm_capacitor_voltage_v = 2e3;
    double capacitor_ripple_ratio = 0.10;
    double lv_unit_dc_voltage_v = 5e3;
    double dcdc_switching_frequency_hz = 2500.0;
    double transformer_frequency_hz = 5000.0;
    double transformer_ratio = 1.0;
    double power_factor = 1.0;
    double mmc_device_switching_frequency_hz = 150.0;
    int waveform_samples = 4096;

    // DC/DC unit composition (two three-level diode-clamped bridges).
    int dcdc_igbt_per_unit = 16;
    int dcdc_diode_per_unit = 8;
    double dcdc_zvs_factor = 0.5;

    /// Empty when every field is in range.
    std::vector<std::string> validate() const;

    bool operator==(const SystemSpec&) const = default;
};

struct OperatingPoint {
    double m = 0.0;
    double u_dc = 0.0;
    double i_dc = 0.0;
    double ac_current_amplitude = 0.0;
    double angular_frequency = 0.0;
    double arm_dc_current = 0.0;
    double arm_ac_amplitude = 0.0;
    double phase_angle = 0.0;  ///< current lag, arccos(power factor)
    double ac_voltage_amplitude = 0.0;

    /// Upper-arm voltage at grid angle theta.
    double arm_voltage(double theta) const noexcept;
    /// Upper-arm current at grid angle theta (no circulating harmonics).
    double arm_current(double theta) const noexcept;
};

/// Throws DomainError for m <= 0.
OperatingPoint solve_operating_point(const SystemSpec& spec, double m);

struct ArmWaveforms {
    std::vector<double> theta;
    std::vector<double> voltage;
    std::vector<double> current;
};

/// Uniform samples over theta in [0, 2*pi).
ArmWaveforms arm_waveforms(const OperatingPoint& op, const SystemSpec& spec);

struct FeasibilityReport {
    bool ok = true;
    std::string violation;  ///< empty when ok

    explicit operator bool() const noexcept { return ok; }
};

/// ok iff m_min < m <= m_max; half-bridge additionally needs m <= 1.
FeasibilityReport check_feasibility(const TopologyDescriptor& topo, double m);

}  // namespace petdse
