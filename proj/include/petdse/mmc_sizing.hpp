#pragma once

#include "petdse/catalog.hpp"
#include "petdse/operating_point.hpp"

#include <string>
#include <vector>

namespace petdse {

struct SubmoduleCounts {
    int n_total = 0;
    int n_half = 0;
    int n_full = 0;

    bool operator==(const SubmoduleCounts&) const = default;
};

/// Throws FeasibilityError when m is outside the topology's range.
SubmoduleCounts size_submodules(const SystemSpec& spec, const OperatingPoint& op,
                                const TopologyDescriptor& topo);

/// Peak-to-peak arm energy over one grid period, trapezoidal integration.
double arm_energy_ripple(const OperatingPoint& op, const SystemSpec& spec);

/// Per-submodule capacitance holding the ripple within +/- epsilon of U_c.
double size_capacitor(const SystemSpec& spec, double delta_e, int n_total,
                      const TopologyDescriptor& topo);

struct MmcDesign {
    int n_total = 0;
    int n_half = 0;
    int n_full = 0;
    double hybridization_ratio = 0.0;
    double sm_capacitance = 0.0;
    double arm_energy_ripple = 0.0;
    DeviceModel device;
    int igbt_count_total = 0;
    double total_capacitance = 0.0;
    std::vector<std::string> warnings;

    /// Devices in one arm: 2 per HBSM, 4 per FBSM.
    int igbt_per_arm() const noexcept { return 2 * n_half + 4 * n_full; }
};

MmcDesign evaluate_mmc(const SystemSpec& spec, const OperatingPoint& op,
                       const TopologyDescriptor& topo, const Catalog& catalog);

}  // namespace petdse
