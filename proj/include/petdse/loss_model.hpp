#pragma once

#include "petdse/dcdc_sizing.hpp"
#include "petdse/mmc_sizing.hpp"

#include <span>

namespace petdse {

/// Mean conduction loss of one arm over the sampled currents. Each HBSM puts
/// one device in the current path and each FBSM two, inserted or bypassed.
double arm_conduction_loss(int n_half, int n_full, const DeviceModel& device,
                           std::span<const double> arm_current);

struct MmcLoss {
    double conduction = 0.0;
    double switching = 0.0;
    double branch = 0.0;

    double total() const noexcept { return conduction + switching + branch; }
};

/// Switching uses the equivalent device frequency scaled by the topology's
/// capacitor reduction factor (balancing activity tracks the ripple budget).
MmcLoss mmc_losses(const OperatingPoint& op, const MmcDesign& mmc, const SystemSpec& spec,
                   const TopologyDescriptor& topo);

struct DcdcLoss {
    double conduction = 0.0;
    double switching = 0.0;

    double total() const noexcept { return conduction + switching; }
};

DcdcLoss dcdc_losses(const OperatingPoint& op, const DcdcDesign& dcdc, const SystemSpec& spec);

struct LossBreakdown {
    double mmc_conduction = 0.0;
    double mmc_switching = 0.0;
    double mmc_branch = 0.0;
    double dcdc_conduction = 0.0;
    double dcdc_switching = 0.0;
    double total = 0.0;
    double efficiency = 1.0;  ///< 1 by convention when rated power is 0

    double mmc_total() const noexcept { return mmc_conduction + mmc_switching + mmc_branch; }
};

LossBreakdown total_losses(const SystemSpec& spec, const OperatingPoint& op, const MmcDesign& mmc,
                           const DcdcDesign& dcdc, const TopologyDescriptor& topo);

}  // namespace petdse
