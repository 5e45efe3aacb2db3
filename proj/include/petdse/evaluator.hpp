#pragma once

#include "petdse/catalog.hpp"
#include "petdse/dcdc_sizing.hpp"
#include "petdse/loss_model.hpp"
#include "petdse/mmc_sizing.hpp"
#include "petdse/operating_point.hpp"

#include <string>
#include <vector>

namespace petdse {

/// Absolute cost/volume coefficients. Costs are in arbitrary currency units and
/// volumes in liters; only ratios against the baseline are reported.
struct CostVolumeCoefficients {
    double cap_cost_per_farad = 0.0;
    double cap_volume_per_farad = 0.0;
    double igbt_cost_scale = 1.0;
    double igbt_volume_scale = 1.0;
    double tx_total_cost = 0.0;
    double tx_volume_per_unit = 0.0;
    double diode_cost = 0.0;
    double diode_volume = 0.0;
    /// Transformer volume per unit is multiplied by (unit power / 1 MW)^exponent.
    /// 0 keeps volume proportional to the unit count.
    double tx_volume_exponent = 0.0;

    std::vector<std::string> validate() const;

    bool operator==(const CostVolumeCoefficients&) const = default;
};

/// The shipped, calibrated coefficients (also in data/calibrated_coefficients.ini).
CostVolumeCoefficients default_coefficients();

/// Coefficient-independent quantities that cost and volume are linear in.
struct DesignFeatures {
    double total_capacitance_f = 0.0;
    double mmc_igbt_cost = 0.0;    ///< sum of unit costs before scaling
    double mmc_igbt_volume = 0.0;
    double branch_cost = 0.0;
    double branch_volume = 0.0;
    double dcdc_igbt_cost = 0.0;
    double dcdc_igbt_volume = 0.0;
    double diode_count = 0.0;
    double tx_units = 0.0;         ///< unit count
    double tx_unit_power_mw = 0.0;
};

struct StageTotals {
    double mmc_cost = 0.0;
    double mmc_volume = 0.0;
    double dcdc_cost = 0.0;
    double dcdc_volume = 0.0;

    double total_cost() const noexcept { return mmc_cost + dcdc_cost; }
    double total_volume() const noexcept { return mmc_volume + dcdc_volume; }
};

DesignFeatures design_features(const MmcDesign& mmc, const DcdcDesign& dcdc,
                               const TopologyDescriptor& topo);
StageTotals apply_coefficients(const DesignFeatures& f, const CostVolumeCoefficients& c);

struct NormalizedRatios {
    double mmc_cost_ratio = 1.0;
    double mmc_volume_ratio = 1.0;
    double dcdc_cost_ratio = 1.0;
    double dcdc_volume_ratio = 1.0;
    double total_cost_ratio = 1.0;
    double total_volume_ratio = 1.0;
};

NormalizedRatios normalize(const StageTotals& design, const StageTotals& baseline);

struct DesignEvaluation {
    double m = 0.0;
    TopologyKind topology = TopologyKind::HalfBridge;
    OperatingPoint op;
    MmcDesign mmc;
    DcdcDesign dcdc;
    DesignFeatures features;
    double mmc_cost = 0.0;
    double mmc_volume = 0.0;
    double dcdc_cost = 0.0;
    double dcdc_volume = 0.0;
    double total_cost = 0.0;
    double total_volume = 0.0;
    LossBreakdown losses;
    NormalizedRatios normalized;
};

/// Half-bridge at m = 1 with the same spec, catalog and coefficients.
StageTotals compute_baseline(const SystemSpec& spec, const Catalog& catalog,
                             const CostVolumeCoefficients& coeffs);

/// Throws FeasibilityError for an infeasible (topology, m) and OutOfRangeError
/// when a device table does not cover m.
DesignEvaluation evaluate_design(const SystemSpec& spec, const TopologyDescriptor& topo, double m,
                                 const Catalog& catalog, const CostVolumeCoefficients& coeffs);
DesignEvaluation evaluate_design(const SystemSpec& spec, const TopologyDescriptor& topo, double m,
                                 const Catalog& catalog, const CostVolumeCoefficients& coeffs,
                                 const StageTotals& baseline);

}  // namespace petdse
