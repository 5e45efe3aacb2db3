#pragma once

#include "petdse/catalog.hpp"
#include "petdse/evaluator.hpp"
#include "petdse/operating_point.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace petdse {

enum class Metric { MmcCost, MmcVolume, DcdcCost, DcdcVolume, TotalCost, TotalVolume };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view text) noexcept;
double metric_value(const NormalizedRatios& r, Metric metric) noexcept;

struct CalibrationTarget {
    double m = 1.0;
    Metric metric = Metric::TotalCost;
    double target = 1.0;
    /// When unset: half-bridge for m <= 1, hybrid-sbb above.
    std::optional<TopologyKind> topology;

    TopologyKind resolved_topology() const noexcept;
};

/// CSV with header `m,metric,target[,topology]`. Throws ConfigError listing
/// every bad line.
std::vector<CalibrationTarget> parse_targets_csv(std::string_view text);
std::vector<CalibrationTarget> load_targets_file(const std::string& path);

/// Reference design-point ratios the shipped coefficients are fitted to.
std::vector<CalibrationTarget> reference_targets();

struct CalibrationOptions {
    std::uint64_t seed = 20240611;
    int starts = 24;
    int max_iterations = 300;
    bool parallel = true;
};

struct TargetResidual {
    CalibrationTarget target;
    double model = 0.0;
    double residual = 0.0;  ///< model - target
};

struct CalibrationResult {
    CostVolumeCoefficients coefficients;
    std::vector<TargetResidual> residuals;
    double sum_squares = 0.0;
    double max_abs_residual = 0.0;
    bool converged = false;
    int best_start = -1;
    std::vector<std::string> warnings;
};

/// Model residuals for a fixed coefficient set.
std::vector<TargetResidual> evaluate_targets(const SystemSpec& spec, const Catalog& catalog,
                                             const std::vector<CalibrationTarget>& targets,
                                             const CostVolumeCoefficients& coeffs);

/// Least-squares fit of the capacitor, transformer and diode coefficients.
/// IGBT scales and the transformer exponent are taken from `initial` and held
/// fixed: ratios are invariant under a common scale of all coefficients.
/// Deterministic for a given seed whether or not starts run in parallel.
CalibrationResult calibrate(const SystemSpec& spec, const Catalog& catalog,
                            const std::vector<CalibrationTarget>& targets,
                            const CostVolumeCoefficients& initial,
                            const CalibrationOptions& options = {});

}  // namespace petdse
