#pragma once

#include "petdse/calibration.hpp"
#include "petdse/evaluator.hpp"
#include "petdse/sweep.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace petdse {

/// Six significant digits, '.' separator, locale independent.
std::string format_number(double value);

inline constexpr std::string_view kSweepCsvHeader =
    "topology,m,u_dc_v,n_dc_units,n_sm,n_half,n_full,c_sm_f,mmc_igbt,dcdc_igbt,mmc_cost_ratio,"
    "mmc_volume_ratio,dcdc_cost_ratio,dcdc_volume_ratio,total_cost_ratio,total_volume_ratio,"
    "loss_total_w,efficiency";

std::string sweep_csv(const SweepResult& result);
/// Columns topology,m,violation across all results.
std::string infeasible_csv(std::span<const SweepResult> results);
std::string residuals_csv(std::span<const TargetResidual> residuals);
/// `[coefficients]` section in the config format.
std::string coefficients_ini(const CostVolumeCoefficients& c);

struct ChartSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line chart with linear axes.
std::string svg_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                           std::span<const ChartSeries> series);

enum class Figure { Volume, Cost, Losses };
std::string figure_file_name(Figure fig);
std::string sweep_figure(Figure fig, std::span<const SweepResult> results);

std::uint64_t fnv1a64(std::string_view bytes);

struct ManifestInfo {
    std::string command;
    std::uint64_t config_hash = 0;
    double m_lo = 0.0;
    double m_hi = 0.0;
    double step = 0.0;
    std::size_t grid_points = 0;
    std::vector<std::string> artifacts;
};

std::string run_manifest_csv(const ManifestInfo& info);

/// Human-readable single-design report; `key_value` switches to one
/// `key=value` per line for scripting.
std::string design_report(const DesignEvaluation& e, const DcdcDesign& baseline_dcdc, bool key_value);

std::string ranking_report(const RankingTable& table);

}  // namespace petdse
