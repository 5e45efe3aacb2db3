#pragma once

#include "petdse/catalog.hpp"
#include "petdse/evaluator.hpp"
#include "petdse/operating_point.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace petdse {

/// lo, lo + step, ... up to hi (inclusive within 1e-9), each snapped to 1e-9.
/// A step larger than the span gives the single point lo.
std::vector<double> make_grid(double lo, double hi, double step);

struct InfeasiblePoint {
    double m = 0.0;
    std::string violation;
};

struct SweepResult {
    TopologyKind topology = TopologyKind::HalfBridge;
    std::vector<double> grid;
    std::vector<DesignEvaluation> evaluations;  ///< feasible points, ascending m
    std::vector<InfeasiblePoint> infeasible;    ///< ascending m

    bool empty() const noexcept { return evaluations.empty(); }
};

/// Evaluates `grid` (any order) and returns points sorted by m. Infeasible
/// topology ranges and uncovered device-table spans are recorded, not thrown.
SweepResult evaluate_grid(const SystemSpec& spec, const TopologyDescriptor& topo, const Catalog& catalog,
                          const CostVolumeCoefficients& coeffs, std::span<const double> grid,
                          bool parallel);

/// OpenMP over grid points.
SweepResult sweep(const SystemSpec& spec, const TopologyDescriptor& topo, const Catalog& catalog,
                  const CostVolumeCoefficients& coeffs, double m_lo, double m_hi, double step);

/// Single-threaded reference; identical output to sweep().
SweepResult sweep_serial(const SystemSpec& spec, const TopologyDescriptor& topo, const Catalog& catalog,
                         const CostVolumeCoefficients& coeffs, double m_lo, double m_hi, double step);

enum class Objective { Cost, Volume, Loss };

std::string_view to_string(Objective objective) noexcept;
double objective_value(const DesignEvaluation& e, Objective objective) noexcept;

struct Optimum {
    double m = 0.0;
    double value = 0.0;
    TopologyKind topology = TopologyKind::HalfBridge;
};

/// Grid argmin; ties go to the smaller m. Cost and volume use the normalized
/// totals, loss the total loss in watts. Throws FeasibilityError when empty.
Optimum find_optimum(const SweepResult& result, Objective objective);
/// Across several results; ties go to the smaller m, then to the earlier result.
Optimum find_optimum(std::span<const SweepResult> results, Objective objective);

struct ParetoPoint {
    double m = 0.0;
    TopologyKind topology = TopologyKind::HalfBridge;
    double total_cost = 0.0;    ///< ratio to baseline
    double total_volume = 0.0;  ///< ratio to baseline
    double total_loss = 0.0;    ///< watts

    bool dominates(const ParetoPoint& other) const noexcept;
};

/// Non-dominated points (minimizing all three), ordered by input result then m.
std::vector<ParetoPoint> pareto_front(std::span<const SweepResult> results);

struct TopologyRanking {
    TopologyKind topology = TopologyKind::HybridTraditional;
    double range_width = 0.0;
    int points = 0;  ///< window points used for the means
    double mean_power_density = 0.0;  ///< mean of 1 / total_volume_ratio
    double mean_efficiency = 0.0;
    double mean_cost = 0.0;           ///< mean total_cost_ratio
    int range_rank = 0;
    int cost_rank = 0;        ///< 0 when the topology has no point in the window
    int density_rank = 0;
    int efficiency_rank = 0;
};

struct RankingTable {
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::vector<double> common_points;
    std::vector<TopologyRanking> rows;
    std::vector<std::string> gaps;
};

/// Compares the three boost-capable topologies over the grid points of
/// (lo, hi] (just lo when lo == hi) feasible for every topology present.
RankingTable rank_topologies(const SystemSpec& spec, const Catalog& catalog,
                             const CostVolumeCoefficients& coeffs, double window_lo, double window_hi,
                             double step = 0.05);

}  // namespace petdse
