#include "petdse/sweep.hpp"

#include "petdse/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>

namespace petdse {

namespace {

double snap(double x) { return std::round(x * 1e9) / 1e9; }

}  // namespace

std::vector<double> make_grid(double lo, double hi, double step)
{
    if (!(lo > 0.0)) throw DomainError(fmt::format("grid start must be > 0 (got {})", lo));
    if (!(step > 0.0)) throw DomainError(fmt::format("grid step must be > 0 (got {})", step));
    if (hi < lo) throw DomainError(fmt::format("grid end {} is below start {}", hi, lo));
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) grid.push_back(snap(lo + static_cast<double>(i) * step));
    return grid;
}

SweepResult evaluate_grid(const SystemSpec& spec, const TopologyDescriptor& topo, const Catalog& catalog,
                          const CostVolumeCoefficients& coeffs, std::span<const double> grid, bool parallel)
{
    const auto baseline = compute_baseline(spec, catalog, coeffs);
    const auto n = static_cast<long>(grid.size());
    std::vector<std::optional<DesignEvaluation>> slots(grid.size());
    std::vector<std::string> violations(grid.size());
    std::vector<std::exception_ptr> failures(grid.size());

#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            slots[k] = evaluate_design(spec, topo, grid[k], catalog, coeffs, baseline);
        } catch (const FeasibilityError& e) {
            violations[k] = e.what();
        } catch (const OutOfRangeError& e) {
            violations[k] = e.what();
        } catch (const DomainError& e) {
            violations[k] = e.what();
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

    SweepResult r;
    r.topology = topo.kind;
    r.grid.reserve(grid.size());
    for (auto k : order) {
        r.grid.push_back(grid[k]);
        if (slots[k]) {
            r.evaluations.push_back(std::move(*slots[k]));
        } else {
            r.infeasible.push_back({grid[k], std::move(violations[k])});
        }
    }
    return r;
}

SweepResult sweep(const SystemSpec& spec, const TopologyDescriptor& topo, const Catalog& catalog,
                  const CostVolumeCoefficients& coeffs, double m_lo, double m_hi, double step)
{
    const auto grid = make_grid(m_lo, m_hi, step);
    return evaluate_grid(spec, topo, catalog, coeffs, grid, true);
}

SweepResult sweep_serial(const SystemSpec& spec, const TopologyDescriptor& topo, const Catalog& catalog,
                         const CostVolumeCoefficients& coeffs, double m_lo, double m_hi, double step)
{
    const auto grid = make_grid(m_lo, m_hi, step);
    return evaluate_grid(spec, topo, catalog, coeffs, grid, false);
}

std::string_view to_string(Objective objective) noexcept
{
    switch (objective) {
    case Objective::Cost: return "cost";
    case Objective::Volume: return "volume";
    case Objective::Loss: return "loss";
    }
    return "unknown";
}

double objective_value(const DesignEvaluation& e, Objective objective) noexcept
{
    switch (objective) {
    case Objective::Cost: return e.normalized.total_cost_ratio;
    case Objective::Volume: return e.normalized.total_volume_ratio;
    case Objective::Loss: return e.losses.total;
    }
    return 0.0;
}

Optimum find_optimum(const SweepResult& result, Objective objective)
{
    return find_optimum(std::span<const SweepResult>(&result, 1), objective);
}

Optimum find_optimum(std::span<const SweepResult> results, Objective objective)
{
    std::optional<Optimum> best;
    for (const auto& r : results) {
        for (const auto& e : r.evaluations) {
            const double v = objective_value(e, objective);
            if (!best || v < best->value || (v == best->value && e.m < best->m)) {
                best = Optimum{e.m, v, r.topology};
            }
        }
    }
    if (!best) throw FeasibilityError("no feasible design point to optimize over");
    return *best;
}

bool ParetoPoint::dominates(const ParetoPoint& o) const noexcept
{
    const bool no_worse = total_cost <= o.total_cost && total_volume <= o.total_volume && total_loss <= o.total_loss;
    const bool better = total_cost < o.total_cost || total_volume < o.total_volume || total_loss < o.total_loss;
    return no_worse && better;
}

std::vector<ParetoPoint> pareto_front(std::span<const SweepResult> results)
{
    std::vector<ParetoPoint> all;
    for (const auto& r : results) {
        for (const auto& e : r.evaluations) {
            all.push_back({e.m, r.topology, e.normalized.total_cost_ratio, e.normalized.total_volume_ratio,
                           e.losses.total});
        }
    }
    // Sort by cost so a point can only be dominated by something earlier (or
    // by an equal-cost neighbour, handled by the full scan below).
    std::vector<std::size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return all[a].total_cost < all[b].total_cost;
    });
    std::vector<bool> keep(all.size(), true);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        const auto& p = all[idx[a]];
        for (std::size_t b = 0; b < idx.size(); ++b) {
            const auto& q = all[idx[b]];
            if (q.total_cost > p.total_cost) break;
            if (b != a && q.dominates(p)) {
                keep[idx[a]] = false;
                break;
            }
        }
    }
    std::vector<ParetoPoint> front;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (keep[i]) front.push_back(all[i]);
    }
    return front;
}

namespace {

// 1 + number of rows strictly better; rows with rank 0 are absent.
template <typename Better>
void assign_ranks(std::vector<TopologyRanking>& rows, int TopologyRanking::*rank, Better better,
                  bool need_points)
{
    for (auto& r : rows) {
        if (need_points && r.points == 0) {
            r.*rank = 0;
            continue;
        }
        int ahead = 0;
        for (const auto& o : rows) {
            if (need_points && o.points == 0) continue;
            if (better(o, r)) ++ahead;
        }
        r.*rank = 1 + ahead;
    }
}

}  // namespace

RankingTable rank_topologies(const SystemSpec& spec, const Catalog& catalog,
                             const CostVolumeCoefficients& coeffs, double window_lo, double window_hi,
                             double step)
{
    if (!(window_hi >= window_lo) || !(window_lo > 0.0)) {
        throw DomainError(fmt::format("ranking window {}:{} is empty", window_lo, window_hi));
    }
    auto grid = make_grid(window_lo, window_hi, step);
    if (grid.size() > 1) grid.erase(grid.begin());  // the window is open on the left

    const TopologyKind kinds[] = {TopologyKind::HybridTraditional, TopologyKind::HybridSbb,
                                  TopologyKind::FullBridge};
    std::vector<SweepResult> results;
    for (auto k : kinds) {
        results.push_back(evaluate_grid(spec, catalog.topology(k), catalog, coeffs, grid, true));
    }

    RankingTable table;
    table.window_lo = window_lo;
    table.window_hi = window_hi;
    for (double m : grid) {
        bool all = true;
        bool any = false;
        for (const auto& r : results) {
            if (r.empty()) continue;
            any = true;
            const bool has = std::any_of(r.evaluations.begin(), r.evaluations.end(),
                                         [m](const DesignEvaluation& e) { return e.m == m; });
            all = all && has;
        }
        if (any && all) table.common_points.push_back(m);
    }

    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& topo = catalog.topology(kinds[i]);
        TopologyRanking row;
        row.topology = kinds[i];
        const double upper = std::min(topo.m_max, catalog.mmc_devices.upper());
        row.range_width = std::max(0.0, upper - topo.m_min);
        if (results[i].empty()) {
            table.gaps.push_back(fmt::format("{} has no feasible point in window {}:{}", to_string(kinds[i]),
                                             window_lo, window_hi));
        }
        for (const auto& e : results[i].evaluations) {
            if (!std::binary_search(table.common_points.begin(), table.common_points.end(), e.m)) continue;
            ++row.points;
            row.mean_power_density += 1.0 / e.normalized.total_volume_ratio;
            row.mean_efficiency += e.losses.efficiency;
            row.mean_cost += e.normalized.total_cost_ratio;
        }
        if (row.points > 0) {
            row.mean_power_density /= row.points;
            row.mean_efficiency /= row.points;
            row.mean_cost /= row.points;
        }
        table.rows.push_back(row);
    }

    using R = TopologyRanking;
    assign_ranks(table.rows, &R::range_rank, [](const R& a, const R& b) { return a.range_width > b.range_width; }, false);
    assign_ranks(table.rows, &R::cost_rank, [](const R& a, const R& b) { return a.mean_cost < b.mean_cost; }, true);
    assign_ranks(table.rows, &R::density_rank,
                 [](const R& a, const R& b) { return a.mean_power_density > b.mean_power_density; }, true);
    assign_ranks(table.rows, &R::efficiency_rank,
                 [](const R& a, const R& b) { return a.mean_efficiency > b.mean_efficiency; }, true);
    return table;
}

}  // namespace petdse
