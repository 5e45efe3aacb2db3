#include "petdse/catalog.hpp"

#include "petdse/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <utility>

namespace petdse {

namespace {

// Boundary slack for comparisons against table edges; grid values are snapped
// to 1e-9 so this only absorbs representation error.
constexpr double kEdgeTolerance = 1e-9;

DeviceModel make_device(std::string name, double rated_current, double r_on, double esw,
                        double cost, double volume)
{
    DeviceModel d;
    d.name = std::move(name);
    d.rated_voltage_v = 4500.0;
    d.rated_current_a = rated_current;
    d.v0_v = 1.0;
    d.r_on_ohm = r_on;
    d.esw_j = esw;
    d.i_ref_a = rated_current;
    d.v_ref_v = 2800.0;
    d.unit_cost = cost;
    d.unit_volume_l = volume;
    return d;
}

DeviceModel fz800() { return make_device("FZ800R45KL3_B5", 800.0, 2.2e-3, 6.0, 1600.0, 1.0); }
DeviceModel fz1000() { return make_device("FZ1000R45KL3_B5", 1000.0, 1.8e-3, 7.4, 1900.0, 1.0); }
DeviceModel fz1200() { return make_device("FZ1200R45KL3_B5", 1200.0, 1.5e-3, 8.9, 2200.0, 1.0); }
DeviceModel fz1500() { return make_device("FZ1500R45KL3_B5", 1500.0, 1.2e-3, 11.0, 2700.0, 1.2); }

}  // namespace

std::string_view to_string(TopologyKind kind) noexcept
{
    switch (kind) {
    case TopologyKind::HalfBridge: return "half-bridge";
    case TopologyKind::HybridTraditional: return "hybrid-traditional";
    case TopologyKind::HybridSbb: return "hybrid-sbb";
    case TopologyKind::FullBridge: return "full-bridge";
    }
    return "unknown";
}

std::string_view to_string(FbsmRule rule) noexcept
{
    switch (rule) {
    case FbsmRule::None: return "none";
    case FbsmRule::MinimalNegativeVoltage: return "minimal-negative-voltage";
    case FbsmRule::AllFullBridge: return "all-full-bridge";
    }
    return "unknown";
}

std::optional<TopologyKind> parse_topology_kind(std::string_view text) noexcept
{
    for (auto kind : {TopologyKind::HalfBridge, TopologyKind::HybridTraditional,
                      TopologyKind::HybridSbb, TopologyKind::FullBridge}) {
        if (text == to_string(kind)) return kind;
    }
    return std::nullopt;
}

std::optional<FbsmRule> parse_fbsm_rule(std::string_view text) noexcept
{
    for (auto rule : {FbsmRule::None, FbsmRule::MinimalNegativeVoltage, FbsmRule::AllFullBridge}) {
        if (text == to_string(rule)) return rule;
    }
    return std::nullopt;
}

TopologyDescriptor default_topology(TopologyKind kind)
{
    TopologyDescriptor t;
    t.kind = kind;
    switch (kind) {
    case TopologyKind::HalfBridge:
        t.m_min = 0.0;
        t.m_max = 1.0;
        t.fbsm_rule = FbsmRule::None;
        break;
    case TopologyKind::HybridTraditional:
        // Capacitor voltage balance limits the plain hybrid arm to m <= 2.
        t.m_min = 1.0;
        t.m_max = 2.0;
        t.fbsm_rule = FbsmRule::MinimalNegativeVoltage;
        break;
    case TopologyKind::HybridSbb:
        t.m_min = 1.0;
        t.m_max = 7.0;
        t.fbsm_rule = FbsmRule::MinimalNegativeVoltage;
        t.branch_igbt_count = 6;
        t.branch_cost = 15000.0;
        t.branch_volume_l = 14.0;
        t.branch_loss_fraction = 0.02;
        t.capacitor_reduction_factor = 0.8;
        break;
    case TopologyKind::FullBridge:
        // Bounded above only by the MMC device table.
        t.m_min = 0.0;
        t.m_max = 28.0;
        t.fbsm_rule = FbsmRule::AllFullBridge;
        break;
    }
    return t;
}

std::vector<std::string> validate_device_rows(std::string_view label,
                                              std::span<const DeviceTableRow> rows)
{
    std::vector<std::string> issues;
    if (rows.empty()) {
        issues.push_back(fmt::format("{}: device table is empty", label));
        return issues;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!(r.m_high > r.m_low)) {
            issues.push_back(fmt::format("{} row {} ({}): m_high {} must exceed m_low {}", label,
                                         i + 1, r.device.name, r.m_high, r.m_low));
        }
        if (!(r.device.rated_voltage_v > 0.0) || !(r.device.rated_current_a > 0.0)) {
            issues.push_back(fmt::format("{} row {} ({}): rated voltage and current must be > 0",
                                         label, i + 1, r.device.name));
        }
        if (r.device.v0_v < 0.0 || r.device.r_on_ohm < 0.0 || r.device.esw_j < 0.0) {
            issues.push_back(fmt::format("{} row {} ({}): loss coefficients must be >= 0", label,
                                         i + 1, r.device.name));
        }
        if (!(r.device.i_ref_a > 0.0) || !(r.device.v_ref_v > 0.0)) {
            issues.push_back(fmt::format("{} row {} ({}): reference current and voltage must be > 0",
                                         label, i + 1, r.device.name));
        }
        if (r.device.unit_cost < 0.0 || r.device.unit_volume_l < 0.0) {
            issues.push_back(fmt::format("{} row {} ({}): cost and volume must be >= 0", label,
                                         i + 1, r.device.name));
        }
        if (i == 0) continue;
        const auto& prev = rows[i - 1];
        const double gap = r.m_low - prev.m_high;
        if (gap > kEdgeTolerance) {
            issues.push_back(fmt::format("{} rows {} and {} leave a gap: ({}, {}] is uncovered",
                                         label, i, i + 1, prev.m_high, r.m_low));
        } else if (gap < -kEdgeTolerance) {
            issues.push_back(fmt::format("{} rows {} and {} overlap on ({}, {}]", label, i, i + 1,
                                         r.m_low, prev.m_high));
        }
    }
    return issues;
}

DeviceTable::DeviceTable(std::string label, std::vector<DeviceTableRow> rows)
    : label_(std::move(label)), rows_(std::move(rows))
{
    auto issues = validate_device_rows(label_, rows_);
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

double DeviceTable::lower() const noexcept { return rows_.empty() ? 0.0 : rows_.front().m_low; }
double DeviceTable::upper() const noexcept { return rows_.empty() ? 0.0 : rows_.back().m_high; }

const DeviceModel& DeviceTable::select(double m) const
{
    if (!rows_.empty()) {
        if (std::abs(m - rows_.front().m_low) <= kEdgeTolerance) return rows_.front().device;
        for (const auto& row : rows_) {
            if (m > row.m_low + kEdgeTolerance && m <= row.m_high + kEdgeTolerance) return row.device;
        }
    }
    throw OutOfRangeError(fmt::format("{}: no device for m = {} (supported [{}, {}])", label_, m,
                                      lower(), upper()),
                          lower(), upper());
}

const TopologyDescriptor& Catalog::topology(TopologyKind kind) const
{
    auto it = std::find_if(topologies.begin(), topologies.end(),
                           [kind](const TopologyDescriptor& t) { return t.kind == kind; });
    if (it == topologies.end()) {
        throw ConfigError({fmt::format("catalog has no topology '{}'", to_string(kind))});
    }
    return *it;
}

Catalog default_catalog()
{
    Catalog c;
    c.mmc_devices = DeviceTable("mmc_device", {
                                                  {1.0, 18.0, fz800()},
                                                  {18.0, 23.0, fz1000()},
                                                  {23.0, 28.0, fz1200()},
                                              });
    c.dcdc_devices = DeviceTable("dcdc_device", {
                                                    {1.0, 6.0, fz800()},
                                                    {6.0, 7.5, fz1000()},
                                                    {7.5, 9.0, fz1200()},
                                                    {9.0, 11.2, fz1500()},
                                                });
    c.topologies = {default_topology(TopologyKind::HalfBridge),
                    default_topology(TopologyKind::HybridTraditional),
                    default_topology(TopologyKind::HybridSbb),
                    default_topology(TopologyKind::FullBridge)};
    return c;
}

const DeviceModel& select_mmc_device(const Catalog& catalog, double m)
{
    return catalog.mmc_devices.select(m);
}

const DeviceModel& select_dcdc_device(const Catalog& catalog, double m)
{
    return catalog.dcdc_devices.select(m);
}

}  // namespace petdse
