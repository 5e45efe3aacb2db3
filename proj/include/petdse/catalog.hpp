#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace petdse {

/// Switching device (IGBT module) with a linearised loss model.
///
/// Conduction: v_on(i) = v0_v + r_on_ohm * i.
/// Switching: esw_j per pulse measured at (i_ref_a, v_ref_v), scaled linearly in
/// current and blocking voltage.
struct DeviceModel {
    std::string name;
    double rated_voltage_v = 0.0;
    double rated_current_a = 0.0;
    double v0_v = 0.0;
    double r_on_ohm = 0.0;
    double esw_j = 0.0;
    double i_ref_a = 1.0;
    double v_ref_v = 1.0;
    double unit_cost = 0.0;
    double unit_volume_l = 0.0;

    double on_state_voltage(double current_a) const noexcept { return v0_v + r_on_ohm * current_a; }

    bool operator==(const DeviceModel&) const = default;
};

enum class TopologyKind { HalfBridge, HybridTraditional, HybridSbb, FullBridge };

/// How many full-bridge submodules an arm carries.
enum class FbsmRule {
    None,                    ///< half-bridge only
    MinimalNegativeVoltage,  ///< just enough FBSMs for the most negative arm voltage
    AllFullBridge,
};

std::string_view to_string(TopologyKind kind) noexcept;
std::string_view to_string(FbsmRule rule) noexcept;
std::optional<TopologyKind> parse_topology_kind(std::string_view text) noexcept;
std::optional<FbsmRule> parse_fbsm_rule(std::string_view text) noexcept;

/// Per-topology rules. Feasible modulation range is (m_min, m_max].
struct TopologyDescriptor {
    TopologyKind kind = TopologyKind::HalfBridge;
    double m_min = 0.0;
    double m_max = 1.0;
    FbsmRule fbsm_rule = FbsmRule::None;
    int branch_igbt_count = 0;
    double branch_cost = 0.0;
    double branch_volume_l = 0.0;
    double branch_loss_fraction = 0.0;
    double capacitor_reduction_factor = 1.0;

    bool operator==(const TopologyDescriptor&) const = default;
};

TopologyDescriptor default_topology(TopologyKind kind);

struct DeviceTableRow {
    double m_low = 0.0;
    double m_high = 0.0;
    DeviceModel device;

    bool operator==(const DeviceTableRow&) const = default;
};

/// Ordered, contiguous modulation-index intervals mapped to devices.
///
/// Each interval is (m_low, m_high]; the first row also owns its lower edge so
/// that the unmodulated baseline (m = m_low of the first row) resolves.
class DeviceTable {
public:
    DeviceTable() = default;
    /// Throws ConfigError when rows are unsorted, overlapping or gapped.
    DeviceTable(std::string label, std::vector<DeviceTableRow> rows);

    const DeviceModel& select(double m) const;

    std::span<const DeviceTableRow> rows() const noexcept { return rows_; }
    std::vector<DeviceTableRow>& mutable_rows() noexcept { return rows_; }
    const std::string& label() const noexcept { return label_; }
    double lower() const noexcept;
    double upper() const noexcept;

    bool operator==(const DeviceTable& other) const { return rows_ == other.rows_; }

private:
    std::string label_;
    std::vector<DeviceTableRow> rows_;
};

/// Returns one message per problem (empty when the rows form a valid table).
std::vector<std::string> validate_device_rows(std::string_view label,
                                              std::span<const DeviceTableRow> rows);

struct Catalog {
    DeviceTable mmc_devices;
    DeviceTable dcdc_devices;
    std::vector<TopologyDescriptor> topologies;

    const TopologyDescriptor& topology(TopologyKind kind) const;

    bool operator==(const Catalog&) const = default;
};

/// Default 4.5 kV IGBT tables for both stages plus the four topology descriptors.
Catalog default_catalog();

const DeviceModel& select_mmc_device(const Catalog& catalog, double m);
const DeviceModel& select_dcdc_device(const Catalog& catalog, double m);

}  // namespace petdse
