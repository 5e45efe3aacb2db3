#include "petdse/config.hpp"

#include "petdse/errors.hpp"
#include "text_util.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace petdse {

namespace {

using Issues = std::vector<std::string>;

std::string_view strip_comment(std::string_view line)
{
    // A comment starts at '#' or ';' at line start or after whitespace.
    for (std::size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string unquote(std::string_view v)
{
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
    return std::string(v);
}

// Binds keys of one section to typed destinations and reports bad values.
class Binder {
public:
    Binder(const ConfigSection& section, Issues& issues) : section_(section), issues_(issues) {}

    Binder& num(const char* key, double& dst)
    {
        handlers_[key] = [this, &dst](const ConfigEntry& e) {
            if (auto v = text_util::parse_double(e.value)) {
                dst = *v;
            } else {
                bad(e, "a number");
            }
        };
        return *this;
    }

    Binder& integer(const char* key, int& dst)
    {
        handlers_[key] = [this, &dst](const ConfigEntry& e) {
            if (auto v = text_util::parse_int(e.value)) {
                dst = static_cast<int>(*v);
            } else {
                bad(e, "an integer");
            }
        };
        return *this;
    }

    Binder& text(const char* key, std::string& dst)
    {
        handlers_[key] = [&dst](const ConfigEntry& e) { dst = e.value; };
        return *this;
    }

    Binder& custom(const char* key, std::function<void(const ConfigEntry&)> fn)
    {
        handlers_[key] = std::move(fn);
        return *this;
    }

    void apply() const
    {
        for (const auto& e : section_.entries) {
            auto it = handlers_.find(e.key);
            if (it == handlers_.end()) {
                issues_.push_back(fmt::format("line {}: unknown key '{}' in [{}]", e.line, e.key, section_.name));
            } else {
                it->second(e);
            }
        }
    }

    void bad(const ConfigEntry& e, const char* what) const
    {
        issues_.push_back(fmt::format("line {}: {}.{} must be {} (got '{}')", e.line, section_.name, e.key,
                                      what, e.value));
    }

private:
    const ConfigSection& section_;
    Issues& issues_;
    std::map<std::string, std::function<void(const ConfigEntry&)>, std::less<>> handlers_;
};

void bind_device(Binder& b, DeviceModel& d)
{
    b.text("name", d.name)
        .num("rated_voltage_v", d.rated_voltage_v)
        .num("rated_current_a", d.rated_current_a)
        .num("v0_v", d.v0_v)
        .num("r_on_ohm", d.r_on_ohm)
        .num("esw_j", d.esw_j)
        .num("i_ref_a", d.i_ref_a)
        .num("v_ref_v", d.v_ref_v)
        .num("cost", d.unit_cost)
        .num("volume_l", d.unit_volume_l);
}

DeviceTableRow parse_device_row(const ConfigSection& s, Issues& issues)
{
    DeviceTableRow row;
    row.m_low = std::numeric_limits<double>::quiet_NaN();
    row.m_high = std::numeric_limits<double>::quiet_NaN();
    Binder b(s, issues);
    b.num("m_low", row.m_low).num("m_high", row.m_high);
    bind_device(b, row.device);
    b.apply();
    if (std::isnan(row.m_low) || std::isnan(row.m_high)) {
        issues.push_back(fmt::format("line {}: [[{}]] needs m_low and m_high", s.line, s.name));
    }
    if (row.device.name.empty()) {
        issues.push_back(fmt::format("line {}: [[{}]] needs a name", s.line, s.name));
    }
    return row;
}

void apply_topology_section(const ConfigSection& s, std::vector<TopologyDescriptor>& topologies,
                            Issues& issues)
{
    auto kind_entry = std::find_if(s.entries.begin(), s.entries.end(),
                                   [](const ConfigEntry& e) { return e.key == "kind"; });
    if (kind_entry == s.entries.end()) {
        issues.push_back(fmt::format("line {}: [[topology]] needs a kind", s.line));
        return;
    }
    auto kind = parse_topology_kind(kind_entry->value);
    if (!kind) {
        issues.push_back(fmt::format("line {}: unknown topology kind '{}'", kind_entry->line, kind_entry->value));
        return;
    }
    auto it = std::find_if(topologies.begin(), topologies.end(),
                           [&](const TopologyDescriptor& t) { return t.kind == *kind; });
    if (it == topologies.end()) {
        topologies.push_back(default_topology(*kind));
        it = topologies.end() - 1;
    }
    auto& t = *it;
    Binder b(s, issues);
    b.custom("kind", [](const ConfigEntry&) {})
        .num("m_min", t.m_min)
        .num("m_max", t.m_max)
        .custom("fbsm_rule",
                [&](const ConfigEntry& e) {
                    if (auto r = parse_fbsm_rule(e.value)) {
                        t.fbsm_rule = *r;
                    } else {
                        issues.push_back(fmt::format("line {}: unknown fbsm_rule '{}'", e.line, e.value));
                    }
                })
        .integer("branch_igbt_count", t.branch_igbt_count)
        .num("branch_cost", t.branch_cost)
        .num("branch_volume_l", t.branch_volume_l)
        .num("branch_loss_fraction", t.branch_loss_fraction)
        .num("capacitor_reduction_factor", t.capacitor_reduction_factor);
    b.apply();
}

void validate_topology(const TopologyDescriptor& t, Issues& issues)
{
    const auto name = to_string(t.kind);
    if (!(t.m_max > t.m_min)) issues.push_back(fmt::format("topology {}: m_max must exceed m_min", name));
    if (t.m_min < 0.0) issues.push_back(fmt::format("topology {}: m_min must be >= 0", name));
    if (!(t.capacitor_reduction_factor > 0.0 && t.capacitor_reduction_factor <= 1.0)) {
        issues.push_back(fmt::format("topology {}: capacitor_reduction_factor must be in (0, 1]", name));
    }
    if (t.branch_igbt_count < 0 || t.branch_cost < 0.0 || t.branch_volume_l < 0.0 ||
        t.branch_loss_fraction < 0.0) {
        issues.push_back(fmt::format("topology {}: branch overhead must be >= 0", name));
    }
    if (t.kind == TopologyKind::HalfBridge && (t.m_max > 1.0 || t.fbsm_rule != FbsmRule::None)) {
        issues.push_back("topology half-bridge: needs m_max <= 1 and fbsm_rule = none");
    }
}

// Applies a `[device.NAME]`-style partial override to every matching row.
void apply_device_override(const ConfigSection& s, std::string_view name,
                           std::vector<DeviceTableRow*> rows, Issues& issues)
{
    bool matched = false;
    for (auto* row : rows) {
        if (row->device.name != name) continue;
        matched = true;
        Issues local;
        Binder b(s, local);
        bind_device(b, row->device);
        b.apply();
        for (auto& i : local) {
            if (std::find(issues.begin(), issues.end(), i) == issues.end()) issues.push_back(std::move(i));
        }
    }
    if (!matched) issues.push_back(fmt::format("line {}: [{}] matches no device", s.line, s.name));
}

void build_catalog(const ConfigDocument& doc, Catalog& catalog, Issues& issues)
{
    std::vector<DeviceTableRow> mmc_rows;
    std::vector<DeviceTableRow> dcdc_rows;
    for (const auto& s : doc.sections) {
        if (s.is_array && s.name == "mmc_device") mmc_rows.push_back(parse_device_row(s, issues));
        if (s.is_array && s.name == "dcdc_device") dcdc_rows.push_back(parse_device_row(s, issues));
    }
    auto replace_table = [&](DeviceTable& table, std::vector<DeviceTableRow> rows, const char* label) {
        if (rows.empty()) return;
        auto found = validate_device_rows(label, rows);
        if (found.empty()) {
            table = DeviceTable(label, std::move(rows));
        } else {
            issues.insert(issues.end(), found.begin(), found.end());
        }
    };
    replace_table(catalog.mmc_devices, std::move(mmc_rows), "mmc_device");
    replace_table(catalog.dcdc_devices, std::move(dcdc_rows), "dcdc_device");

    for (const auto& s : doc.sections) {
        if (s.is_array && s.name == "topology") apply_topology_section(s, catalog.topologies, issues);
    }

    for (const auto& s : doc.sections) {
        if (s.is_array) continue;
        const auto dot = s.name.find('.');
        if (dot == std::string::npos) continue;
        const auto prefix = std::string_view(s.name).substr(0, dot);
        const auto name = std::string_view(s.name).substr(dot + 1);
        std::vector<DeviceTableRow*> rows;
        if (prefix == "device" || prefix == "mmc_device") {
            for (auto& r : catalog.mmc_devices.mutable_rows()) rows.push_back(&r);
        }
        if (prefix == "device" || prefix == "dcdc_device") {
            for (auto& r : catalog.dcdc_devices.mutable_rows()) rows.push_back(&r);
        }
        if (rows.empty()) continue;
        apply_device_override(s, name, std::move(rows), issues);
    }
    for (auto* table : {&catalog.mmc_devices, &catalog.dcdc_devices}) {
        auto found = validate_device_rows(table->label(), table->rows());
        for (auto& i : found) {
            if (std::find(issues.begin(), issues.end(), i) == issues.end()) issues.push_back(std::move(i));
        }
    }
    for (const auto& t : catalog.topologies) validate_topology(t, issues);
}

bool is_catalog_section(const ConfigSection& s)
{
    if (s.is_array) return s.name == "mmc_device" || s.name == "dcdc_device" || s.name == "topology";
    const auto dot = s.name.find('.');
    if (dot == std::string::npos) return false;
    const auto prefix = std::string_view(s.name).substr(0, dot);
    return prefix == "device" || prefix == "mmc_device" || prefix == "dcdc_device";
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({fmt::format("cannot read config file '{}'", path)});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ConfigDocument parse_config_document(std::string_view text)
{
    ConfigDocument doc;
    Issues issues;
    int line_no = 0;
    std::map<std::string, int, std::less<>> seen_plain;
    for (auto raw : text_util::split_lines(text)) {
        ++line_no;
        auto line = text_util::trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            const bool array = line.starts_with("[[");
            const std::size_t open = array ? 2 : 1;
            if (line.size() < open * 2 + 1 || !line.ends_with(array ? "]]" : "]")) {
                issues.push_back(fmt::format("line {}: malformed section header '{}'", line_no, line));
                continue;
            }
            auto name = text_util::trim(line.substr(open, line.size() - 2 * open));
            if (name.empty()) {
                issues.push_back(fmt::format("line {}: empty section name", line_no));
                continue;
            }
            if (!array) {
                auto [it, inserted] = seen_plain.emplace(std::string(name), line_no);
                if (!inserted) {
                    issues.push_back(fmt::format("line {}: section [{}] already defined on line {}", line_no,
                                                 name, it->second));
                }
            }
            doc.sections.push_back({std::string(name), array, line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            issues.push_back(fmt::format("line {}: expected 'key = value'", line_no));
            continue;
        }
        auto key = text_util::trim(line.substr(0, eq));
        auto value = text_util::trim(line.substr(eq + 1));
        if (key.empty()) {
            issues.push_back(fmt::format("line {}: missing key", line_no));
            continue;
        }
        if (doc.sections.empty()) {
            issues.push_back(fmt::format("line {}: key '{}' outside any section", line_no, key));
            continue;
        }
        auto& entries = doc.sections.back().entries;
        if (std::any_of(entries.begin(), entries.end(), [&](const ConfigEntry& e) { return e.key == key; })) {
            issues.push_back(fmt::format("line {}: duplicate key '{}'", line_no, key));
            continue;
        }
        entries.push_back({std::string(key), unquote(value), line_no});
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return doc;
}

Catalog load_catalog(std::string_view text)
{
    const auto doc = parse_config_document(text);
    Catalog catalog = default_catalog();
    Issues issues;
    build_catalog(doc, catalog, issues);
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return catalog;
}

std::vector<std::string> apply_formats(OutputSettings& out, std::string_view list)
{
    Issues issues;
    out.csv = false;
    out.svg = false;
    for (const auto& f : text_util::split(list, ',')) {
        if (f == "csv") {
            out.csv = true;
        } else if (f == "svg") {
            out.svg = true;
        } else if (!f.empty()) {
            issues.push_back(fmt::format("unknown output format '{}' (expected csv, svg)", f));
        }
    }
    return issues;
}

RunConfig load_run_config(std::string_view text)
{
    const auto doc = parse_config_document(text);
    RunConfig cfg;
    Issues issues;
    build_catalog(doc, cfg.catalog, issues);

    for (const auto& s : doc.sections) {
        if (is_catalog_section(s)) continue;
        if (s.is_array) {
            issues.push_back(fmt::format("line {}: unknown array section [[{}]]", s.line, s.name));
            continue;
        }
        Binder b(s, issues);
        if (s.name == "system") {
            auto& p = cfg.system;
            b.num("rated_power_w", p.rated_power_w)
                .num("ac_voltage_amplitude_v", p.ac_voltage_amplitude_v)
                .num("grid_frequency_hz", p.grid_frequency_hz)
                .num("sm_capacitor_voltage_v", p.sm_capacitor_voltage_v)
                .num("capacitor_ripple_ratio", p.capacitor_ripple_ratio)
                .num("lv_unit_dc_voltage_v", p.lv_unit_dc_voltage_v)
                .num("dcdc_switching_frequency_hz", p.dcdc_switching_frequency_hz)
                .num("transformer_frequency_hz", p.transformer_frequency_hz)
                .num("transformer_ratio", p.transformer_ratio)
                .num("power_factor", p.power_factor)
                .num("mmc_device_switching_frequency_hz", p.mmc_device_switching_frequency_hz)
                .integer("waveform_samples", p.waveform_samples)
                .integer("dcdc_igbt_per_unit", p.dcdc_igbt_per_unit)
                .integer("dcdc_diode_per_unit", p.dcdc_diode_per_unit)
                .num("dcdc_zvs_factor", p.dcdc_zvs_factor);
        } else if (s.name == "coefficients") {
            auto& c = cfg.coefficients;
            b.num("cap_cost_per_farad", c.cap_cost_per_farad)
                .num("cap_volume_per_farad", c.cap_volume_per_farad)
                .num("igbt_cost_scale", c.igbt_cost_scale)
                .num("igbt_volume_scale", c.igbt_volume_scale)
                .num("tx_total_cost", c.tx_total_cost)
                .num("tx_volume_per_unit", c.tx_volume_per_unit)
                .num("diode_cost", c.diode_cost)
                .num("diode_volume", c.diode_volume)
                .num("tx_volume_exponent", c.tx_volume_exponent);
        } else if (s.name == "sweep") {
            auto& w = cfg.sweep;
            b.num("m_min", w.m_lo).num("m_max", w.m_hi).num("step", w.step).custom("topologies", [&](const ConfigEntry& e) {
                w.topologies.clear();
                for (const auto& name : text_util::split(e.value, ',')) {
                    if (auto k = parse_topology_kind(name)) {
                        w.topologies.push_back(*k);
                    } else {
                        issues.push_back(fmt::format("line {}: unknown topology '{}'", e.line, name));
                    }
                }
            });
        } else if (s.name == "output") {
            b.text("directory", cfg.output.directory).custom("formats", [&](const ConfigEntry& e) {
                for (auto& i : apply_formats(cfg.output, e.value)) {
                    issues.push_back(fmt::format("line {}: {}", e.line, i));
                }
            });
        } else if (s.name == "calibration") {
            auto& c = cfg.calibration;
            b.custom("seed",
                     [&](const ConfigEntry& e) {
                         auto v = text_util::parse_int(e.value);
                         if (v && *v >= 0) {
                             c.seed = static_cast<std::uint64_t>(*v);
                         } else {
                             b.bad(e, "a non-negative integer");
                         }
                     })
                .integer("starts", c.starts)
                .integer("max_iterations", c.max_iterations)
                .custom("parallel", [&](const ConfigEntry& e) {
                    if (e.value == "true") {
                        c.parallel = true;
                    } else if (e.value == "false") {
                        c.parallel = false;
                    } else {
                        b.bad(e, "true or false");
                    }
                });
        } else {
            issues.push_back(fmt::format("line {}: unknown section [{}]", s.line, s.name));
            continue;
        }
        b.apply();
    }

    auto more = cfg.system.validate();
    issues.insert(issues.end(), more.begin(), more.end());
    more = cfg.coefficients.validate();
    issues.insert(issues.end(), more.begin(), more.end());
    if (!(cfg.sweep.m_lo > 0.0)) issues.push_back("sweep.m_min must be > 0");
    if (!(cfg.sweep.m_hi >= cfg.sweep.m_lo)) issues.push_back("sweep.m_max must be >= sweep.m_min");
    if (!(cfg.sweep.step > 0.0)) issues.push_back("sweep.step must be > 0");
    if (cfg.sweep.topologies.empty()) issues.push_back("sweep.topologies must name at least one topology");
    if (cfg.calibration.starts < 1) issues.push_back("calibration.starts must be >= 1");
    if (cfg.calibration.max_iterations < 1) issues.push_back("calibration.max_iterations must be >= 1");
    if (cfg.output.directory.empty()) issues.push_back("output.directory must not be empty");

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

RunConfig load_run_config_file(const std::string& path)
{
    return load_run_config(read_file(path));
}

}  // namespace petdse
