#pragma once

#include "petdse/calibration.hpp"
#include "petdse/catalog.hpp"
#include "petdse/evaluator.hpp"
#include "petdse/operating_point.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace petdse {

/// Sectioned key = value text. `[name]` opens a section, `[[name]]` appends a
/// new element to an array section. `#` and `;` start comments.
struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;
    bool is_array = false;
    int line = 0;
    std::vector<ConfigEntry> entries;
};

struct ConfigDocument {
    std::vector<ConfigSection> sections;
};

/// Throws ConfigError with every syntax problem found.
ConfigDocument parse_config_document(std::string_view text);

struct SweepSettings {
    double m_lo = 1.0;
    double m_hi = 7.0;
    double step = 0.05;
    std::vector<TopologyKind> topologies{TopologyKind::HybridTraditional, TopologyKind::HybridSbb,
                                         TopologyKind::FullBridge};

    bool operator==(const SweepSettings&) const = default;
};

struct OutputSettings {
    std::string directory = "out";
    bool csv = true;
    bool svg = true;

    bool operator==(const OutputSettings&) const = default;
};

struct RunConfig {
    SystemSpec system;
    Catalog catalog = default_catalog();
    CostVolumeCoefficients coefficients = default_coefficients();
    SweepSettings sweep;
    OutputSettings output;
    CalibrationOptions calibration;
};

/// Catalog defaults with the device and topology sections of `text` applied.
Catalog load_catalog(std::string_view text);

/// Full configuration; validation issues from every section are reported
/// together in one ConfigError.
RunConfig load_run_config(std::string_view text);
RunConfig load_run_config_file(const std::string& path);

/// Parses "csv,svg" style lists into the output flags.
std::vector<std::string> apply_formats(OutputSettings& out, std::string_view list);

}  // namespace petdse
