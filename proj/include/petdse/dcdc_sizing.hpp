#pragma once

#include "petdse/catalog.hpp"
#include "petdse/operating_point.hpp"

namespace petdse {

/// Units needed to stack up to u_dc; at least one.
int unit_count(const SystemSpec& spec, double u_dc);

/// Input-parallel, output-series DC/DC stage.
struct DcdcDesign {
    int unit_count = 0;
    double per_unit_power = 0.0;
    double input_current_per_unit = 0.0;
    double output_series_current = 0.0;
    DeviceModel device;
    int igbt_per_unit = 0;
    int diode_per_unit = 0;
    int igbt_count_total = 0;
    int diode_count_total = 0;
    double tx_per_unit_power = 0.0;
};

/// Throws OutOfRangeError when the DC/DC table has no device for op.m.
DcdcDesign evaluate_dcdc(const SystemSpec& spec, const OperatingPoint& op, const Catalog& catalog);

}  // namespace petdse
