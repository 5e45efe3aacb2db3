#include "petdse/dcdc_sizing.hpp"

#include "petdse/errors.hpp"
#include "rounding.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace petdse {

int unit_count(const SystemSpec& spec, double u_dc)
{
    if (!(u_dc > 0.0)) throw DomainError(fmt::format("u_dc must be > 0 (got {})", u_dc));
    return std::max(1, detail::ceil_count(u_dc / spec.lv_unit_dc_voltage_v));
}

DcdcDesign evaluate_dcdc(const SystemSpec& spec, const OperatingPoint& op, const Catalog& catalog)
{
    DcdcDesign d;
    d.unit_count = unit_count(spec, op.u_dc);
    d.per_unit_power = spec.rated_power_w / d.unit_count;
    d.input_current_per_unit = d.per_unit_power / spec.lv_unit_dc_voltage_v;
    d.output_series_current = spec.rated_power_w / op.u_dc;
    d.device = select_dcdc_device(catalog, op.m);
    d.igbt_per_unit = spec.dcdc_igbt_per_unit;
    d.diode_per_unit = spec.dcdc_diode_per_unit;
    d.igbt_count_total = d.unit_count * d.igbt_per_unit;
    d.diode_count_total = d.unit_count * d.diode_per_unit;
    d.tx_per_unit_power = d.per_unit_power;
    return d;
}

}  // namespace petdse
