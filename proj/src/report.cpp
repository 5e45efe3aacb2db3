#include "petdse/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace petdse {

std::string format_number(double value)
{
    if (value == 0.0) return "0";  // also folds -0
    return fmt::format("{:.6g}", value);
}

std::string sweep_csv(const SweepResult& result)
{
    std::string out(kSweepCsvHeader);
    out += '\n';
    const auto topo = to_string(result.topology);
    for (const auto& e : result.evaluations) {
        const auto& n = e.normalized;
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", topo, format_number(e.m),
                           format_number(e.op.u_dc), e.dcdc.unit_count, e.mmc.n_total, e.mmc.n_half,
                           e.mmc.n_full, format_number(e.mmc.sm_capacitance), e.mmc.igbt_count_total,
                           e.dcdc.igbt_count_total, format_number(n.mmc_cost_ratio),
                           format_number(n.mmc_volume_ratio), format_number(n.dcdc_cost_ratio),
                           format_number(n.dcdc_volume_ratio), format_number(n.total_cost_ratio),
                           format_number(n.total_volume_ratio), format_number(e.losses.total),
                           format_number(e.losses.efficiency));
    }
    return out;
}

namespace {

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Rounds a span to a 1/2/5 step and returns (lo, hi, step).
struct Axis {
    double lo;
    double hi;
    double step;
};

Axis nice_axis(double lo, double hi)
{
    if (!(hi > lo)) {
        const double pad = std::abs(lo) > 0 ? std::abs(lo) * 0.1 : 1.0;
        lo -= pad;
        hi += pad;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double f : {1.0, 2.0, 5.0, 10.0}) {
        if (f * mag >= raw) {
            step = f * mag;
            break;
        }
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step, step};
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string infeasible_csv(std::span<const SweepResult> results)
{
    std::string out = "topology,m,violation\n";
    for (const auto& r : results) {
        for (const auto& p : r.infeasible) {
            out += fmt::format("{},{},{}\n", to_string(r.topology), format_number(p.m), csv_field(p.violation));
        }
    }
    return out;
}

std::string residuals_csv(std::span<const TargetResidual> residuals)
{
    std::string out = "m,metric,target,model,residual\n";
    for (const auto& r : residuals) {
        out += fmt::format("{},{},{},{},{}\n", format_number(r.target.m), to_string(r.target.metric),
                           format_number(r.target.target), format_number(r.model), format_number(r.residual));
    }
    return out;
}

std::string coefficients_ini(const CostVolumeCoefficients& c)
{
    // Full precision so that a written file reloads to the same values.
    auto num = [](double v) { return fmt::format("{:.17g}", v); };
    std::string out = "[coefficients]\n";
    out += fmt::format("cap_cost_per_farad = {}\n", num(c.cap_cost_per_farad));
    out += fmt::format("cap_volume_per_farad = {}\n", num(c.cap_volume_per_farad));
    out += fmt::format("igbt_cost_scale = {}\n", num(c.igbt_cost_scale));
    out += fmt::format("igbt_volume_scale = {}\n", num(c.igbt_volume_scale));
    out += fmt::format("tx_total_cost = {}\n", num(c.tx_total_cost));
    out += fmt::format("tx_volume_per_unit = {}\n", num(c.tx_volume_per_unit));
    out += fmt::format("diode_cost = {}\n", num(c.diode_cost));
    out += fmt::format("diode_volume = {}\n", num(c.diode_volume));
    out += fmt::format("tx_volume_exponent = {}\n", num(c.tx_volume_exponent));
    return out;
}

std::string svg_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                           std::span<const ChartSeries> series)
{
    constexpr double W = 760, H = 480, L = 80, R = 190, T = 50, B = 60;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
        for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    const auto ax = nice_axis(xmin, xmax);
    const auto ay = nice_axis(ymin, ymax);
    const double pw = W - L - R, ph = H - T - B;
    auto px = [&](double x) { return L + (x - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double y) { return T + ph - (y - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::string out;
    out += fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        W, H);
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
    out += fmt::format("<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n", L + pw / 2,
                       xml_escape(title));

    // Grid lines and tick labels.
    const int nx = static_cast<int>(std::lround((ax.hi - ax.lo) / ax.step));
    for (int i = 0; i <= nx; ++i) {
        const double v = ax.lo + i * ax.step;
        const double x = px(v);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#dddddd\"/>\n", x, T,
                           T + ph);
        out += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, T + ph + 18,
                           format_number(v));
    }
    const int ny = static_cast<int>(std::lround((ay.hi - ay.lo) / ay.step));
    for (int i = 0; i <= ny; ++i) {
        const double v = ay.lo + i * ay.step;
        const double y = py(v);
        out += fmt::format("<line x1=\"{1}\" y1=\"{0:.2f}\" x2=\"{2}\" y2=\"{0:.2f}\" stroke=\"#dddddd\"/>\n", y, L,
                           L + pw);
        out += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", L - 6, y + 4,
                           format_number(v));
    }
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", L,
                       T, pw, ph);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", L + pw / 2, H - 15,
                       xml_escape(x_label));
    out += fmt::format(
        "<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
        T + ph / 2, xml_escape(y_label));

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        const char* color = kPalette[s % std::size(kPalette)];
        std::string pts;
        for (std::size_t i = 0; i < ser.x.size() && i < ser.y.size(); ++i) {
            if (!pts.empty()) pts += ' ';
            pts += fmt::format("{:.2f},{:.2f}", px(ser.x[i]), py(ser.y[i]));
        }
        out += fmt::format(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"><title>{}</title></polyline>\n",
            color, pts, xml_escape(ser.name));
        const double ly = T + 20 + 22.0 * static_cast<double>(s);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           L + pw + 15, ly, L + pw + 40, color);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", L + pw + 46, ly + 4, xml_escape(ser.name));
    }
    out += "</svg>\n";
    return out;
}

std::string figure_file_name(Figure fig)
{
    switch (fig) {
    case Figure::Volume: return "fig5_volume.svg";
    case Figure::Cost: return "fig6_cost.svg";
    case Figure::Losses: return "fig7_losses.svg";
    }
    return "figure.svg";
}

std::string sweep_figure(Figure fig, std::span<const SweepResult> results)
{
    std::vector<ChartSeries> series;
    for (const auto& r : results) {
        ChartSeries s;
        s.name = std::string(to_string(r.topology));
        for (const auto& e : r.evaluations) {
            s.x.push_back(e.m);
            switch (fig) {
            case Figure::Volume: s.y.push_back(e.normalized.total_volume_ratio); break;
            case Figure::Cost: s.y.push_back(e.normalized.total_cost_ratio); break;
            case Figure::Losses: s.y.push_back(e.losses.mmc_total()); break;
            }
        }
        series.push_back(std::move(s));
    }
    switch (fig) {
    case Figure::Volume:
        return svg_line_chart("Total volume vs modulation index", "modulation index m",
                              "total volume / baseline", series);
    case Figure::Cost:
        return svg_line_chart("Total cost vs modulation index", "modulation index m", "total cost / baseline",
                              series);
    case Figure::Losses:
        return svg_line_chart("MMC power losses vs modulation index", "modulation index m", "MMC loss (W)",
                              series);
    }
    return {};
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string run_manifest_csv(const ManifestInfo& info)
{
    std::string out = "key,value\n";
    out += fmt::format("command,{}\n", csv_field(info.command));
    out += fmt::format("config_hash,{:016x}\n", info.config_hash);
    out += fmt::format("m_min,{}\n", format_number(info.m_lo));
    out += fmt::format("m_max,{}\n", format_number(info.m_hi));
    out += fmt::format("step,{}\n", format_number(info.step));
    out += fmt::format("grid_points,{}\n", info.grid_points);
    for (const auto& a : info.artifacts) out += fmt::format("artifact,{}\n", csv_field(a));
    return out;
}

std::string design_report(const DesignEvaluation& e, const DcdcDesign& baseline_dcdc, bool key_value)
{
    struct Item {
        std::string key;
        std::string value;
    };
    const auto& n = e.normalized;
    const auto& l = e.losses;
    const std::vector<Item> items = {
        {"topology", std::string(to_string(e.topology))},
        {"m", format_number(e.m)},
        {"u_dc_v", format_number(e.op.u_dc)},
        {"i_dc_a", format_number(e.op.i_dc)},
        {"ac_current_amplitude_a", format_number(e.op.ac_current_amplitude)},
        {"n_sm", std::to_string(e.mmc.n_total)},
        {"n_half", std::to_string(e.mmc.n_half)},
        {"n_full", std::to_string(e.mmc.n_full)},
        {"hybridization_ratio", format_number(e.mmc.hybridization_ratio)},
        {"arm_energy_ripple_j", format_number(e.mmc.arm_energy_ripple)},
        {"c_sm_f", format_number(e.mmc.sm_capacitance)},
        {"total_capacitance_f", format_number(e.mmc.total_capacitance)},
        {"mmc_device", e.mmc.device.name},
        {"mmc_igbt", std::to_string(e.mmc.igbt_count_total)},
        {"n_dc_units", std::to_string(e.dcdc.unit_count)},
        {"dcdc_per_unit_power_w", format_number(e.dcdc.per_unit_power)},
        {"dcdc_input_current_per_unit_a", format_number(e.dcdc.input_current_per_unit)},
        {"dcdc_output_series_current_a", format_number(e.dcdc.output_series_current)},
        {"dcdc_device", e.dcdc.device.name},
        {"dcdc_igbt", std::to_string(e.dcdc.igbt_count_total)},
        {"dcdc_diodes", std::to_string(e.dcdc.diode_count_total)},
        {"mmc_cost", format_number(e.mmc_cost)},
        {"mmc_volume_l", format_number(e.mmc_volume)},
        {"dcdc_cost", format_number(e.dcdc_cost)},
        {"dcdc_volume_l", format_number(e.dcdc_volume)},
        {"total_cost", format_number(e.total_cost)},
        {"total_volume_l", format_number(e.total_volume)},
        {"mmc_cost_ratio", format_number(n.mmc_cost_ratio)},
        {"mmc_volume_ratio", format_number(n.mmc_volume_ratio)},
        {"dcdc_cost_ratio", format_number(n.dcdc_cost_ratio)},
        {"dcdc_volume_ratio", format_number(n.dcdc_volume_ratio)},
        {"total_cost_ratio", format_number(n.total_cost_ratio)},
        {"total_volume_ratio", format_number(n.total_volume_ratio)},
        {"loss_mmc_conduction_w", format_number(l.mmc_conduction)},
        {"loss_mmc_switching_w", format_number(l.mmc_switching)},
        {"loss_mmc_branch_w", format_number(l.mmc_branch)},
        {"loss_dcdc_conduction_w", format_number(l.dcdc_conduction)},
        {"loss_dcdc_switching_w", format_number(l.dcdc_switching)},
        {"loss_total_w", format_number(l.total)},
        {"efficiency", format_number(l.efficiency)},
    };

    const int g = std::gcd(e.dcdc.unit_count, baseline_dcdc.unit_count);
    const auto unit_fraction =
        g > 0 ? fmt::format("{}/{}", e.dcdc.unit_count / g, baseline_dcdc.unit_count / g) : std::string("n/a");

    std::string out;
    if (key_value) {
        for (const auto& it : items) out += fmt::format("{}={}\n", it.key, it.value);
        out += fmt::format("n_dc_units_baseline={}\n", baseline_dcdc.unit_count);
        out += fmt::format("n_dc_units_fraction={}\n", unit_fraction);
        for (const auto& w : e.mmc.warnings) out += fmt::format("warning={}\n", w);
        return out;
    }
    out += fmt::format("Design point: {} at m = {} (U_dc = {} kV)\n", to_string(e.topology), format_number(e.m),
                       format_number(e.op.u_dc / 1e3));
    std::size_t width = 0;
    for (const auto& it : items) width = std::max(width, it.key.size());
    for (const auto& it : items) out += fmt::format("  {:<{}}  {}\n", it.key, width, it.value);
    out += "Summary vs baseline (half-bridge, m = 1):\n";
    out += fmt::format("  DC/DC units: {} = {} of the baseline {}\n", e.dcdc.unit_count, unit_fraction,
                       baseline_dcdc.unit_count);
    out += fmt::format("  MMC stage:   cost {} x, volume {} x\n", format_number(n.mmc_cost_ratio),
                       format_number(n.mmc_volume_ratio));
    out += fmt::format("  DC/DC stage: cost {} x, volume {} x\n", format_number(n.dcdc_cost_ratio),
                       format_number(n.dcdc_volume_ratio));
    out += fmt::format("  Total:       cost {} x, volume {} x, efficiency {}\n", format_number(n.total_cost_ratio),
                       format_number(n.total_volume_ratio), format_number(l.efficiency));
    for (const auto& w : e.mmc.warnings) out += fmt::format("  warning: {}\n", w);
    return out;
}

std::string ranking_report(const RankingTable& t)
{
    auto rank = [](int r) { return r > 0 ? std::to_string(r) : std::string("-"); };
    std::string out = fmt::format("Topology ranking, window ({}, {}], {} common grid point(s)\n",
                                  format_number(t.window_lo), format_number(t.window_hi), t.common_points.size());
    out += fmt::format("{:<20} {:>10} {:>6} {:>12} {:>8} {:>12} {:>8} {:>12} {:>8} {:>10}\n", "topology",
                       "m_range", "rank", "mean_cost", "rank", "density", "rank", "efficiency", "rank", "points");
    for (const auto& r : t.rows) {
        const bool has = r.points > 0;
        out += fmt::format("{:<20} {:>10} {:>6} {:>12} {:>8} {:>12} {:>8} {:>12} {:>8} {:>10}\n",
                           to_string(r.topology), format_number(r.range_width), rank(r.range_rank),
                           has ? format_number(r.mean_cost) : "-", rank(r.cost_rank),
                           has ? format_number(r.mean_power_density) : "-", rank(r.density_rank),
                           has ? format_number(r.mean_efficiency) : "-", rank(r.efficiency_rank), r.points);
    }
    for (const auto& g : t.gaps) out += fmt::format("gap: {}\n", g);
    return out;
}

}  // namespace petdse
